"""Persistent offset lists built from shared Shift/Concat nodes.

A chunk's marked positions are never copied into the chunks that use it.
The caller holds a reference wrapped in a :class:`Shift` instead, so the
number of nodes allocated while building all chunk tables stays linear in
the grammar no matter how many marks the expansion contains.
"""


class OffsetList:
    __slots__ = ("length",)

    def __iter__(self):
        return iter(flatten(self))

    def __len__(self):
        return self.length


class _Empty(OffsetList):
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance.length = 0
        return cls._instance

    def __repr__(self):
        return "Empty"


EMPTY = _Empty()


class Single(OffsetList):
    __slots__ = ("offset",)

    def __init__(self, offset):
        self.offset = offset
        self.length = 1

    def __repr__(self):
        return f"Single({self.offset})"


class Concat(OffsetList):
    __slots__ = ("left", "right")

    def __init__(self, left, right):
        self.left = left
        self.right = right
        self.length = left.length + right.length

    def __repr__(self):
        return f"Concat({self.left!r}, {self.right!r})"


class Shift(OffsetList):
    __slots__ = ("delta", "inner")

    def __init__(self, delta, inner):
        self.delta = delta
        self.inner = inner
        self.length = inner.length

    def __repr__(self):
        return f"Shift({self.delta}, {self.inner!r})"


class OffsetBuilder:
    """Smart constructors that skip no-op nodes and count allocations."""

    def __init__(self):
        self.allocations = 0

    def single(self, offset):
        self.allocations += 1
        return Single(offset)

    def concat(self, left, right):
        if left is EMPTY:
            return right
        if right is EMPTY:
            return left
        self.allocations += 1
        return Concat(left, right)

    def shift(self, delta, inner):
        if delta == 0 or inner is EMPTY:
            return inner
        if isinstance(inner, Shift):
            delta += inner.delta
            inner = inner.inner
        self.allocations += 1
        return Shift(delta, inner)


def flatten(offsets):
    """The offsets in order, in time linear in their number.

    Empty subtrees are never built, and shifts are collapsed on
    construction, so every visited node either yields a value or has two
    non-empty children.
    """
    out = []
    stack = [(offsets, 0)]
    while stack:
        node, delta = stack.pop()
        if isinstance(node, Single):
            out.append(node.offset + delta)
        elif isinstance(node, Concat):
            stack.append((node.right, delta))
            stack.append((node.left, delta))
        elif isinstance(node, Shift):
            stack.append((node.inner, delta + node.delta))
    return out
