"""Element trees, their first-child/next-sibling binary encoding, and XML text.

Binary trees are built from :class:`Bin` nodes (a label plus exactly two
children) and the shared :data:`UNDERSCORE` leaf.  The same node classes are
reused as right-hand sides of tree grammars, which add nonterminal calls and
parameter leaves (see :mod:`gcx.grammar`).

Every traversal here uses an explicit stack: encoded documents are often
long right-spines (a thousand siblings is a thousand-deep binary chain) and
grammar expansions can be deeper still.
"""

import io
import xml.etree.ElementTree as ET

from .errors import ParseError, ValidationError

_FORBIDDEN = set("<>/()," + " \t\r\n")


def check_label(label):
    """Raise ``ValueError`` unless *label* is a usable element name."""
    if not isinstance(label, str) or not label:
        raise ValueError(f"label must be a non-empty string, got {label!r}")
    bad = _FORBIDDEN.intersection(label)
    if bad or label == "_" or label.startswith("^"):
        raise ValueError(f"invalid label {label!r}")
    return label


class TreeNode:
    """Shared structural equality, hashing and term formatting.

    Subclasses provide ``_sig`` (what distinguishes the node itself),
    ``_kids`` (ordered children) and ``_head`` (its term-syntax name).
    """

    __slots__ = ()

    def _sig(self):
        raise NotImplementedError

    def _kids(self):
        return ()

    def _head(self):
        raise NotImplementedError

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, TreeNode):
            return NotImplemented
        stack = [(self, other)]
        while stack:
            a, b = stack.pop()
            if a is b:
                continue
            if a._sig() != b._sig():
                return False
            ka, kb = a._kids(), b._kids()
            if len(ka) != len(kb):
                return False
            stack.extend(zip(ka, kb))
        return True

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        h = 0
        for node in iter_preorder(self):
            h = hash((h, node._sig()))
        return h

    def __repr__(self):
        return format_term(self)


class _Underscore(TreeNode):
    """The ``_`` leaf: a missing first child or next sibling."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def _sig(self):
        return ("_",)

    def _head(self):
        return "_"

    def __reduce__(self):
        return (_Underscore, ())


UNDERSCORE = _Underscore()


class Bin(TreeNode):
    """Labeled binary node; ``left`` is the first child, ``right`` the next sibling."""

    __slots__ = ("label", "left", "right", "marked")

    def __init__(self, label, left=UNDERSCORE, right=UNDERSCORE, marked=False):
        self.label = label
        self.left = left
        self.right = right
        self.marked = marked

    def _sig(self):
        return ("b", self.label, self.marked)

    def _kids(self):
        return (self.left, self.right)

    def _head(self):
        return ("^" if self.marked else "") + self.label


def iter_preorder(node):
    """Yield *node* and its descendants in pre-order (left before right)."""
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        kids = n._kids()
        if kids:
            stack.extend(reversed(kids))


def format_term(node):
    """Render a tree in term syntax, e.g. ``lib(B(B(_)),_)``."""
    out = []
    stack = [node]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        out.append(item._head())
        kids = item._kids()
        if kids:
            stack.append(")")
            for i in range(len(kids) - 1, -1, -1):
                stack.append(kids[i])
                if i:
                    stack.append(",")
            stack.append("(")
    return "".join(out)


def copy_tree(b):
    """Fresh copy of a binary tree (no nodes shared with *b*)."""
    if not isinstance(b, Bin):
        return b
    root = Bin(b.label, None, None, b.marked)
    stack = [(b, root)]
    while stack:
        src, dst = stack.pop()
        for attr in ("left", "right"):
            child = getattr(src, attr)
            if isinstance(child, Bin):
                new = Bin(child.label, None, None, child.marked)
                stack.append((child, new))
                child = new
            setattr(dst, attr, child)
    return root


def count_labeled(node):
    return sum(1 for n in iter_preorder(node) if isinstance(n, Bin))


def tree_size(node):
    """Number of edges, counting edges into ``_`` leaves."""
    return sum(len(n._kids()) for n in iter_preorder(node))


class Node:
    """Node of an unranked, ordered element tree."""

    __slots__ = ("label", "children", "marked")

    def __init__(self, label, children=None, marked=False):
        self.label = label
        self.children = list(children) if children else []
        self.marked = marked

    def __eq__(self, other):
        if not isinstance(other, Node):
            return NotImplemented
        stack = [(self, other)]
        while stack:
            a, b = stack.pop()
            if a.label != b.label or a.marked != b.marked:
                return False
            if len(a.children) != len(b.children):
                return False
            stack.extend(zip(a.children, b.children))
        return True

    __hash__ = None

    def __repr__(self):
        return f"Node({self.label!r}, {len(self.children)} children)"

    def iter(self):
        """Nodes in document order."""
        stack = [self]
        while stack:
            n = stack.pop()
            yield n
            stack.extend(reversed(n.children))

    def __len__(self):
        return sum(1 for _ in self.iter())


def parse_xml(text, strict=False):
    """Parse an XML document into its element tree.

    Only elements matter. Text, attributes, comments and processing
    instructions are dropped, or rejected when *strict* is true.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    parser = ET.XMLPullParser(events=("start", "end", "comment", "pi"))
    root = None
    stack = []

    def reject(what):
        raise ParseError(f"strict mode: document contains {what}")

    try:
        for chunk in _chunks(text):
            parser.feed(chunk)
            for event, elem in parser.read_events():
                if event == "start":
                    if strict and elem.attrib:
                        reject(f"attributes on <{elem.tag}>")
                    node = Node(check_xml_label(elem.tag))
                    if stack:
                        stack[-1].children.append(node)
                    else:
                        root = node
                    stack.append(node)
                elif event == "end":
                    if strict:
                        if elem.text and elem.text.strip():
                            reject(f"text inside <{elem.tag}>")
                        for child in elem:
                            if child.tail and child.tail.strip():
                                reject(f"text inside <{elem.tag}>")
                    stack.pop()
                    if stack and not strict:
                        # keep memory flat on large inputs
                        elem.clear()
                elif strict and stack:
                    reject("a comment" if event == "comment" else "a processing instruction")
        parser.close()
    except ET.ParseError as exc:
        line, col = getattr(exc, "position", (None, None))
        raise ParseError(f"malformed XML: {exc}", line, col) from None
    if root is None:
        raise ParseError("empty document")
    return root


def check_xml_label(tag):
    try:
        return check_label(tag)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _chunks(text, size=1 << 16):
    buf = io.StringIO(text)
    while True:
        chunk = buf.read(size)
        if not chunk:
            return
        yield chunk


def fcns_encode(t):
    """First-child/next-sibling encoding of an unranked tree."""
    first_child = {}
    stack = [(t, False)]
    while stack:
        n, done = stack.pop()
        if not done:
            stack.append((n, True))
            stack.extend((c, False) for c in n.children)
            continue
        chain = UNDERSCORE
        for c in reversed(n.children):
            chain = Bin(c.label, first_child.pop(id(c)), chain, c.marked)
        first_child[id(n)] = chain
    return Bin(t.label, first_child.pop(id(t)), UNDERSCORE, t.marked)


def fcns_decode(b):
    """Inverse of :func:`fcns_encode`; *b* must be a document (no root sibling)."""
    if not isinstance(b, Bin):
        raise ValidationError(["tree is a bare leaf, not a document"])
    if b.right is not UNDERSCORE:
        raise ValidationError(["root has a next sibling: the tree encodes a forest"])
    root = Node(b.label, marked=b.marked)
    stack = [(b.left, root)]
    while stack:
        cur, parent = stack.pop()
        while isinstance(cur, Bin):
            node = Node(cur.label, marked=cur.marked)
            parent.children.append(node)
            stack.append((cur.left, node))
            cur = cur.right
        if cur is not UNDERSCORE:
            raise ValidationError([f"unexpected leaf {cur!r} in binary tree"])
    return root


def preorder_ids(b):
    """Map pre-order numbers (1-based, ``_`` leaves skipped) to nodes."""
    ids = {}
    for n in iter_preorder(b):
        if isinstance(n, Bin):
            ids[len(ids) + 1] = n
    return ids


def serialize_subtree(b, u, mark="^"):
    """XML text of node *u* and its unranked descendants.

    *u* is a node of *b* or its pre-order number. The next-sibling part of
    *u* is not included. Tags are always paired.
    """
    if isinstance(u, int):
        try:
            u = preorder_ids(b)[u]
        except KeyError:
            raise IndexError(f"no node with pre-order number {u}") from None
    if not isinstance(u, Bin):
        raise ValueError("cannot serialize a '_' leaf")
    out = io.StringIO()
    write_subtree(u, out, mark)
    return out.getvalue()


def write_subtree(u, out, mark="^"):
    name = (mark if u.marked else "") + u.label
    out.write(f"<{name}>")
    stack = [f"</{name}>", u.left]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.write(item)
        elif isinstance(item, Bin):
            name = (mark if item.marked else "") + item.label
            out.write(f"<{name}>")
            stack.append(item.right)
            stack.append(f"</{name}>")
            stack.append(item.left)


def to_xml(b, mark="^"):
    return serialize_subtree(b, b, mark)
