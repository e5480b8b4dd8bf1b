"""Chunk tables: per-rule segments of the pre-order traversal.

A rank-k rule body, traversed in pre-order, is cut by its parameter
leaves into k+1 chunks. For each chunk we keep its labeled-node count and
the offsets of its marked nodes, both assembled from the chunks of the
nonterminals it calls, so nothing is ever expanded.
"""

from ..grammar import Call, Param, topo_order
from ..tree import Bin
from .behavior import relabel
from .offsets import EMPTY, OffsetBuilder, flatten

OPEN = "open"
CLOSE = "close"
CHUNK = "chunk"
PARAM = "param"


def walk(body):
    """Pre-order events of a rule body.

    Yields ``(OPEN, node)`` and ``(CLOSE, node)`` around the first-child
    part of each labeled node, ``(CHUNK, name, c)`` for chunk ``c`` of a
    called nonterminal (interleaved with its arguments) and
    ``(PARAM, i)`` at parameter leaf ``yi``.
    """
    stack = [body]
    while stack:
        item = stack.pop()
        if isinstance(item, tuple):
            yield item
        elif isinstance(item, Bin):
            yield (OPEN, item)
            stack.append(item.right)
            stack.append((CLOSE, item))
            stack.append(item.left)
        elif isinstance(item, Call):
            m = len(item.args)
            stack.append((CHUNK, item.name, m))
            for i in range(m - 1, -1, -1):
                stack.append(item.args[i])
                stack.append((CHUNK, item.name, i))
        elif isinstance(item, Param):
            yield (PARAM, item.index)


class ChunkTable:
    """``lengths[(A, c)]`` labeled nodes and ``marks[(A, c)]`` offsets per chunk."""

    def __init__(self, lengths, marks, allocations):
        self.lengths = lengths
        self.marks = marks
        self.allocations = allocations

    def total(self, name):
        """Labeled-node count of ``val(name)``."""
        total = 0
        c = 0
        while (name, c) in self.lengths:
            total += self.lengths[(name, c)]
            c += 1
        return total

    def offsets(self, name, chunk=0):
        return flatten(self.marks[(name, chunk)])


def build_chunks(g, track_marks=True):
    """Chunk lengths and mark offsets for every reachable rule, callees first."""
    lengths = {}
    marks = {}
    builder = OffsetBuilder()
    for name in topo_order(g):
        c = 0
        n = 0
        found = EMPTY
        for event in walk(g.rules[name].body):
            kind = event[0]
            if kind == OPEN:
                n += 1
                if track_marks and event[1].marked:
                    found = builder.concat(found, builder.single(n))
            elif kind == CHUNK:
                key = (event[1], event[2])
                if track_marks:
                    found = builder.concat(found, builder.shift(n, marks[key]))
                n += lengths[key]
            elif kind == PARAM:
                lengths[(name, c)] = n
                marks[(name, c)] = found
                c += 1
                n = 0
                found = EMPTY
        lengths[(name, c)] = n
        marks[(name, c)] = found
    return ChunkTable(lengths, marks, builder.allocations)


def chunk_lengths(g):
    return build_chunks(g, track_marks=False)


def materialize(g, automaton, behavior=None):
    """Pre-order numbers of the selected nodes of ``val(g)``, ascending.

    The start rule has a single chunk spanning the whole traversal, so its
    offsets are already absolute pre-order numbers.
    """
    relabeled = relabel(g, automaton, behavior)
    table = build_chunks(relabeled)
    return table.offsets(relabeled.start)
