"""XPath fragment (child, descendant, following-sibling; names and ``*``) to DST automata.

Queries are absolute and evaluated from a virtual super-root whose only
child is the document element, so ``/a`` tests the root element itself.

Child/descendant queries go through a path DFA: the positions of the step
sequence form an NFA (a descendant step loops on every label before its
test, ``*`` matches every label), the subset construction makes it
deterministic, and the minimal DFA is lifted to a tree automaton whose
first-child state advances and whose next-sibling state stays put.

Queries with following-sibling steps use the same subset idea directly on
tree positions: a state is the set of steps the current node is a
candidate for, and sibling steps propagate along the next-sibling spine
the way descendant steps propagate down first children.
"""

import re
from typing import NamedTuple, Optional

from .automaton import DEFAULT, DstAutomaton, Rule
from .errors import DfaBlowupError, UnsupportedQueryError

CHILD = "child"
DESCENDANT = "descendant"
FOLLOWING_SIBLING = "following-sibling"
AXES = (CHILD, DESCENDANT, FOLLOWING_SIBLING)

DEFAULT_MAX_STATES = 2**16

_AXIS_RE = re.compile(r"\s*([A-Za-z-]+)\s*::\s*")
_NAME_RE = re.compile(r"[A-Za-z_À-￿][\w.\-·À-￿]*")


class Step(NamedTuple):
    axis: str
    test: Optional[str]  # None is the wildcard

    def matches(self, label):
        return self.test is None or self.test == label

    def __str__(self):
        return f"{self.axis}::{'*' if self.test is None else self.test}"


class XPathQuery(NamedTuple):
    steps: tuple

    def __str__(self):
        return "".join(f"/{s}" for s in self.steps)

    def names(self):
        return sorted({s.test for s in self.steps if s.test is not None})


def parse_xpath(text):
    """Parse ``/a//b/*/following-sibling::c`` style queries."""
    src = text.strip()
    for ch, what in (("[", "filters ([...])"), ("@", "attribute tests"), ("|", "unions")):
        if ch in src:
            raise UnsupportedQueryError(f"{what} are not supported: {text!r}")
    if not src.startswith("/"):
        raise UnsupportedQueryError(f"only absolute queries are supported: {text!r}")
    steps = []
    pos = 0
    while pos < len(src):
        if src.startswith("//", pos):
            axis = DESCENDANT
            pos += 2
            double = True
        elif src.startswith("/", pos):
            axis = CHILD
            pos += 1
            double = False
        else:
            raise UnsupportedQueryError(f"expected '/' at offset {pos} in {text!r}")
        m = _AXIS_RE.match(src, pos)
        if m:
            explicit = m.group(1)
            if explicit not in AXES:
                raise UnsupportedQueryError(f"axis {explicit}:: is not supported")
            if double and explicit == FOLLOWING_SIBLING:
                raise UnsupportedQueryError("'//following-sibling::' is not supported")
            # //child::a and //descendant::a both select descendants
            axis = DESCENDANT if double else explicit
            pos = m.end()
        if src.startswith("*", pos):
            test = None
            pos += 1
        else:
            m = _NAME_RE.match(src, pos)
            if not m:
                rest = src[pos:pos + 12]
                if rest.startswith("."):
                    raise UnsupportedQueryError(f"'.' and '..' steps are not supported: {text!r}")
                raise UnsupportedQueryError(f"expected a name test at offset {pos} in {text!r}")
            test = m.group(0)
            pos = m.end()
            if src.startswith("(", pos):
                raise UnsupportedQueryError(f"functions and node-type tests ({test}()) are not supported")
        steps.append(Step(axis, test))
        if pos < len(src) and src[pos] != "/":
            raise UnsupportedQueryError(f"unexpected {src[pos]!r} at offset {pos} in {text!r}")
    if not steps:
        raise UnsupportedQueryError("empty query")
    if steps[0].axis == FOLLOWING_SIBLING:
        raise UnsupportedQueryError("a query cannot start with following-sibling")
    return XPathQuery(tuple(steps))


class PathDfa:
    """DFA over label sequences with a default transition per state.

    ``exceptions[s]`` maps the labels whose target differs from
    ``default[s]``; every other label follows the default.
    """

    def __init__(self, initial, finals, default, exceptions):
        self.initial = initial
        self.finals = frozenset(finals)
        self.default = list(default)
        self.exceptions = [dict(e) for e in exceptions]

    @property
    def n_states(self):
        return len(self.default)

    def step(self, state, label):
        return self.exceptions[state].get(label, self.default[state])

    def run(self, labels):
        s = self.initial
        for w in labels:
            s = self.step(s, w)
        return s

    def accepts(self, labels):
        return self.run(labels) in self.finals

    def alphabet(self):
        return sorted({w for e in self.exceptions for w in e})

    def __repr__(self):
        return f"<PathDfa states={self.n_states} finals={sorted(self.finals)}>"


def _determinize(initial, move, alphabet, max_states, targets=lambda result: (result,)):
    """Subset-style exploration shared by both constructions.

    *move(subset, label)* computes a successor record, ``label=None``
    standing for every label outside *alphabet*; *targets* extracts the
    subsets it leads to. Returns the discovered subsets (index = state
    number), their index and one ``{label: record}`` row per state.
    """
    index = {initial: 0}
    subsets = [initial]
    rows = []
    for cur in subsets:
        row = {}
        for w in list(alphabet) + [None]:
            result = move(cur, w)
            for t in targets(result):
                if t not in index:
                    if len(subsets) >= max_states:
                        raise DfaBlowupError(f"automaton exceeds {max_states} states")
                    index[t] = len(subsets)
                    subsets.append(t)
            row[w] = result
        rows.append(row)
    return subsets, index, rows


def segment_to_dfa(steps, max_states=DEFAULT_MAX_STATES):
    """Path DFA accepting exactly the root-to-node label paths the steps select."""
    steps = tuple(steps)
    if any(s.axis == FOLLOWING_SIBLING for s in steps):
        raise ValueError("segment_to_dfa handles child and descendant steps only")
    n = len(steps)
    alphabet = sorted({s.test for s in steps if s.test is not None})

    def move(positions, label):
        out = set()
        for i in positions:
            if i == n:
                continue
            step = steps[i]
            if step.axis == DESCENDANT:
                out.add(i)
            if step.test is None or (label is not None and step.test == label):
                out.add(i + 1)
        return frozenset(out)

    subsets, index, rows = _determinize(frozenset([0]), move, alphabet, max_states)
    default = []
    exceptions = []
    for row in rows:
        d = index[row[None]]
        default.append(d)
        exceptions.append({w: index[t] for w, t in row.items() if w is not None and index[t] != d})
    finals = {i for i, s in enumerate(subsets) if n in s}
    return PathDfa(0, finals, default, exceptions)


def minimize_dfa(dfa):
    """Minimal equivalent DFA, states renumbered breadth-first from the initial state."""
    alphabet = dfa.alphabet()
    symbols = alphabet + [None]

    def target(s, w):
        return dfa.default[s] if w is None else dfa.step(s, w)

    block = [1 if s in dfa.finals else 0 for s in range(dfa.n_states)]
    while True:
        sigs = {}
        new = []
        for s in range(dfa.n_states):
            sig = (block[s],) + tuple(block[target(s, w)] for w in symbols)
            new.append(sigs.setdefault(sig, len(sigs)))
        if len(sigs) == len(set(block)):
            break
        block = new
    return _rebuild_dfa(dfa, block, symbols, target)


def _rebuild_dfa(dfa, block, symbols, target):
    rep = {}
    for s in range(dfa.n_states):
        rep.setdefault(block[s], s)
    number = {block[dfa.initial]: 0}
    queue = [block[dfa.initial]]
    default, exceptions, finals = [], [], set()
    for b in queue:
        s = rep[b]
        if s in dfa.finals:
            finals.add(number[b])
        row = {}
        for w in symbols:
            tb = block[target(s, w)]
            if tb not in number:
                number[tb] = len(number)
                queue.append(tb)
            row[w] = number[tb]
        d = row.pop(None)
        default.append(d)
        exceptions.append({w: t for w, t in row.items() if t != d})
    return PathDfa(0, finals, default, exceptions)


def dfa_canonical_form(dfa, alphabet=None):
    """Breadth-first renumbered transition structure, including finality."""
    alphabet = sorted(set(alphabet or ()) | set(dfa.alphabet()))
    number = {dfa.initial: 0}
    queue = [dfa.initial]
    rows = []
    for s in queue:
        row = []
        for w in alphabet + [None]:
            t = dfa.default[s] if w is None else dfa.step(s, w)
            if t not in number:
                number[t] = len(number)
                queue.append(t)
            row.append(number[t])
        rows.append((s in dfa.finals, tuple(row)))
    return tuple(alphabet), tuple(rows)


def _is_dead(dfa, s):
    return s not in dfa.finals and dfa.default[s] == s and not dfa.exceptions[s]


def lift_dfa(dfa):
    """Tree automaton running *dfa* along every root-to-node path.

    A DFA move ``s --w--> t`` becomes ``(s, w) -> (t, s)``, selecting when
    ``t`` is final.
    """
    names = {}
    k = 0
    for s in range(dfa.n_states):
        if _is_dead(dfa, s):
            names[s] = "dead"
        else:
            names[s] = f"q{k}"
            k += 1
    rules = []
    for s in range(dfa.n_states):
        for w, t in sorted(dfa.exceptions[s].items()):
            rules.append(Rule(names[s], w, names[t], names[s], t in dfa.finals))
        t = dfa.default[s]
        rules.append(Rule(names[s], DEFAULT, names[t], names[s], t in dfa.finals))
    return DstAutomaton([names[s] for s in range(dfa.n_states)], names[dfa.initial], rules)


def _sibling_aware_dst(query, max_states):
    steps = query.steps
    n = len(steps)
    alphabet = query.names()

    def move(cands, label):
        matched = {i + 1 for i in cands if steps[i].test is None or steps[i].test == label}
        selecting = n in matched
        left = {i for i in cands if steps[i].axis == DESCENDANT}
        left.update(j for j in matched if j < n and steps[j].axis != FOLLOWING_SIBLING)
        right = set(cands)
        right.update(j for j in matched if j < n and steps[j].axis == FOLLOWING_SIBLING)
        return frozenset(left), frozenset(right), selecting

    subsets, index, rows = _determinize(frozenset([0]), move, alphabet, max_states,
                                        targets=lambda result: result[:2])
    dead = index.get(frozenset())
    table = []
    for row in rows:
        table.append({w: (sel, index[l], index[r]) for w, (l, r, sel) in row.items()})
    return _minimize_dst(table, alphabet, dead)


def _minimize_dst(table, alphabet, dead):
    """Merge bisimilar states of a transition table and name the result.

    ``table[s][w] = (selecting, left, right)`` with ``w=None`` the default.
    """
    symbols = list(alphabet) + [None]
    count = len(table)
    block = [0] * count
    while True:
        sigs = {}
        new = []
        for s in range(count):
            sig = tuple((table[s][w][0], block[table[s][w][1]], block[table[s][w][2]]) for w in symbols)
            new.append(sigs.setdefault(sig, len(sigs)))
        stable = len(sigs) == len(set(block))
        block = new
        if stable:
            break
    rep = {}
    for s in range(count):
        rep.setdefault(block[s], s)
    dead_block = block[dead] if dead is not None else None
    names = {}
    order = [block[0]]
    seen = {block[0]}
    for b in order:
        for w in symbols:
            _, l, r = table[rep[b]][w]
            for t in (block[l], block[r]):
                if t not in seen:
                    seen.add(t)
                    order.append(t)
    k = 0
    for b in order:
        if b == dead_block:
            names[b] = "dead"
        else:
            names[b] = f"q{k}"
            k += 1
    rules = []
    for b in order:
        row = table[rep[b]]
        d_sel, d_l, d_r = row[None]
        d = (d_sel, names[block[d_l]], names[block[d_r]])
        for w in alphabet:
            sel, l, r = row[w]
            cur = (sel, names[block[l]], names[block[r]])
            if cur != d:
                rules.append(Rule(names[b], w, cur[1], cur[2], sel))
        rules.append(Rule(names[b], DEFAULT, d[1], d[2], d_sel))
    return DstAutomaton([names[b] for b in order], names[block[0]], rules)


def query_to_dst(query, max_states=DEFAULT_MAX_STATES):
    """Tree automaton selecting exactly the nodes *query* selects."""
    if isinstance(query, str):
        query = parse_xpath(query)
    if all(s.axis != FOLLOWING_SIBLING for s in query.steps):
        return lift_dfa(minimize_dfa(segment_to_dfa(query.steps, max_states)))
    return _sibling_aware_dst(query, max_states)
