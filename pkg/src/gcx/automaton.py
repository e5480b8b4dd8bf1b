"""Deterministic selecting top-down (DST) tree automata over binary trees.

A rule ``(q, w) -> (q1, q2)`` sends the first child to ``q1`` and the next
sibling to ``q2``; ``=>`` additionally selects the current node. Every
state owns exactly one default rule, written with the label ``%``, which
applies to all labels without a rule of their own.

Dump format, one rule per line, first line's state is initial::

    q0,a -> q1,q0
    q5,d => q6,q5
    q0,% -> q0,q0
"""

from typing import Hashable, NamedTuple

from .errors import ParseError, ValidationError
from .tree import Bin, copy_tree, iter_preorder

DEFAULT = "%"


class Rule(NamedTuple):
    state: Hashable
    label: str
    left: Hashable
    right: Hashable
    selecting: bool = False

    def __str__(self):
        arrow = "=>" if self.selecting else "->"
        return f"{self.state},{self.label} {arrow} {self.left},{self.right}"


class DstAutomaton:
    """Immutable rule set with O(1) lookup.

    When *rules* contain duplicates the first one wins for lookups;
    :func:`validate` reports them.
    """

    def __init__(self, states, initial, rules):
        self.states = tuple(dict.fromkeys(states))
        self.initial = initial
        self.rules = tuple(rules)
        self._default = {}
        self._table = {}
        for r in self.rules:
            if r.label == DEFAULT:
                self._default.setdefault(r.state, r)
            else:
                self._table.setdefault(r.state, {}).setdefault(r.label, r)

    def lookup(self, state, label):
        """Rule applied in *state* at a node labeled *label*."""
        row = self._table.get(state)
        if row is not None:
            rule = row.get(label)
            if rule is not None:
                return rule
        return self._default[state]

    def default(self, state):
        return self._default[state]

    def exceptions(self, state):
        """Non-default rules of *state*, keyed by label."""
        return dict(self._table.get(state, {}))

    def labels(self):
        return sorted({r.label for r in self.rules if r.label != DEFAULT})

    def selects_anything(self):
        return any(r.selecting for r in self.rules)

    def __len__(self):
        return len(self.states)

    def __repr__(self):
        return f"<DstAutomaton states={len(self.states)} rules={len(self.rules)}>"


def validate(a):
    problems = []
    states = set(a.states)
    if a.initial not in states:
        problems.append(f"initial state {a.initial} is not a state")
    defaults = {}
    seen = set()
    for r in a.rules:
        for s in (r.state, r.left, r.right):
            if s not in states:
                problems.append(f"rule '{r}' uses unknown state {s}")
        if r.label == DEFAULT:
            defaults[r.state] = defaults.get(r.state, 0) + 1
        elif (r.state, r.label) in seen:
            problems.append(f"two rules with left-hand side ({r.state},{r.label})")
        seen.add((r.state, r.label))
    for s in a.states:
        n = defaults.get(s, 0)
        if n != 1:
            problems.append(f"state {s} has {n} default rules, expected exactly one")
    return problems


def check(a):
    problems = validate(a)
    if problems:
        raise ValidationError(problems)
    return a


def dst_run(a, b):
    """Pre-order numbers of the nodes of *b* selected by *a*, ascending."""
    selected = []
    number = 0
    stack = [(b, a.initial)]
    while stack:
        node, q = stack.pop()
        if not isinstance(node, Bin):
            continue
        number += 1
        rule = a.lookup(q, node.label)
        if rule.selecting:
            selected.append(number)
        stack.append((node.right, rule.right))
        stack.append((node.left, rule.left))
    return selected


def run_states(a, b):
    """State entering each labeled node of *b*, in pre-order."""
    out = []
    stack = [(b, a.initial)]
    while stack:
        node, q = stack.pop()
        if not isinstance(node, Bin):
            continue
        out.append(q)
        rule = a.lookup(q, node.label)
        stack.append((node.right, rule.right))
        stack.append((node.left, rule.left))
    return out


def mark_selected(a, b):
    """Copy of *b* with every selected node's ``marked`` flag set."""
    ids = set(dst_run(a, b))
    copy = copy_tree(b)
    for i, n in enumerate((n for n in iter_preorder(copy) if isinstance(n, Bin)), 1):
        n.marked = i in ids
    return copy


def canonical_form(a):
    """Naming-independent description used for isomorphism checks.

    States are numbered breadth-first from the initial state, following
    the rules of each state in label order (default last), left target
    before right target.
    """
    alphabet = a.labels()
    number = {a.initial: 0}
    queue = [a.initial]
    rows = []
    for q in queue:
        row = []
        for label in alphabet + [DEFAULT]:
            rule = a.lookup(q, label) if label != DEFAULT else a.default(q)
            for s in (rule.left, rule.right):
                if s not in number:
                    number[s] = len(number)
                    queue.append(s)
            row.append((rule.selecting, number[rule.left], number[rule.right]))
        rows.append(tuple(row))
    return tuple(alphabet), tuple(rows)


def normalized(a):
    """Equivalent automaton without rules that merely repeat the default."""
    rules = []
    for q in a.states:
        d = a.default(q)
        rules.extend(r for r in a.exceptions(q).values()
                     if (r.left, r.right, r.selecting) != (d.left, d.right, d.selecting))
        rules.append(d)
    return DstAutomaton(a.states, a.initial, rules)


def isomorphic(a, b):
    return canonical_form(normalized(a)) == canonical_form(normalized(b))


def parse_automaton(text):
    states = []
    rules = []
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=>" in stripped:
            lhs, rhs = stripped.split("=>", 1)
            selecting = True
        elif "->" in stripped:
            lhs, rhs = stripped.split("->", 1)
            selecting = False
        else:
            raise ParseError("expected 'q,w -> q1,q2' or 'q,w => q1,q2'", lineno, 1)
        left_parts = [p.strip() for p in lhs.split(",")]
        right_parts = [p.strip() for p in rhs.split(",")]
        if len(left_parts) != 2 or len(right_parts) != 2 or not all(left_parts + right_parts):
            raise ParseError("a rule needs one state and label on the left, two states on the right",
                             lineno, 1)
        q, w = left_parts
        q1, q2 = right_parts
        rules.append(Rule(q, w, q1, q2, selecting))
        states.extend((q, q1, q2))
    if not rules:
        raise ParseError("automaton has no rules")
    a = DstAutomaton(states, rules[0].state, rules)
    check(a)
    return a


def write_automaton(a):
    """Dump rules grouped by state, specific labels before the default."""
    lines = []
    for q in sorted(a.states, key=lambda s: s != a.initial):
        for r in a.exceptions(q).values():
            lines.append(str(r))
        lines.append(str(a.default(q)))
    return "\n".join(lines) + "\n"
