"""Running a DST automaton over an SLT grammar without expanding it.

For every nonterminal ``A`` of rank ``k`` and every state ``q`` the
behavior table records the states in which a run entering ``P(A)`` in
``q`` reaches the parameter leaves ``y1..yk`` and how many nodes it
selects on the way. Rules are processed callee-first, so a nested
nonterminal is always summarized by an entry that already exists.
"""

from ..grammar import Call, Grammar, Param, Rule, remove_unreachable, topo_order
from ..tree import Bin


class BehaviorTable:
    """``phi[(A, q)] = (exit_states, count)``; ``visits`` counts edge descents."""

    def __init__(self, phi, visits):
        self.phi = phi
        self.visits = visits

    def __getitem__(self, key):
        return self.phi[key]

    def exits(self, name, state):
        return self.phi[(name, state)][0]

    def count(self, name, state):
        return self.phi[(name, state)][1]

    def __len__(self):
        return len(self.phi)


def _simulate(body, q, automaton, phi, exits):
    """Run from *q* at the root of *body*; returns (selected count, edge descents)."""
    count = 0
    visits = 0
    stack = [(body, q)]
    while stack:
        node, q = stack.pop()
        if isinstance(node, Bin):
            rule = automaton.lookup(q, node.label)
            if rule.selecting:
                count += 1
            stack.append((node.right, rule.right))
            stack.append((node.left, rule.left))
            visits += 2
        elif isinstance(node, Call):
            sub_exits, n = phi[(node.name, q)]
            count += n
            for arg, state in zip(node.args, sub_exits):
                stack.append((arg, state))
            visits += len(node.args)
        elif isinstance(node, Param):
            exits[node.index - 1] = q
    return count, visits


def build_behavior(g, automaton):
    """Behavior of every (nonterminal, state) pair, in time O(|Q|·|G|)."""
    phi = {}
    visits = 0
    for name in topo_order(g):
        rule = g.rules[name]
        for q in automaton.states:
            exits = [None] * rule.rank
            n, v = _simulate(rule.body, q, automaton, phi, exits)
            phi[(name, q)] = (tuple(exits), n)
            visits += v
    return BehaviorTable(phi, visits)


def count(g, automaton, behavior=None):
    """Number of nodes of ``val(g)`` that *automaton* selects (exact integer)."""
    behavior = behavior or build_behavior(g, automaton)
    return behavior.count(g.start, automaton.initial)


def relabeled_name(state, name, exits):
    return "[" + ";".join(str(x) for x in (state, name) + tuple(exits)) + "]"


def relabel(g, automaton, behavior=None):
    """Grammar generating ``val(g)`` with every selected node marked.

    Nonterminal ``(q, A, q1..qk)`` generates ``val(A)`` as seen by a run
    entering it in ``q``; its ``origin`` entry keeps that tuple. Rules for
    all pairs are built, then the unreachable ones are dropped.
    """
    behavior = behavior or build_behavior(g, automaton)
    phi = behavior.phi
    rules = {}
    origin = {}
    taken = g.labels()
    names = {}

    def name_of(q, a):
        key = (a, q)
        if key not in names:
            exits = phi[key][0]
            name = relabeled_name(q, a, exits)
            while name in taken:
                name += "'"
            names[key] = name
            origin[name] = (q, a, exits)
        return names[key]

    for a in topo_order(g):
        rule = g.rules[a]
        for q in automaton.states:
            body = _relabel_body(rule.body, q, automaton, phi, name_of)
            name = name_of(q, a)
            rules[name] = Rule(name, rule.rank, body)
    start = name_of(automaton.initial, g.start)
    order = {start: rules.pop(start)}
    order.update(rules)
    return remove_unreachable(Grammar(order, start, origin))


class _Holder:
    __slots__ = ("left",)


def _relabel_body(body, q, automaton, phi, name_of):
    top = _Holder()
    stack = [(body, q, top, "left")]
    while stack:
        node, q, parent, slot = stack.pop()
        if isinstance(node, Bin):
            rule = automaton.lookup(q, node.label)
            out = Bin(node.label, None, None, rule.selecting)
            stack.append((node.right, rule.right, out, "right"))
            stack.append((node.left, rule.left, out, "left"))
        elif isinstance(node, Call):
            sub_exits = phi[(node.name, q)][0]
            out = Call(name_of(q, node.name), [None] * len(node.args))
            for i, (arg, state) in enumerate(zip(node.args, sub_exits)):
                stack.append((arg, state, out, i))
        else:
            out = node  # '_' and parameters are shared leaves
        if isinstance(parent, Call):
            parent.args[slot] = out
        else:
            setattr(parent, slot, out)
    _freeze(top.left)
    return top.left


def _freeze(body):
    stack = [body]
    while stack:
        n = stack.pop()
        if isinstance(n, Call):
            n.args = tuple(n.args)
            stack.extend(n.args)
        elif isinstance(n, Bin):
            stack.append(n.left)
            stack.append(n.right)

