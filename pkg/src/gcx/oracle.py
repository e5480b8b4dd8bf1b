"""Brute-force references and seeded generators for testing.

:func:`naive_eval` evaluates a query on an explicit unranked tree straight
from the axis definitions, with no automata involved. The generators
produce small valid grammars and queries that lean on shared nonterminals
and a small label alphabet so that defaults and sharing get exercised.
"""

import random

from .grammar import Call, Grammar, Param, Rule, labeled_lengths, remove_unreachable
from .tree import UNDERSCORE, Bin, Node, fcns_decode
from .xpath import CHILD, DESCENDANT, FOLLOWING_SIBLING, Step, XPathQuery, parse_xpath


def _index(t):
    """Pre-order arrays: label, children ids and subtree end per node id.

    Id 0 is the virtual super-root; document nodes are numbered from 1.
    """
    labels = [None]
    children = [[]]
    end = [0]
    stack = [(t, 0, False)]
    while stack:
        node, parent, done = stack.pop()
        if done:
            end[parent] = len(labels) - 1
            continue
        i = len(labels)
        labels.append(node.label)
        children.append([])
        end.append(i)
        children[parent].append(i)
        stack.append((None, i, True))
        stack.extend((c, i, False) for c in reversed(node.children))
    end[0] = len(labels) - 1
    return labels, children, end


def naive_eval(query, t):
    """Pre-order numbers of the nodes *query* selects in *t*, ascending.

    *t* is an unranked :class:`~gcx.tree.Node` or its binary encoding.
    """
    if isinstance(query, str):
        query = parse_xpath(query)
    if isinstance(t, Bin):
        t = fcns_decode(t)
    labels, children, end = _index(t)
    parent = [None] * len(labels)
    for p, kids in enumerate(children):
        for c in kids:
            parent[c] = p
    context = {0}
    for step in query.steps:
        found = set()
        if step.axis == CHILD:
            for v in context:
                found.update(children[v])
        elif step.axis == DESCENDANT:
            # descendants of nested context nodes are already covered
            reach = 0
            for v in sorted(context):
                lo = max(v + 1, reach + 1)
                found.update(range(lo, end[v] + 1))
                reach = max(reach, end[v])
        elif step.axis == FOLLOWING_SIBLING:
            for v in context:
                if v == 0:
                    continue
                kids = children[parent[v]]
                found.update(kids[kids.index(v) + 1:])
        context = {v for v in found if step.test is None or labels[v] == step.test}
    return sorted(context)


DEFAULT_ALPHABET = ("a", "b", "c")


def _random_term(rng, budget, callable_rules, alphabet, call_bias):
    """Random parameter-free term with at most *budget* constructor nodes."""
    if budget <= 0:
        return UNDERSCORE, 0
    top = [None]
    used = 0
    stack = [(top, 0)]
    while stack:
        parent, slot = stack.pop()
        if used >= budget or (used and rng.random() < 0.2):
            node = UNDERSCORE
        elif callable_rules and rng.random() < call_bias:
            # favor recent rules: they are the larger ones
            pool = callable_rules[-2:] if rng.random() < 0.5 else callable_rules
            rule = rng.choice(pool)
            node = Call(rule.name, [None] * rule.rank)
            used += 1
            for i in range(rule.rank - 1, -1, -1):
                stack.append((node.args, i))
        else:
            node = Bin(rng.choice(alphabet), None, None)
            used += 1
            stack.append((node, "right"))
            stack.append((node, "left"))
        if isinstance(parent, Bin):
            setattr(parent, slot, node)
        else:
            parent[slot] = node
    return top[0], used


def _leaf_slots(term):
    """(parent, slot) of every ``_`` leaf in pre-order."""
    slots = []
    stack = [(term, None, None)]
    while stack:
        node, parent, slot = stack.pop()
        if node is UNDERSCORE:
            slots.append((parent, slot))
        elif isinstance(node, Bin):
            stack.append((node.right, node, "right"))
            stack.append((node.left, node, "left"))
        elif isinstance(node, Call):
            for i in range(len(node.args) - 1, -1, -1):
                stack.append((node.args[i], node.args, i))
    return slots


def _freeze(term):
    stack = [term]
    while stack:
        n = stack.pop()
        if isinstance(n, Call):
            n.args = tuple(n.args)
            stack.extend(n.args)
        elif isinstance(n, Bin):
            stack.extend((n.left, n.right))
    return term


def _attempt(rng, max_rules, max_rank, alphabet, call_bias, body_size):
    rules = []
    for i in range(1, rng.randint((max_rules + 1) // 2, max_rules) + 1):
        want = rng.randint(0, max_rank)
        body, _ = _random_term(rng, rng.randint(1, body_size), rules, alphabet, call_bias)
        slots = _leaf_slots(body)
        k = min(want, len(slots))
        for index, pos in enumerate(sorted(rng.sample(range(len(slots)), k)), 1):
            parent, slot = slots[pos]
            if isinstance(parent, Bin):
                setattr(parent, slot, Param(index))
            else:
                parent[slot] = Param(index)
        rules.append(Rule(f"N{i}", k, _freeze(body)))
    child, _ = _random_term(rng, body_size, rules, alphabet, call_bias)
    if rules:
        # the newest rule tends to be the largest, so make sure it is used
        last = rules[-1]
        args = [_random_term(rng, 2, rules, alphabet, call_bias)[0] for _ in range(last.rank)]
        child = Bin(rng.choice(alphabet), Call(last.name, args), child)
    start = Rule("S", 0, _freeze(Bin(rng.choice(alphabet), child, UNDERSCORE)))
    return remove_unreachable(Grammar([start] + rules, "S"))


def random_grammar(seed, max_rules=10, max_rank=2, alphabet=DEFAULT_ALPHABET,
                   max_nodes=10**5, call_bias=0.6, body_size=6):
    """Seeded random SLT grammar whose expansion has at most *max_nodes* labeled nodes.

    The start rule has a labeled root without a next sibling, so the
    expansion is always a document. ``max_rank=0`` yields a DAG grammar.
    """
    if max_rules < 1 or max_rank < 0 or max_nodes < 1 or not alphabet:
        raise ValueError("bounds must be positive and the alphabet non-empty")
    rng = random.Random(seed)
    while True:
        g = _attempt(rng, max_rules, max_rank, tuple(alphabet), call_bias, body_size)
        if labeled_lengths(g)[g.start] <= max_nodes:
            return g


def random_query(seed, max_steps=3, alphabet=DEFAULT_ALPHABET, selectivity=0.9,
                 wildcard=0.15, sibling=0.2):
    """Seeded random query of 1..*max_steps* steps.

    With probability ``1 - selectivity`` a name test uses a label outside
    *alphabet*, which can never match.
    """
    if max_steps < 1 or not alphabet:
        raise ValueError("max_steps must be positive and the alphabet non-empty")
    rng = random.Random(seed)
    steps = []
    for i in range(rng.randint(1, max_steps)):
        r = rng.random()
        if i and r < sibling:
            axis = FOLLOWING_SIBLING
        elif r < 0.7:
            axis = DESCENDANT
        else:
            axis = CHILD
        if rng.random() < wildcard:
            test = None
        elif rng.random() < selectivity:
            test = rng.choice(tuple(alphabet))
        else:
            test = "zz"
        steps.append(Step(axis, test))
    return XPathQuery(tuple(steps))


def random_tree(seed, size=20, alphabet=DEFAULT_ALPHABET, width=3):
    """Seeded random unranked tree with *size* nodes."""
    rng = random.Random(seed)
    root = Node(rng.choice(alphabet))
    nodes = [root]
    for _ in range(size - 1):
        parent = rng.choice(nodes[-width:] + [rng.choice(nodes)])
        child = Node(rng.choice(alphabet))
        parent.children.append(child)
        nodes.append(child)
    return root
