"""Serializing result subtrees straight from the grammar.

Result roots are found by descending from the start rule with chunk
lengths; the subtree below each root is then streamed token by token or
written as a small straight-line program over opening and closing tags.
"""

from ..errors import ValidationError
from ..grammar import Call, Param, Rule, fresh_names, node_normal_form, rank
from ..slp import Slp, close_tag, open_tag, prune
from ..tree import UNDERSCORE, Bin
from .chunks import CHUNK, CLOSE, OPEN, PARAM, chunk_lengths, materialize, walk


def _instantiate(body, args):
    """Copy of *body* with parameter ``yi`` replaced by ``args[i-1]``."""
    top = [None]
    stack = [(body, top, 0)]
    while stack:
        node, parent, slot = stack.pop()
        if isinstance(node, Bin):
            out = Bin(node.label, None, None, node.marked)
            stack.append((node.right, out, "right"))
            stack.append((node.left, out, "left"))
        elif isinstance(node, Call):
            out = Call(node.name, [None] * len(node.args))
            for i, arg in enumerate(node.args):
                stack.append((arg, out.args, i))
        elif isinstance(node, Param):
            out = args[node.index - 1]
        else:
            out = node
        if isinstance(parent, Bin):
            setattr(parent, slot, out)
        else:
            parent[slot] = out
    return top[0]


class _Sizes:
    """Labeled-node counts of parameter-free sentential terms, memoized."""

    def __init__(self, table):
        self.table = table
        self.memo = {}   # id(term) -> (term, size); the term is kept alive

    def __call__(self, term):
        memo = self.memo
        stack = [(term, False)]
        while stack:
            node, ready = stack.pop()
            if node is UNDERSCORE or id(node) in memo:
                continue
            kids = node.args if isinstance(node, Call) else (node.left, node.right)
            if not ready:
                stack.append((node, True))
                stack.extend((k, False) for k in kids)
                continue
            own = self.table.total(node.name) if isinstance(node, Call) else 1
            memo[id(node)] = (node, own + sum(memo[id(k)][1] for k in kids if k is not UNDERSCORE))
        return 0 if term is UNDERSCORE else memo[id(term)][1]


def locate(g, u, table=None):
    """Parameter-free sentential term whose root is the node numbered *u*.

    The term's right part still describes the following siblings; callers
    wanting the unranked subtree of *u* use only its label and left part.
    """
    table = table or chunk_lengths(g)
    total = table.total(g.start)
    if not 1 <= u <= total:
        raise IndexError(f"pre-order number {u} is outside 1..{total}")
    sizes = _Sizes(table)
    term = g.rules[g.start].body
    k = u
    while True:
        if isinstance(term, Bin):
            if k == 1:
                return term
            k -= 1
            left = sizes(term.left)
            if k <= left:
                term = term.left
            else:
                k -= left
                term = term.right
        elif isinstance(term, Call):
            rest = k
            m = len(term.args)
            for c in range(m + 1):
                n = table.lengths[(term.name, c)]
                if rest <= n:
                    term = _instantiate(g.rules[term.name].body, term.args)
                    break
                rest -= n
                if c < m:
                    s = sizes(term.args[c])
                    if rest <= s:
                        term = term.args[c]
                        k = rest
                        break
                    rest -= s
        else:
            raise AssertionError("descent left the expansion")


def iter_term_tokens(g, term):
    """Tokens of the pre-order serialization of a sentential term of *g*."""
    rules = g.rules
    stack = [(term, ())]
    while stack:
        node, env = stack.pop()
        while True:
            if isinstance(node, Call):
                env = tuple((a, env) for a in node.args)
                node = rules[node.name].body
            elif isinstance(node, Param):
                node, env = env[node.index - 1]
            else:
                break
        if isinstance(node, Bin):
            yield open_tag(node.label, node.marked)
            stack.append((node.right, env))
            stack.append((close_tag(node.label, node.marked), None))
            stack.append((node.left, env))
        elif node is not UNDERSCORE:
            yield node


def iter_tokens(g):
    """Tokens of the serialization of the whole document ``val(g)``."""
    return iter_term_tokens(g, g.rules[g.start].body)


def _subtree_of(term):
    return Bin(term.label, term.left, UNDERSCORE, term.marked)


def iter_subtree_tokens(g, u, table=None):
    return iter_term_tokens(g, _subtree_of(locate(g, u, table)))


def serialize(g, automaton, sink, mark="^", behavior=None):
    """Write the XML of every selected node's subtree to *sink*, in document order.

    Nested results are written again inside their ancestors' output and on
    their own. Only the located sentential term of the current result is
    held in memory.
    """
    table = chunk_lengths(g)
    for u in materialize(g, automaton, behavior):
        for token in iter_subtree_tokens(g, u, table):
            sink.write(token.text(mark))


def chunk_name(name, c):
    return f"{name}@{c}"


def _chunk_rules(rules):
    out = {}
    for rule in rules:
        c = 0
        items = []
        for event in walk(rule.body):
            kind = event[0]
            if kind == OPEN:
                items.append(open_tag(event[1].label, event[1].marked))
            elif kind == CLOSE:
                items.append(close_tag(event[1].label, event[1].marked))
            elif kind == CHUNK:
                items.append(chunk_name(event[1], event[2]))
            elif kind == PARAM:
                out[chunk_name(rule.name, c)] = items
                c += 1
                items = []
        out[chunk_name(rule.name, c)] = items
    return out


def slt_to_slp(g):
    """SLP for the tag sequence of ``val(g)``: one rule per (nonterminal, chunk).

    The start symbol is the single chunk of the start rule.
    """
    rules = _chunk_rules(g)
    start = chunk_name(g.start, 0)
    ordered = {start: rules.pop(start)}
    ordered.update(rules)
    return prune(Slp(ordered, start))


def _check_results(r, total):
    r = list(r)
    if len(set(r)) != len(r):
        raise ValueError("result set contains duplicates")
    for u in r:
        if not 1 <= u <= total:
            raise IndexError(f"pre-order number {u} is outside 1..{total}")
    return sorted(r)


def _start_name(taken):
    return "start" if "start" not in taken else next(fresh_names("start", taken))


def subtrees_slp(g, r):
    """SLP for the concatenated subtrees rooted at the nodes in *r*.

    Each result gets a fresh rank-0 rule holding its located sentential
    term with the sibling part cut off; the start rule lists them in
    document order.
    """
    table = chunk_lengths(g)
    r = _check_results(r, table.total(g.start))
    namer = fresh_names("U", set(g.rules))
    extra = []
    for u in r:
        extra.append(Rule(next(namer), 0, _subtree_of(locate(g, u, table))))
    rules = _chunk_rules(list(g) + extra)
    start = _start_name(rules)
    body = [chunk_name(rule.name, 0) for rule in extra]
    out = {start: body}
    out.update(rules)
    return prune(Slp(out, start))


def _representative(nnf, lengths, u):
    """Nonterminal of a node-normal-form grammar whose body is node *u*."""
    name = nnf.start
    k = u
    while True:
        body = nnf.rules[name].body
        if k == 1:
            return name
        k -= 1
        left = lengths[(body.left.name, 0)] if isinstance(body.left, Call) else 0
        if k <= left:
            name = body.left.name
        else:
            k -= left
            name = body.right.name


def dag_subtrees_slp(g, r):
    """SLP for the subtrees at *r* of a rank-0 grammar, of size O(|g| + |r|).

    In node normal form every node of the tree is the root of some rule
    ``A -> w(B, C)``. For each such A that hosts a result the chunk rule
    is split as ``A -> A_sub <C>`` with ``A_sub -> <w> B </w>``, and the
    start rule lists the ``A_sub`` symbols.
    """
    if rank(g) != 0:
        raise ValidationError(["dag_subtrees_slp needs a rank-0 grammar"])
    nnf = node_normal_form(g)
    table = chunk_lengths(nnf)
    r = _check_results(r, table.total(nnf.start))
    rules = _chunk_rules(nnf)
    targets = [_representative(nnf, table.lengths, u) for u in r]
    sub = {}
    for name in targets:
        if name in sub:
            continue
        body = nnf.rules[name].body
        sub_name = f"{name}@sub"
        rule_name = chunk_name(name, 0)
        right = [chunk_name(body.right.name, 0)] if isinstance(body.right, Call) else []
        items = rules[rule_name]
        rules[sub_name] = items[:len(items) - len(right)]
        rules[rule_name] = [sub_name] + right
        sub[name] = sub_name
    start = _start_name(rules)
    out = {start: [sub[name] for name in targets]}
    out.update(rules)
    return prune(Slp(out, start))

