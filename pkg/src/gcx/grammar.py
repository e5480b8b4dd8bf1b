"""Straight-line linear tree grammars.

A rule body is a tree over :class:`~gcx.tree.Bin` (labeled, two children),
:data:`~gcx.tree.UNDERSCORE`, :class:`Param` leaves ``y1..yk`` and
:class:`Call` nodes that apply another nonterminal to its arguments.

Text format, one rule per line, first rule is the start::

    S -> lib(B(B(_)),_)
    B(y1) -> book(T,y1)
    T -> title(_,author(_,_))

A name is a nonterminal exactly when it appears on some left-hand side.
"""

import re
from collections import Counter

from .errors import ExpansionLimitError, ParseError, ValidationError
from .tree import UNDERSCORE, Bin, TreeNode, format_term, iter_preorder

DEFAULT_EXPANSION_LIMIT = 10**8

_PARAM_RE = re.compile(r"y([1-9][0-9]*)\Z")


class Param(TreeNode):
    __slots__ = ("index",)

    def __init__(self, index):
        self.index = index

    def _sig(self):
        return ("y", self.index)

    def _head(self):
        return f"y{self.index}"


class Call(TreeNode):
    """Occurrence of nonterminal *name* applied to ``len(args)`` subtrees."""

    __slots__ = ("name", "args")

    def __init__(self, name, args=()):
        self.name = name
        self.args = args

    def _sig(self):
        return ("c", self.name, len(self.args))

    def _kids(self):
        return self.args

    def _head(self):
        return self.name


class Rule:
    __slots__ = ("name", "rank", "body")

    def __init__(self, name, rank, body):
        self.name = name
        self.rank = rank
        self.body = body

    def __eq__(self, other):
        if not isinstance(other, Rule):
            return NotImplemented
        return (self.name, self.rank) == (other.name, other.rank) and self.body == other.body

    __hash__ = None

    def lhs(self):
        if not self.rank:
            return self.name
        return f"{self.name}({','.join(f'y{i}' for i in range(1, self.rank + 1))})"

    def __repr__(self):
        return f"{self.lhs()} -> {format_term(self.body)}"


class Grammar:
    """An SLT grammar: ordered rules keyed by nonterminal name plus a start symbol.

    The constructor does not validate; call :func:`validate` (or use
    :func:`parse_grammar`, which does) when the input is untrusted.
    ``origin`` optionally records, per nonterminal, what it was derived from.
    """

    def __init__(self, rules, start=None, origin=None):
        if not isinstance(rules, dict):
            rules = {r.name: r for r in rules}
        self.rules = rules
        self.start = start if start is not None else next(iter(rules))
        self.origin = origin or {}

    def __getitem__(self, name):
        return self.rules[name]

    def __contains__(self, name):
        return name in self.rules

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules.values())

    def __eq__(self, other):
        if not isinstance(other, Grammar):
            return NotImplemented
        return self.start == other.start and self.rules == other.rules

    __hash__ = None

    @property
    def size(self):
        return size(self)

    @property
    def rank(self):
        return rank(self)

    def labels(self):
        return {n.label for r in self for n in iter_preorder(r.body) if isinstance(n, Bin)}

    def __repr__(self):
        return f"<Grammar start={self.start!r} rules={len(self.rules)} size={size(self)}>"


def size(g):
    """Sum over rules of the number of edges in the right-hand side."""
    return sum(len(n._kids()) for r in g for n in iter_preorder(r.body))


def rank(g):
    return max((r.rank for r in g), default=0)


def calls_in(body):
    return [n.name for n in iter_preorder(body) if isinstance(n, Call)]


def topo_order(g):
    """Nonterminals reachable from the start, callees before callers.

    Raises :class:`ValidationError` on a cyclic hierarchy or undefined name.
    """
    order = []
    state = {}  # 1 = on stack, 2 = finished
    stack = [(g.start, False)]
    while stack:
        name, leaving = stack.pop()
        if leaving:
            state[name] = 2
            order.append(name)
            continue
        st = state.get(name)
        if st == 2:
            continue
        if st == 1:
            raise ValidationError([f"cyclic hierarchy through {name}"])
        if name not in g.rules:
            raise ValidationError([f"undefined nonterminal {name}"])
        state[name] = 1
        stack.append((name, True))
        for callee in reversed(calls_in(g.rules[name].body)):
            if state.get(callee) != 2:
                if state.get(callee) == 1:
                    raise ValidationError([f"cyclic hierarchy through {callee}"])
                stack.append((callee, False))
    return order


def validate(g, require_connected=True):
    """Return a list of invariant violations (empty when *g* is well formed)."""
    problems = []
    if g.start not in g.rules:
        return [f"start nonterminal {g.start} has no rule"]
    if g.rules[g.start].rank != 0:
        problems.append(f"start nonterminal {g.start} has rank {g.rules[g.start].rank}, expected 0")
    for name, rule in g.rules.items():
        if rule.name != name:
            problems.append(f"rule keyed {name} is named {rule.name}")
        seen = []
        # explicit (node, path) stack so violations can name where they are
        stack = [(rule.body, "")]
        while stack:
            node, path = stack.pop()
            where = f"{name} at /{path}"
            if isinstance(node, Bin):
                if len(node._kids()) != 2:
                    problems.append(f"{where}: label {node.label} needs 2 children")
            elif isinstance(node, Param):
                seen.append(node.index)
                if not 1 <= node.index <= rule.rank:
                    problems.append(f"{where}: parameter y{node.index} outside rank {rule.rank}")
            elif isinstance(node, Call):
                callee = g.rules.get(node.name)
                if callee is None:
                    problems.append(f"{where}: undefined nonterminal {node.name}")
                elif len(node.args) != callee.rank:
                    problems.append(
                        f"{where}: {node.name} has rank {callee.rank} but {len(node.args)} arguments"
                    )
            elif node is not UNDERSCORE:
                problems.append(f"{where}: unexpected node {node!r}")
            kids = node._kids()
            for i in range(len(kids) - 1, -1, -1):
                stack.append((kids[i], f"{path}{i}" if not path else f"{path}.{i}"))
        expected = list(range(1, rule.rank + 1))
        if sorted(seen) != expected:
            dup = [i for i, c in Counter(seen).items() if c > 1]
            missing = sorted(set(expected) - set(seen))
            if dup:
                problems.append(f"{name}: parameters {['y%d' % i for i in dup]} occur more than once")
            if missing:
                problems.append(f"{name}: parameters {['y%d' % i for i in missing]} missing")
        elif seen != expected:
            problems.append(f"{name}: parameters do not appear in pre-order y1..y{rule.rank}")
    if problems:
        return problems
    # hierarchy checks over all rules, not just the reachable ones
    state = {}
    for root in g.rules:
        if root in state:
            continue
        stack = [(root, False)]
        while stack:
            name, leaving = stack.pop()
            if leaving:
                state[name] = 2
                continue
            if state.get(name) == 2:
                continue
            state[name] = 1
            stack.append((name, True))
            for callee in calls_in(g.rules[name].body):
                if state.get(callee) == 1:
                    problems.append(f"cyclic hierarchy: {name} -> {callee}")
                elif state.get(callee) is None:
                    stack.append((callee, False))
        if problems:
            return problems
    if require_connected:
        reachable = set(topo_order(g))
        for name in g.rules:
            if name not in reachable:
                problems.append(f"nonterminal {name} is not reachable from {g.start}")
    return problems


def check(g, require_connected=True):
    problems = validate(g, require_connected)
    if problems:
        raise ValidationError(problems)
    return g


def remove_unreachable(g):
    """Restrict *g* to the nonterminals reachable from its start symbol."""
    keep = set(topo_order(g))
    rules = {n: r for n, r in g.rules.items() if n in keep}
    origin = {n: o for n, o in g.origin.items() if n in keep}
    return Grammar(rules, g.start, origin)


class _Slot:
    """Write-once holder for the root of a tree being built."""

    __slots__ = ("left",)

    def __init__(self):
        self.left = None


def _expand(g, root, env, limit):
    """Expand *root* with parameters bound by *env* into a plain tree.

    ``env`` is a tuple of ``(argument, argument_env)`` closures, one per
    parameter; ``None`` leaves parameters in place.
    """
    top = _Slot()
    produced = 0
    rules = g.rules
    stack = [(root, env, top, "left")]
    while stack:
        node, env, parent, attr = stack.pop()
        while True:
            if isinstance(node, Call):
                env = tuple((a, env) for a in node.args)
                node = rules[node.name].body
            elif isinstance(node, Param) and env is not None:
                node, env = env[node.index - 1]
            else:
                break
        if isinstance(node, Bin):
            produced += 1
            if produced > limit:
                raise ExpansionLimitError(f"expansion exceeds {limit} labeled nodes")
            out = Bin(node.label, None, None, node.marked)
            setattr(parent, attr, out)
            stack.append((node.right, env, out, "right"))
            stack.append((node.left, env, out, "left"))
        else:
            setattr(parent, attr, node)
    return top.left


def expand(g, limit=DEFAULT_EXPANSION_LIMIT):
    """The tree generated by *g*."""
    return _expand(g, g.rules[g.start].body, (), limit)


def expand_nonterminal(g, name, limit=DEFAULT_EXPANSION_LIMIT):
    """``val(name)``: the expansion of one nonterminal with its parameters kept."""
    rule = g.rules[name]
    params = tuple((Param(i), None) for i in range(1, rule.rank + 1))
    return _expand(g, rule.body, params, limit)


def labeled_lengths(g):
    """Labeled-node count of ``val(A)`` (parameters excluded) per nonterminal."""
    lengths = {}
    for name in topo_order(g):
        total = 0
        for n in iter_preorder(g.rules[name].body):
            if isinstance(n, Bin):
                total += 1
            elif isinstance(n, Call):
                total += lengths[n.name]
        lengths[name] = total
    return lengths


def fresh_names(prefix, taken):
    """Yield ``prefix1, prefix2, ...`` skipping anything in *taken*."""
    i = 0
    while True:
        i += 1
        name = f"{prefix}{i}"
        if name not in taken:
            yield name


def build_dag(b):
    """Minimal DAG of a binary tree as a rank-0 grammar.

    Every distinct subtree that occurs at least twice gets its own
    nonterminal; everything else stays inline in its (unique) parent.
    """
    if not isinstance(b, Bin):
        raise ValueError("build_dag needs a labeled root")
    ids = {}          # (label, marked, left_id, right_id) -> class id
    node_class = {}   # id(node) -> class id
    key_of = [None]   # class id -> key; id 0 is '_'
    occurrences = Counter()
    stack = [(b, False)]
    while stack:
        n, done = stack.pop()
        if n is UNDERSCORE:
            continue
        if not done:
            stack.append((n, True))
            stack.append((n.right, False))
            stack.append((n.left, False))
            continue
        key = (
            n.label,
            n.marked,
            0 if n.left is UNDERSCORE else node_class[id(n.left)],
            0 if n.right is UNDERSCORE else node_class[id(n.right)],
        )
        cid = ids.get(key)
        if cid is None:
            cid = ids[key] = len(key_of)
            key_of.append(key)
        node_class[id(n)] = cid
        occurrences[cid] += 1

    labels = {k[0] for k in key_of[1:]}
    root = node_class[id(b)]
    start = "S" if "S" not in labels else next(fresh_names("S", labels))
    namer = fresh_names("N", labels | {start})
    names = {}
    # class ids are assigned in post-order, so children precede parents
    for cid in range(1, len(key_of)):
        if occurrences[cid] >= 2:
            names[cid] = next(namer)

    bodies = {}

    def ref(cid):
        if cid == 0:
            return UNDERSCORE
        if cid in names:
            return Call(names[cid])
        return bodies.pop(cid)

    for cid in range(1, len(key_of)):
        label, marked, left, right = key_of[cid]
        bodies[cid] = Bin(label, ref(left), ref(right), marked)
    rules = {start: Rule(start, 0, bodies.pop(root))}
    for cid, name in names.items():
        rules[name] = Rule(name, 0, bodies.pop(cid))
    return Grammar(rules, start)


def node_normal_form(g):
    """Rank-0 grammar whose rule bodies each hold exactly one labeled node.

    Nested labeled nodes move into rules of their own and rules whose
    body is a bare nonterminal or ``_`` are inlined away, so the grammar
    size is unchanged and every node of the generated tree is the root of
    exactly one rule instance.
    """
    if rank(g) != 0:
        raise ValueError("node normal form is defined for rank-0 grammars only")
    order = topo_order(g)
    taken = set(g.rules) | g.labels()
    namer = fresh_names("M", taken)
    alias = {}   # bare-body rules: name -> replacement node
    out = {}

    def resolve(node):
        if isinstance(node, Call):
            return alias.get(node.name, node)
        return node

    for name in order:
        body = resolve(g.rules[name].body)
        if not isinstance(body, Bin):
            alias[name] = body if body is UNDERSCORE else Call(body.name)
            continue
        pending = [(name, body)]
        while pending:
            rname, node = pending.pop()
            kids = []
            for child in (node.left, node.right):
                child = resolve(child)
                if isinstance(child, Bin):
                    cname = next(namer)
                    pending.append((cname, child))
                    child = Call(cname)
                kids.append(child)
            if kids[0] is node.left and kids[1] is node.right:
                new = node
            else:
                new = Bin(node.label, kids[0], kids[1], node.marked)
            out[rname] = Rule(rname, 0, new)
    start = g.start
    if start in alias:
        target = alias[start]
        if target is UNDERSCORE:
            raise ValueError("grammar generates only '_'")
        start = target.name
    rules = {start: out.pop(start)}
    rules.update(out)
    return remove_unreachable(Grammar(rules, start))


def canonical_form(g):
    """Naming-independent description of *g*, for isomorphism tests.

    Nonterminals are renumbered in order of first use, walking rule bodies
    in pre-order starting from the start rule.
    """
    number = {g.start: 0}
    queue = [g.start]
    result = []
    for name in queue:
        rule = g.rules[name]
        parts = []
        for n in iter_preorder(rule.body):
            if isinstance(n, Call):
                if n.name not in number:
                    number[n.name] = len(number)
                    queue.append(n.name)
                parts.append(("c", number[n.name], len(n.args)))
            else:
                parts.append(n._sig())
        result.append((rule.rank, tuple(parts)))
    return tuple(result)


# -- text format -------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(?P<punct>[(),])|(?P<name>[^(),\s]+))")


def _tokenize(text, lineno, offset=0):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ParseError(f"unexpected character {text[pos]!r}", lineno, offset + pos + 1)
            break
        if m.group("punct") is None and m.group("name") is None:
            break
        kind = "punct" if m.group("punct") else "name"
        tokens.append((kind, m.group(kind), offset + m.start(kind) + 1))
        pos = m.end()
    return tokens


def _parse_raw_term(tokens, lineno):
    """Parse ``name(child,...)`` syntax into nested ``[name, col, children]`` lists."""
    if not tokens:
        raise ParseError("empty right-hand side", lineno)
    i = 0
    root = None
    stack = []
    expect_term = True
    while i < len(tokens):
        kind, text, col = tokens[i]
        if expect_term:
            if kind != "name":
                raise ParseError(f"expected a name, found {text!r}", lineno, col)
            node = [text, col, []]
            if stack:
                stack[-1][2].append(node)
            elif root is None:
                root = node
            else:
                raise ParseError("trailing input after term", lineno, col)
            if i + 1 < len(tokens) and tokens[i + 1][1] == "(":
                stack.append(node)
                i += 2
                continue
            expect_term = False
            i += 1
            continue
        if text == ",":
            if not stack:
                raise ParseError("',' outside of an argument list", lineno, col)
            expect_term = True
        elif text == ")":
            if not stack:
                raise ParseError("unbalanced ')'", lineno, col)
            stack.pop()
        else:
            raise ParseError(f"unexpected {text!r}", lineno, col)
        i += 1
    if stack or expect_term:
        raise ParseError("incomplete term", lineno)
    return root


def _build_term(raw, nonterminals, lineno):
    """Turn a raw parse into grammar nodes, iteratively (terms can be deep)."""
    top = _Slot()
    stack = [(raw, top, None)]
    while stack:
        (name, col, kids), parent, slot = stack.pop()
        if name in nonterminals:
            node = Call(name, [None] * len(kids))
        elif name == "_":
            if kids:
                raise ParseError("'_' takes no arguments", lineno, col)
            node = UNDERSCORE
        elif _PARAM_RE.match(name) and not kids:
            node = Param(int(name[1:]))
        else:
            marked = name.startswith("^")
            label = name[1:] if marked else name
            if not label:
                raise ParseError("empty label", lineno, col)
            if len(kids) != 2:
                raise ParseError(
                    f"label {label!r} needs exactly 2 children, found {len(kids)}"
                    " (or is it an undefined nonterminal?)", lineno, col)
            node = Bin(label, None, None, marked)
        if slot is None:
            top.left = node
        elif isinstance(parent, Call):
            parent.args[slot] = node
        else:
            setattr(parent, slot, node)
        if isinstance(node, Bin):
            stack.append((kids[1], node, "right"))
            stack.append((kids[0], node, "left"))
        elif isinstance(node, Call):
            for i in range(len(kids) - 1, -1, -1):
                stack.append((kids[i], node, i))
    # freeze argument lists
    for n in iter_preorder(top.left):
        if isinstance(n, Call):
            n.args = tuple(n.args)
    return top.left


_LHS_RE = re.compile(r"\s*(?P<name>[^(),\s]+)\s*(?:\((?P<params>[^)]*)\))?\s*->")


def parse_grammar(text, validate_result=True):
    """Parse the line-based grammar format (see module docstring)."""
    lines = []
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        m = _LHS_RE.match(line)
        if not m:
            raise ParseError("expected 'NAME -> term' or 'NAME(y1,...) -> term'", lineno, 1)
        name = m.group("name")
        params = m.group("params")
        rank_ = 0
        if params is not None and params.strip():
            names = [p.strip() for p in params.split(",")]
            expected = [f"y{i}" for i in range(1, len(names) + 1)]
            if names != expected:
                raise ParseError(f"parameters of {name} must be {','.join(expected)}", lineno, 1)
            rank_ = len(names)
        lines.append((lineno, name, rank_, line[m.end():], m.end()))
    if not lines:
        raise ParseError("grammar has no rules")
    nonterminals = set()
    for lineno, name, _, _, _ in lines:
        if name in nonterminals:
            raise ParseError(f"second rule for {name}", lineno, 1)
        if name == "_" or name.startswith("^"):
            raise ParseError(f"invalid nonterminal name {name!r}", lineno, 1)
        nonterminals.add(name)
    rules = {}
    for lineno, name, rank_, rhs, offset in lines:
        raw = _parse_raw_term(_tokenize(rhs, lineno, offset), lineno)
        rules[name] = Rule(name, rank_, _build_term(raw, nonterminals, lineno))
    g = Grammar(rules, lines[0][1])
    if validate_result:
        check(g)
    return g


def write_grammar(g):
    lines = [repr(g.rules[g.start])]
    lines.extend(repr(r) for name, r in g.rules.items() if name != g.start)
    return "\n".join(lines) + "\n"
