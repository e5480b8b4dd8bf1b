"""Straight-line string grammars over open/close tag tokens.

File format: one rule per line, ``NAME -> item item ...`` where an item is a
nonterminal name, ``<label>`` or ``</label>`` (``<^label>`` for a marked
label). The first rule is the start. An empty right-hand side is allowed.
"""

from typing import NamedTuple

from .errors import ExpansionLimitError, ParseError, ValidationError

DEFAULT_TOKEN_LIMIT = 10**8


class Token(NamedTuple):
    closing: bool
    label: str
    marked: bool = False

    def text(self, mark="^"):
        name = (mark if self.marked else "") + self.label
        return f"</{name}>" if self.closing else f"<{name}>"

    def __repr__(self):
        return self.text()


def open_tag(label, marked=False):
    return Token(False, label, marked)


def close_tag(label, marked=False):
    return Token(True, label, marked)


class Slp:
    """Rules map a nonterminal name to a tuple of tokens and names."""

    def __init__(self, rules, start=None):
        self.rules = {name: tuple(body) for name, body in rules.items()}
        self.start = start if start is not None else next(iter(self.rules))

    def __eq__(self, other):
        if not isinstance(other, Slp):
            return NotImplemented
        return self.start == other.start and self.rules == other.rules

    __hash__ = None

    def __len__(self):
        return len(self.rules)

    @property
    def size(self):
        return size(self)

    def __repr__(self):
        return f"<Slp start={self.start!r} rules={len(self.rules)} size={size(self)}>"


def size(p):
    """Total number of symbols over all right-hand sides."""
    return sum(len(body) for body in p.rules.values())


def _order(p):
    """Reachable nonterminals, callees first. Raises on cycles or undefined names."""
    order = []
    state = {}
    stack = [(p.start, False)]
    while stack:
        name, leaving = stack.pop()
        if leaving:
            state[name] = 2
            order.append(name)
            continue
        if state.get(name) == 2:
            continue
        if state.get(name) == 1:
            raise ValidationError([f"cycle through {name}"])
        if name not in p.rules:
            raise ValidationError([f"undefined nonterminal {name}"])
        state[name] = 1
        stack.append((name, True))
        for item in p.rules[name]:
            if isinstance(item, str):
                if state.get(item) == 1:
                    raise ValidationError([f"cycle through {item}"])
                if state.get(item) is None:
                    stack.append((item, False))
    return order


def validate(p):
    problems = []
    if p.start not in p.rules:
        return [f"start {p.start} has no rule"]
    for name, body in p.rules.items():
        for item in body:
            if isinstance(item, str):
                if item not in p.rules:
                    problems.append(f"{name}: undefined nonterminal {item}")
            elif not isinstance(item, Token) or not item.label:
                problems.append(f"{name}: bad item {item!r}")
    if problems:
        return problems
    try:
        reachable = set(_order(p))
    except ValidationError as exc:
        return exc.violations
    problems.extend(f"nonterminal {n} is unreachable" for n in p.rules if n not in reachable)
    return problems


def lengths(p):
    """Expansion length of every reachable nonterminal, computed bottom-up."""
    table = {}
    for name in _order(p):
        table[name] = sum(table[i] if isinstance(i, str) else 1 for i in p.rules[name])
    return table


def iter_tokens(p, name=None):
    """Stream the expansion of *name* (default: the start symbol)."""
    stack = [iter(p.rules[p.start if name is None else name])]
    while stack:
        item = next(stack[-1], None)
        if item is None:
            stack.pop()
        elif isinstance(item, str):
            stack.append(iter(p.rules[item]))
        else:
            yield item


def expand(p, limit=DEFAULT_TOKEN_LIMIT):
    total = lengths(p)[p.start]
    if total > limit:
        raise ExpansionLimitError(f"SLP expands to {total} tokens, limit is {limit}")
    return list(iter_tokens(p))


def prune(p):
    """Drop nonterminals that are not reachable from the start."""
    keep = set(_order(p))
    return Slp({n: b for n, b in p.rules.items() if n in keep}, p.start)


def canonical_form(p):
    """Naming-independent form: nonterminals numbered by first use from the start."""
    number = {p.start: 0}
    queue = [p.start]
    out = []
    for name in queue:
        body = []
        for item in p.rules[name]:
            if isinstance(item, str):
                if item not in number:
                    number[item] = len(number)
                    queue.append(item)
                body.append(number[item])
            else:
                body.append(tuple(item))
        out.append(tuple(body))
    return tuple(out)


def detokenize(tokens, mark="^"):
    return "".join(t.text(mark) for t in tokens)


def is_balanced(tokens):
    stack = []
    for t in tokens:
        if not t.closing:
            stack.append((t.label, t.marked))
        elif not stack or stack.pop() != (t.label, t.marked):
            return False
    return not stack


def _parse_item(item, lineno, col):
    if item.startswith("<"):
        if not item.endswith(">") or len(item) < 3:
            raise ParseError(f"malformed tag {item!r}", lineno, col)
        inner = item[1:-1]
        closing = inner.startswith("/")
        if closing:
            inner = inner[1:]
        marked = inner.startswith("^")
        if marked:
            inner = inner[1:]
        if not inner:
            raise ParseError(f"empty tag {item!r}", lineno, col)
        return Token(closing, inner, marked)
    return item


def parse_slp(text):
    rules = {}
    start = None
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        head, arrow, rest = line.partition("->")
        name = head.strip()
        if not arrow or not name or " " in name:
            raise ParseError("expected 'NAME -> item ...'", lineno, 1)
        if name in rules:
            raise ParseError(f"second rule for {name}", lineno, 1)
        col = len(head) + 3
        body = []
        for item in rest.split():
            body.append(_parse_item(item, lineno, line.find(item, col - 1) + 1))
        rules[name] = tuple(body)
        if start is None:
            start = name
    if start is None:
        raise ParseError("SLP has no rules")
    p = Slp(rules, start)
    problems = validate(p)
    if problems:
        raise ValidationError(problems)
    return p


def write_slp(p):
    def render(item):
        return item if isinstance(item, str) else item.text()

    lines = []
    for name in [p.start] + [n for n in p.rules if n != p.start]:
        body = " ".join(render(i) for i in p.rules[name])
        lines.append(f"{name} -> {body}".rstrip())
    return "\n".join(lines) + "\n"
