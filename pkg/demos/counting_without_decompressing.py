"""Counting matches in a document far too large to expand.

The doubling grammar ``A_i(y) -> A_{i-1}(A_{i-1}(y))`` describes a chain
of 2^(n+1) nodes with n+2 rules. Counting visits each rule body once per
automaton state, so the work grows with n, not with 2^n.
"""

# %%
import time

from gcx import count, parse_grammar, query_to_dst
from gcx.automaton import parse_automaton
from gcx.engine import build_behavior


def doubling(n):
    lines = [f"S -> A{n}(_)"]
    lines += [f"A{i}(y1) -> A{i - 1}(A{i - 1}(y1))" for i in range(n, 0, -1)]
    lines.append("A0(y1) -> a(a(y1,_),_)")
    return parse_grammar("\n".join(lines))


# %%
# Every node is an a, so //a selects all of them; the count is exact.
g = doubling(100)
print(count(g, query_to_dst("//a")) == 2**101)

# %%
# An automaton that counts modulo three: every third node is selected.
every_third = parse_automaton("""
q1,% -> q2,dead
q2,% -> q3,dead
q3,% => q1,dead
dead,% -> dead,dead
""")
print(count(doubling(10), every_third), (2**11) // 3)

# %%
# Visits grow linearly in n while the document doubles with every rule.
for n in (25, 50, 100, 200):
    start = time.perf_counter()
    table = build_behavior(doubling(n), every_third)
    elapsed = time.perf_counter() - start
    print(f"n={n:4d}  nodes=2^{n + 1}  visits={table.visits:6d}  {elapsed * 1000:.1f} ms")
