"""A small library document, from XML to query results.

Run with ``python demos/library_walkthrough.py``; each ``# %%`` block is a
cell when opened in an editor that understands them.
"""

# %%
# An unranked XML tree becomes a binary tree: the left child is the first
# child, the right child is the next sibling.
from gcx import build_dag, expand, fcns_encode, parse_xml
from gcx.grammar import write_grammar
from gcx.tree import format_term

doc = "<library><book><title/><author/></book><book><title/><author/></book></library>"
tree = parse_xml(doc)
binary = fcns_encode(tree)
print(format_term(binary))

# %%
# Hash-consing shares the repeated book records. The grammar has rank 0,
# so it is a DAG of the tree.
dag = build_dag(binary)
print(write_grammar(dag))
print("tree edges:", 2 * len(tree), "grammar size:", dag.size)

# %%
# The same document written by hand with a parameter: B(y1) is a book
# followed by whatever is plugged in for y1.
from gcx import data_path, parse_grammar

g1 = parse_grammar(open(data_path("library.slt")).read())
print(write_grammar(g1))
print(format_term(expand(g1)))

# %%
# Queries compile to selecting top-down automata; the engine runs them
# over the grammar rules.
from gcx import count, materialize, query_to_dst
from gcx.automaton import write_automaton

a = query_to_dst("//book/title")
print(write_automaton(a))
print("count:", count(g1, a))
print("pre-order ids:", materialize(g1, a))

# %%
# Result subtrees are written straight from the grammar.
import io

from gcx import serialize

out = io.StringIO()
serialize(g1, query_to_dst("//book"), out)
print(out.getvalue())
