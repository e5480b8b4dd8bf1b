"""Writing selected subtrees as compressed tag sequences.

Materializing and serializing results can produce output far larger than
the grammar. Straight-line programs over opening and closing tags keep it
compressed.
"""

# %%
from gcx import data_path, parse_automaton, parse_grammar, relabel, slt_to_slp, subtrees_slp
from gcx.grammar import write_grammar
from gcx.slp import detokenize, expand, write_slp

chain = parse_grammar(open(data_path("chain_of_a.slt")).read())
every_third = parse_automaton(open(data_path("every_third.dst")).read())

# %%
# Relabeling records the automaton's state in each nonterminal name and
# marks selected labels with ^.
marked = relabel(chain, every_third)
print(write_grammar(marked))

# %%
# One SLP rule per chunk of each rule body gives the whole marked document
# as a tag sequence.
p = slt_to_slp(marked)
print(write_slp(p))
print(detokenize(expand(p)))

# %%
# Only the subtrees at chosen pre-order ids.
q = subtrees_slp(chain, [14, 16])
print(detokenize(expand(q)))

# %%
# For DAG grammars the output grows by a constant per result.
from gcx import build_dag, dag_subtrees_slp, fcns_encode, parse_xml

doc = "<r>" + "<x><y/><z/></x>" * 50 + "</r>"
dag = build_dag(fcns_encode(parse_xml(doc)))
ids = list(range(2, 2 + 3 * 50, 3))
print(len(ids), "results,", dag_subtrees_slp(dag, ids).size, "symbols, grammar size", dag.size)
