"""Evaluate XPath queries directly on grammar-compressed XML trees.

Documents are ordered element trees in first-child/next-sibling binary
form, compressed by straight-line tree (SLT) grammars. Queries compile to
deterministic selecting top-down automata which are run over the grammar
rules, never over the expanded tree.
"""

from . import automaton, engine, grammar, oracle, slp, tree, xpath
from .automaton import DstAutomaton, dst_run, parse_automaton, write_automaton
from .engine import (
    build_behavior,
    count,
    dag_subtrees_slp,
    materialize,
    relabel,
    serialize,
    slt_to_slp,
    subtrees_slp,
)
from .errors import (
    DfaBlowupError,
    ExpansionLimitError,
    GcxError,
    LimitExceeded,
    ParseError,
    UnsupportedQueryError,
    ValidationError,
)
from .grammar import Grammar, build_dag, expand, node_normal_form, parse_grammar, write_grammar
from .slp import Slp, parse_slp, write_slp
from .tree import UNDERSCORE, Bin, Node, fcns_decode, fcns_encode, parse_xml, serialize_subtree
from .xpath import parse_xpath, query_to_dst

__version__ = "0.1.0"


def data_path(name):
    """Path of a bundled example file such as ``library.slt``."""
    from importlib.resources import files

    return str(files(__name__).joinpath("data", name))
