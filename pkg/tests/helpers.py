"""Shared test data and Hypothesis strategies."""

import os

from hypothesis import strategies as st

from gcx import data_path
from gcx.tree import Node

HERE = os.path.dirname(__file__)

LABELS = ("a", "b", "c", "d")

LIBRARY_XML = (
    "<library><book><title/><author/></book>"
    "<book><title/><author/></book></library>"
)


def fixture_text(name):
    with open(os.path.join(HERE, "data", name), encoding="utf-8") as f:
        return f.read()


def bundled_text(name):
    with open(data_path(name), encoding="utf-8") as f:
        return f.read()


@st.composite
def unranked_trees(draw, max_nodes=40, labels=LABELS):
    n = draw(st.integers(1, max_nodes))
    nodes = [Node(draw(st.sampled_from(labels)))]
    for _ in range(n - 1):
        parent = nodes[draw(st.integers(0, len(nodes) - 1))]
        child = Node(draw(st.sampled_from(labels)))
        parent.children.append(child)
        nodes.append(child)
    return nodes[0]
