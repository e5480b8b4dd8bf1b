import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gcx.automaton import DEFAULT, dst_run, isomorphic, parse_automaton, validate
from gcx.errors import DfaBlowupError, UnsupportedQueryError
from gcx.oracle import naive_eval, random_query, random_tree
from gcx.tree import Node, fcns_encode
from gcx.xpath import (
    CHILD,
    DESCENDANT,
    FOLLOWING_SIBLING,
    PathDfa,
    Step,
    dfa_canonical_form,
    minimize_dfa,
    parse_xpath,
    query_to_dst,
    segment_to_dfa,
)

from .helpers import fixture_text, unranked_trees

Q1 = "//a/*/b//c/d"
SIBLING_QUERY = "/a/following-sibling::b/c"

# The DFA drawn for Q1: states 0..6, final {6}. Each row is
# (default target, {label: target}).
Q1_DRAWN = [
    (0, {"a": 1}),
    (3, {"a": 2}),
    (3, {"a": 2, "b": 4}),
    (3, {"a": 2, "b": 4}),
    (4, {"c": 5}),
    (4, {"c": 5, "d": 6}),
    (4, {"c": 5}),
]


def drawn_dfa(rows=Q1_DRAWN):
    return PathDfa(0, {6}, [d for d, _ in rows], [e for _, e in rows])


def path_selected(query, labels):
    """Naive answer: is the last node of a root-to-leaf path selected?"""
    root = Node(labels[0])
    cur = root
    for w in labels[1:]:
        nxt = Node(w)
        cur.children.append(nxt)
        cur = nxt
    return len(labels) in naive_eval(query, root)


def all_paths(alphabet, max_len):
    for n in range(1, max_len + 1):
        yield from itertools.product(alphabet, repeat=n)


class TestParse:
    def test_q1(self):
        assert parse_xpath(Q1).steps == (
            Step(DESCENDANT, "a"), Step(CHILD, None), Step(CHILD, "b"),
            Step(DESCENDANT, "c"), Step(CHILD, "d"),
        )

    def test_sibling(self):
        assert parse_xpath(SIBLING_QUERY).steps == (
            Step(CHILD, "a"), Step(FOLLOWING_SIBLING, "b"), Step(CHILD, "c"),
        )

    def test_single_step(self):
        assert parse_xpath("/a").steps == (Step(CHILD, "a"),)

    def test_explicit_axes(self):
        q = parse_xpath("/child::a/descendant::b/following-sibling::*")
        assert [s.axis for s in q.steps] == [CHILD, DESCENDANT, FOLLOWING_SIBLING]
        assert parse_xpath("//child::a") == parse_xpath("//a")

    def test_str_round_trip(self):
        for text in (Q1, SIBLING_QUERY, "/*//x"):
            q = parse_xpath(text)
            assert parse_xpath(str(q)) == q

    @pytest.mark.parametrize("text, construct", [
        ("//a[b]", "filters"),
        ("//a/@id", "attribute"),
        ("//a | //b", "unions"),
        ("a/b", "absolute"),
        ("/ancestor::a", "ancestor"),
        ("//following-sibling::a", "following-sibling"),
        ("/a/text()", "text()"),
        ("/a/..", "'.'"),
        ("/following-sibling::a", "following-sibling"),
        ("", "absolute"),
    ])
    def test_unsupported(self, text, construct):
        with pytest.raises(UnsupportedQueryError) as info:
            parse_xpath(text)
        assert construct in str(info.value)


class TestPathDfa:
    def test_q1_has_seven_states(self):
        dfa = minimize_dfa(segment_to_dfa(parse_xpath(Q1).steps))
        assert dfa.n_states == 7
        assert len(dfa.finals) == 1

    def test_q1_matches_drawing_except_state_3(self):
        """Same structure as the drawing once state 3's a/default rows are corrected."""
        dfa = minimize_dfa(segment_to_dfa(parse_xpath(Q1).steps))
        corrected = list(Q1_DRAWN)
        corrected[3] = (0, {"a": 1, "b": 4})
        assert dfa_canonical_form(dfa) == dfa_canonical_form(drawn_dfa(corrected))

    def test_drawn_q1_dfa_disagrees_with_semantics(self):
        """The drawn DFA accepts a/x/y/b/c/d, which Q1 does not select."""
        witness = ("a", "x", "y", "b", "c", "d")
        assert drawn_dfa().accepts(witness)
        assert not path_selected(parse_xpath(Q1), witness)
        dfa = segment_to_dfa(parse_xpath(Q1).steps)
        assert not dfa.accepts(witness)

    @pytest.mark.parametrize("text", [Q1, "//a/b", "/a", "/*", "//*//*", "/a/*/*/b", "//a//a/b"])
    def test_agrees_with_naive_paths(self, text):
        q = parse_xpath(text)
        dfa = segment_to_dfa(q.steps)
        small = minimize_dfa(dfa)
        for labels in all_paths(("a", "b", "x"), 6):
            expected = path_selected(q, labels)
            assert dfa.accepts(labels) == expected, labels
            assert small.accepts(labels) == expected, labels

    def test_single_child_step(self):
        dfa = minimize_dfa(segment_to_dfa(parse_xpath("/a").steps))
        # initial, final and a dead sink
        assert dfa.n_states == 3
        assert dfa.accepts(["a"]) and not dfa.accepts(["b"]) and not dfa.accepts(["a", "a"])
        assert all(dfa.default[s] is not None for s in range(dfa.n_states))

    @pytest.mark.parametrize("text", ["//a/b", "/a/b/c", "//a//b//c", "/a//b/a/b", "//x/x/x/y"])
    def test_no_wildcards_linear(self, text):
        q = parse_xpath(text)
        assert minimize_dfa(segment_to_dfa(q.steps)).n_states <= len(q.steps) + 2

    def test_wildcard_blowup_is_capped(self):
        q = parse_xpath("//a" + "/*" * 12)
        with pytest.raises(DfaBlowupError):
            segment_to_dfa(q.steps, max_states=500)
        assert segment_to_dfa(parse_xpath("//a/*/*").steps, max_states=500).n_states <= 500

    def test_rejects_sibling_steps(self):
        with pytest.raises(ValueError):
            segment_to_dfa(parse_xpath(SIBLING_QUERY).steps)


class TestQueryToDst:
    def test_q1_printed_table_is_not_reproduced(self):
        # the printed table inherits the drawn DFA's state-3 rows
        printed = parse_automaton(fixture_text("q1_printed.dst"))
        assert not isomorphic(query_to_dst(Q1), printed)

    def test_q1_printed_table_differs_only_in_state_3(self):
        text = fixture_text("q1_printed.dst")
        corrected = text.replace("q3,a -> q2,q3", "q3,a -> q1,q3").replace("q3,% -> q3,q3", "q3,% -> q0,q3")
        assert isomorphic(query_to_dst(Q1), parse_automaton(corrected))

    def test_q1_selecting_rule(self):
        a = query_to_dst(Q1)
        selecting = [r for r in a.rules if r.selecting]
        assert len(selecting) == 1 and selecting[0].label == "d"

    def test_sibling_query_matches_printed_table(self):
        printed = parse_automaton(fixture_text("sibling_printed.dst"))
        a = query_to_dst(SIBLING_QUERY)
        assert len(a.states) == 4
        assert isomorphic(a, printed)

    def test_root_wildcard(self):
        a = query_to_dst("/*")
        init = a.default(a.initial)
        assert init.selecting
        assert [r for r in a.rules if r.selecting] == [init]
        below = a.default(init.left)
        assert not below.selecting and a.default(below.left).left == below.left
        for seed in range(50):
            b = fcns_encode(random_tree(seed, size=15))
            assert dst_run(a, b) == [1]

    @pytest.mark.parametrize("text", [Q1, SIBLING_QUERY, "//a", "/a//b/following-sibling::c//d",
                                      "//*/following-sibling::*/following-sibling::a"])
    def test_valid(self, text):
        assert validate(query_to_dst(text)) == []

    def test_dfa_cap_propagates(self):
        with pytest.raises(DfaBlowupError):
            query_to_dst("//a" + "/*" * 12, max_states=100)
        with pytest.raises(DfaBlowupError):
            query_to_dst("//a/following-sibling::b" + "/*" * 12, max_states=50)


CORPUS = [
    "/a", "/*", "//a", "//*", "/a/b", "//a/b", "//a//b", Q1, "//a/*/b", "/a/*//c",
    SIBLING_QUERY, "//a/following-sibling::b", "//a/following-sibling::*/c",
    "/a//b/following-sibling::c//d", "//b/following-sibling::a/following-sibling::b",
    "//*/following-sibling::*", "//a/following-sibling::b//c/following-sibling::d",
    "//c/following-sibling::*/*", "/a/following-sibling::a", "//d/following-sibling::a//b",
]


@pytest.mark.parametrize("text", CORPUS)
@given(t=unranked_trees(max_nodes=200))
def test_automaton_equals_query_on_corpus(text, t):
    assert dst_run(query_to_dst(text), fcns_encode(t)) == naive_eval(parse_xpath(text), t)


@given(st.integers(0, 10**6), unranked_trees(max_nodes=120))
def test_automaton_equals_query_random(seed, t):
    q = random_query(seed, max_steps=4, alphabet=("a", "b", "c", "d"))
    assert dst_run(query_to_dst(q), fcns_encode(t)) == naive_eval(q, t)


def test_default_symbol_is_not_a_label():
    with pytest.raises(UnsupportedQueryError):
        parse_xpath("/" + DEFAULT)
