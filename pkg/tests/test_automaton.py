import pytest
from hypothesis import given

from gcx.automaton import (
    DEFAULT,
    DstAutomaton,
    Rule,
    canonical_form,
    check,
    dst_run,
    isomorphic,
    mark_selected,
    normalized,
    parse_automaton,
    run_states,
    validate,
    write_automaton,
)
from gcx.errors import ParseError, ValidationError
from gcx.grammar import expand
from gcx.tree import Bin, Node, count_labeled, fcns_encode, iter_preorder
from gcx.xpath import minimize_dfa, query_to_dst, segment_to_dfa, parse_xpath

from .helpers import fixture_text, unranked_trees


def path(*labels):
    root = Node(labels[0])
    cur = root
    for label in labels[1:]:
        nxt = Node(label)
        cur.children.append(nxt)
        cur = nxt
    return fcns_encode(root)


@pytest.fixture
def q1_printed():
    return parse_automaton(fixture_text("q1_printed.dst"))


class TestValidate:
    def test_printed_q1_table(self, q1_printed):
        assert validate(q1_printed) == []
        assert len(q1_printed.states) == 7

    def test_missing_default(self):
        a = DstAutomaton(["q"], "q", [Rule("q", "a", "q", "q")])
        assert any("default" in p for p in validate(a))

    def test_two_rules_same_lhs(self):
        a = DstAutomaton(["q"], "q", [Rule("q", "a", "q", "q"), Rule("q", "a", "q", "q", True),
                                      Rule("q", DEFAULT, "q", "q")])
        assert any("(q,a)" in p for p in validate(a))

    def test_two_defaults(self):
        a = DstAutomaton(["q"], "q", [Rule("q", DEFAULT, "q", "q"), Rule("q", DEFAULT, "q", "q")])
        assert validate(a)

    def test_unknown_state(self):
        a = DstAutomaton(["q"], "q", [Rule("q", DEFAULT, "q", "r")])
        assert any("unknown state r" in p for p in validate(a))

    def test_bad_initial(self):
        a = DstAutomaton(["q"], "p", [Rule("q", DEFAULT, "q", "q")])
        assert validate(a)
        with pytest.raises(ValidationError):
            check(a)


class TestLookup:
    def test_selecting_rule(self, q1_printed):
        r = q1_printed.lookup("q5", "d")
        assert r.selecting and (r.left, r.right) == ("q6", "q5")

    def test_default(self, q1_printed):
        r = q1_printed.lookup("q5", "z")
        assert r.label == DEFAULT and not r.selecting and (r.left, r.right) == ("q4", "q5")

    def test_unknown_label_everywhere(self, q1_printed):
        for q in q1_printed.states:
            assert q1_printed.lookup(q, "never-seen") is q1_printed.default(q)


class TestRun:
    def test_q1_on_path(self):
        a = query_to_dst("//a/*/b//c/d")
        assert dst_run(a, path("a", "x", "b", "c", "d")) == [5]

    def test_no_selecting_rules(self):
        a = DstAutomaton(["q"], "q", [Rule("q", DEFAULT, "q", "q")])
        assert dst_run(a, path("a", "b", "c")) == []

    def test_every_third(self, chain_grammar, every_third):
        assert dst_run(every_third, expand(chain_grammar)) == [3, 6, 9, 12, 15]

    def test_deep_chain(self, every_third):
        b = path(*(["a"] * 200_000))
        assert len(dst_run(every_third, b)) == 200_000 // 3

    def test_mark_selected(self, chain_grammar, every_third):
        marked = mark_selected(every_third, expand(chain_grammar))
        flags = [n.marked for n in iter_preorder(marked) if isinstance(n, Bin)]
        assert [i for i, f in enumerate(flags, 1) if f] == [3, 6, 9, 12, 15]

    @given(unranked_trees())
    def test_result_bounded(self, t):
        b = fcns_encode(t)
        ids = dst_run(query_to_dst("//*"), b)
        assert ids == list(range(1, count_labeled(b) + 1))

    @given(unranked_trees(max_nodes=60))
    def test_lifted_states_follow_paths(self, t):
        """The state entering a node is the path DFA's state after its ancestors."""
        q = parse_xpath("//a/*/b//c")
        dfa = minimize_dfa(segment_to_dfa(q.steps))
        a = query_to_dst(q)
        states = run_states(a, fcns_encode(t))
        # map DST states back through the DFA by replaying each node's ancestor path
        names = {}
        stack = [(t, [])]
        order = []
        while stack:
            node, ancestors = stack.pop()
            order.append(dfa.run(ancestors))
            for c in reversed(node.children):
                stack.append((c, ancestors + [node.label]))
        for dst_state, dfa_state in zip(states, order):
            assert names.setdefault(dst_state, dfa_state) == dfa_state


class TestFormat:
    def test_round_trip(self, q1_printed):
        again = parse_automaton(write_automaton(q1_printed))
        assert again.initial == q1_printed.initial
        assert set(again.rules) == set(q1_printed.rules)

    def test_first_state_is_initial(self):
        a = parse_automaton("s,% -> t,t\nt,% => t,t\n")
        assert a.initial == "s"

    @pytest.mark.parametrize("text", ["q,a q1,q2", "q -> q1,q2", "q,a -> q1", "", "q,a -> q,q"])
    def test_errors(self, text):
        with pytest.raises((ParseError, ValidationError)):
            parse_automaton(text)


class TestCanonicalForm:
    def test_renaming_invariant(self, q1_printed):
        renamed = parse_automaton(fixture_text("q1_printed.dst").replace("q", "s"))
        assert canonical_form(renamed) == canonical_form(q1_printed)

    def test_redundant_exceptions_ignored(self):
        a = parse_automaton("q,% -> q,q\n")
        b = parse_automaton("q,x -> q,q\nq,% -> q,q\n")
        assert canonical_form(a) != canonical_form(b)
        assert isomorphic(a, b)
        assert len(normalized(b).rules) == 1

    def test_selecting_matters(self):
        a = parse_automaton("q,% -> q,q\n")
        b = parse_automaton("q,% => q,q\n")
        assert not isomorphic(a, b)
