import pytest
from hypothesis import given
from hypothesis import strategies as st

from gcx.grammar import expand, labeled_lengths, rank, validate
from gcx.oracle import naive_eval, random_grammar, random_query, random_tree
from gcx.tree import UNDERSCORE, Bin, Node, fcns_encode, iter_preorder, parse_xml
from gcx.xpath import CHILD, DESCENDANT, FOLLOWING_SIBLING, parse_xpath

from .helpers import LIBRARY_XML, unranked_trees


@pytest.fixture
def library():
    return parse_xml(LIBRARY_XML)


class TestNaiveEval:
    @pytest.mark.parametrize("query, expected", [
        ("//book", [2, 5]),
        ("/library/book/title", [3, 6]),
        ("/library", [1]),
        ("/*", [1]),
        ("//*", [1, 2, 3, 4, 5, 6, 7]),
        ("//title/following-sibling::author", [4, 7]),
        ("//book/following-sibling::book", [5]),
        ("//book/following-sibling::*/title", [6]),
        ("/library//author", [4, 7]),
        ("//nothing", []),
        ("/book", []),
    ])
    def test_library(self, library, query, expected):
        assert naive_eval(query, library) == expected

    def test_binary_input(self, library):
        assert naive_eval("//book", fcns_encode(library)) == [2, 5]

    def test_parsed_query(self, library):
        assert naive_eval(parse_xpath("//author"), library) == [4, 7]

    def test_nested_descendants(self):
        t = Node("a", [Node("a", [Node("a")]), Node("b")])
        assert naive_eval("//a//a", t) == [2, 3]
        assert naive_eval("//a//*", t) == [2, 3, 4]

    def test_deep_tree(self):
        t = Node("a")
        cur = t
        for _ in range(50_000):
            nxt = Node("a")
            cur.children.append(nxt)
            cur = nxt
        assert len(naive_eval("//a/a", t)) == 50_000

    @given(unranked_trees())
    def test_descendant_star_selects_everything(self, t):
        assert naive_eval("//*", t) == list(range(1, len(t) + 1))

    @given(unranked_trees())
    def test_child_of_descendant(self, t):
        # //*/x is every non-root x
        labels = [n.label for n in t.iter()]
        expected = [i for i, w in enumerate(labels, 1) if w == "a" and i > 1]
        assert naive_eval("//*/a", t) == expected


class TestRandomGrammar:
    def test_deterministic(self):
        assert random_grammar(3) == random_grammar(3)
        assert any(random_grammar(3) != random_grammar(s) for s in range(4, 10))

    @given(st.integers(0, 10**6))
    def test_valid_and_bounded(self, seed):
        g = random_grammar(seed, max_nodes=500)
        assert validate(g) == []
        assert labeled_lengths(g)[g.start] <= 500
        assert rank(g) <= 2
        assert expand(g).right is UNDERSCORE

    @given(st.integers(0, 10**6))
    def test_rank_zero(self, seed):
        assert rank(random_grammar(seed, max_rank=0, max_nodes=500)) == 0

    def test_alphabet(self):
        g = random_grammar(11, alphabet=("x",))
        assert {n.label for n in iter_preorder(expand(g)) if isinstance(n, Bin)} == {"x"}

    def test_bad_bounds(self):
        with pytest.raises(ValueError):
            random_grammar(0, max_rules=0)
        with pytest.raises(ValueError):
            random_grammar(0, alphabet=())


class TestRandomQuery:
    def test_deterministic(self):
        assert random_query(5) == random_query(5)

    @given(st.integers(0, 10**6))
    def test_shape(self, seed):
        q = random_query(seed, max_steps=4)
        assert 1 <= len(q.steps) <= 4
        assert q.steps[0].axis != FOLLOWING_SIBLING
        assert parse_xpath(str(q)) == q

    def test_single_step(self):
        for seed in range(50):
            assert len(random_query(seed, max_steps=1).steps) == 1

    def test_unmatchable_tests(self):
        q = random_query(1, selectivity=0.0, wildcard=0.0)
        assert all(s.test == "zz" for s in q.steps)

    def test_axes_vary(self):
        axes = {s.axis for seed in range(200) for s in random_query(seed, max_steps=3).steps}
        assert axes == {CHILD, DESCENDANT, FOLLOWING_SIBLING}


class TestRandomTree:
    def test_size_and_determinism(self):
        t = random_tree(4, size=30)
        assert len(t) == 30
        assert random_tree(4, size=30) == t
