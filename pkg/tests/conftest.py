import pytest
from hypothesis import settings

from gcx.automaton import parse_automaton
from gcx.grammar import parse_grammar

from .helpers import bundled_text

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


@pytest.fixture
def g1():
    return parse_grammar(bundled_text("library.slt"))


@pytest.fixture
def chain_grammar():
    return parse_grammar(bundled_text("chain_of_a.slt"))


@pytest.fixture
def every_third():
    return parse_automaton(bundled_text("every_third.dst"))


def pytest_terminal_summary(terminalreporter):
    from .test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
