import itertools

import pytest

from arboreal.core import PointedStructure, Structure, Vocabulary

GRAPH = Vocabulary({"R": 2})
KRIPKE = Vocabulary({"R": 2, "p": 1})


def graph(universe, edges=()):
    return Structure(GRAPH, list(universe), {"R": [tuple(e) for e in edges]})


def kripke(universe, edges=(), p=(), point=None):
    S = Structure(KRIPKE, list(universe), {"R": [tuple(e) for e in edges], "p": [(x,) for x in p]})
    return PointedStructure(S, point if point is not None else S.universe[0])


def complete(n, names=None):
    names = names or [f"v{i}" for i in range(n)]
    return graph(names, [(x, y) for x, y in itertools.permutations(names, 2)])


@pytest.fixture
def swap():
    """Two elements joined in both directions by R, and nothing else."""
    return graph("ab", [("a", "b"), ("b", "a")])


@pytest.fixture
def loop():
    return graph("x", [("x", "x")])


def graphs(max_size=3, names="abcd"):
    """Hypothesis strategy for graphs on at most ``max_size`` elements."""
    from hypothesis import strategies as st

    @st.composite
    def build(draw):
        n = draw(st.integers(0, max_size))
        elems = list(names[:n])
        pairs = [(x, y) for x in elems for y in elems]
        edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
        return graph(elems, edges)

    return build()


def pointed_kripke(max_size=4):
    from hypothesis import strategies as st

    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_size))
        elems = [f"w{i}" for i in range(n)]
        pairs = [(x, y) for x in elems for y in elems]
        edges = draw(st.lists(st.sampled_from(pairs), unique=True))
        p = draw(st.lists(st.sampled_from(elems), unique=True))
        return kripke(elems, edges, p, draw(st.sampled_from(elems)))

    return build()


# one line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
