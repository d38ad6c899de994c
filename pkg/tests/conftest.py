import sys
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from cslkit.lattice import Lattice, chain_lattice, complete_lattice


@pytest.fixture
def diamond():
    return Lattice(2, (set(), {0}, {1}, {0, 1}))


@pytest.fixture
def chain3():
    return chain_lattice(3)


@pytest.fixture
def chain2():
    return chain_lattice(2)


@pytest.fixture
def trivial2():
    return Lattice(2, (set(), {0, 1}))


@st.composite
def lattices(draw, min_dim=1, max_dim=6):
    d = draw(st.integers(min_dim, max_dim))
    fam = draw(st.lists(st.frozensets(st.integers(0, d - 1)), max_size=5))
    return complete_lattice(fam, d)


@st.composite
def nests(draw, min_dim=1, max_dim=8):
    """Random nest: a random chain of cut points over a random coordinate order."""
    d = draw(st.integers(min_dim, max_dim))
    order = draw(st.permutations(range(d)))
    cuts = draw(st.lists(st.integers(1, d - 1), unique=True, max_size=d - 1)) if d > 1 else []
    members = [frozenset(order[:c]) for c in sorted(cuts)]
    return complete_lattice(members, d)


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def vectors(draw, d, zero_prob=0.3):
    vals = []
    for _ in range(d):
        if draw(st.floats(0, 1)) < zero_prob:
            vals.append(Fraction(0))
        else:
            vals.append(draw(rationals))
    return tuple(vals)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
