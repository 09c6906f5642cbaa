import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from apuf_entropy.model import PhiVector

ACCEPTANCE_LINES: list[str] = []


def phi_vectors(n: int) -> list[PhiVector]:
    """Every phi vector of length n+1, by direct enumeration of the free signs."""
    return [PhiVector(signs + (1,)) for signs in itertools.product((1, -1), repeat=n)]


def match_count(a: PhiVector, b: PhiVector) -> int:
    return int(np.sum(np.array(a.phis[:-1]) == np.array(b.phis[:-1])))


def random_phi(rng: np.random.Generator, n: int) -> PhiVector:
    return PhiVector(tuple(int(x) for x in rng.choice((1, -1), size=n)) + (1,))


@st.composite
def phi_strategy(draw, n=None, min_n=2, max_n=40):
    if n is None:
        n = draw(st.integers(min_n, max_n))
    signs = draw(st.lists(st.sampled_from((1, -1)), min_size=n, max_size=n))
    return PhiVector(tuple(signs) + (1,))


@st.composite
def phi_pair(draw, min_n=2, max_n=40):
    n = draw(st.integers(min_n, max_n))
    return draw(phi_strategy(n)), draw(phi_strategy(n))


@st.composite
def phi_triple(draw, min_n=2, max_n=40):
    n = draw(st.integers(min_n, max_n))
    return draw(phi_strategy(n)), draw(phi_strategy(n)), draw(phi_strategy(n))


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
