from fractions import Fraction

import pytest
from hypothesis import strategies as st

from bornconv.harness import CampaignConfig, random_instance, shortest_path_completion
from bornconv.metric import FiniteMetricSpace

POOL = [Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3)]

ACCEPTANCE_LINES: list[str] = []


@st.composite
def metric_spaces(draw, max_points=5, prefix="p"):
    n = draw(st.integers(1, max_points))
    weights = {
        (i, j): draw(st.sampled_from(POOL)) for i in range(n) for j in range(i + 1, n)
    }
    return FiniteMetricSpace([f"{prefix}{i}" for i in range(n)], shortest_path_completion(n, weights))


@st.composite
def spaces_with_sets(draw, max_points=5):
    X = draw(metric_spaces(max_points))
    A = draw(st.integers(0, X.full))
    C = draw(st.integers(0, X.full))
    return X, A, C


def instances(**config_kwargs):
    """Random instances drawn through the campaign generator by seed."""
    return st.builds(
        lambda seed, trial: random_instance(CampaignConfig(seed=seed, **config_kwargs), trial),
        st.integers(0, 10_000),
        st.integers(0, 50),
    )


@pytest.fixture
def two_points():
    return FiniteMetricSpace(["a", "b"], [[0, 1], [1, 0]])


@pytest.fixture
def py_space():
    return FiniteMetricSpace(["p", "q"], [[0, 1], [1, 0]])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
