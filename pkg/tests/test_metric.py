from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bornconv.errors import EmptySet, InvariantViolation, NonPositiveEpsilon
from bornconv.metric import (
    INF,
    FiniteMetricSpace,
    PointSet,
    box_product,
    distance_spectrum,
    enlargement,
    eps_representatives,
    excess,
    gap,
    parse_rational,
    refine_grid,
)

from conftest import metric_spaces, spaces_with_sets


@pytest.fixture
def path3():
    # d(a,b)=1, d(a,c)=2, d(b,c)=1
    return FiniteMetricSpace("abc", [[0, 1, 2], [1, 0, 1], [2, 1, 0]])


def test_gap_examples(two_points, path3):
    X = two_points
    assert gap(X, "a", X.points("a")) == 0
    assert gap(X, "b", X.points("a")) == 1
    assert gap(path3, "c", path3.points("ab")) == 1


def test_gap_empty_set(two_points):
    with pytest.raises(EmptySet):
        gap(two_points, "a", two_points.points())


def test_enlargement_examples(two_points):
    X = two_points
    A = X.points("a")
    assert enlargement(X, A, Fraction(1, 2)).labels == ["a"]
    assert enlargement(X, A, Fraction(3, 2)).labels == ["a", "b"]
    # strict: b sits at distance exactly 1
    assert enlargement(X, A, 1).labels == ["a"]


def test_enlargement_errors(two_points):
    X = two_points
    with pytest.raises(NonPositiveEpsilon):
        enlargement(X, X.points("a"), 0)
    with pytest.raises(EmptySet):
        enlargement(X, X.points(), 1)


def test_excess_examples(two_points):
    X = two_points
    assert excess(X, X.points("a"), X.points("ab")) == 0
    assert excess(X, X.points("ab"), X.points("a")) == 1
    assert excess(X, X.points(), X.points("a")) == 0
    assert excess(X, X.points("a"), X.points()) == INF


def test_box_product_examples(two_points, py_space):
    XY = box_product(two_points, py_space)
    assert XY.d(("a", "p"), ("a", "p")) == 0
    assert XY.d(("a", "p"), ("b", "q")) == 1
    Y3 = FiniteMetricSpace("pq", [[0, 3], [3, 0]])
    assert box_product(two_points, Y3).d(("a", "p"), ("b", "q")) == 3


def test_distance_spectrum_examples(two_points, path3):
    assert distance_spectrum([two_points]) == [1]
    assert distance_spectrum([path3]) == [1, 2]
    Y = FiniteMetricSpace("pq", [[0, 3], [3, 0]])
    assert distance_spectrum([path3, Y]) == [1, 2, 3]


def test_constructor_reports_every_violation():
    with pytest.raises(InvariantViolation) as exc:
        FiniteMetricSpace("abc", [[0, 1, 5], [2, 0, 1], [5, 1, 0]])
    found = exc.value.violations
    for kind in ("symmetry", "triangle inequality"):
        assert any(v.startswith(kind) for v in found)


@pytest.mark.parametrize("dist, kind", [
    ([[0, 1], [1, 1]], "zero diagonal"),
    ([[0, 0], [0, 0]], "positivity"),
    ([[0, 1]], "square"),
])
def test_constructor_rejects(dist, kind):
    with pytest.raises(InvariantViolation) as exc:
        FiniteMetricSpace("ab", dist)
    assert any(v.startswith(kind) for v in exc.value.violations)


def test_parse_rational():
    assert parse_rational("3/2") == Fraction(3, 2)
    assert parse_rational("4") == 4
    for bad in ["1.5", "", "1/", "a", True]:
        with pytest.raises(ValueError):
            parse_rational(bad)


def test_point_set_ops(path3):
    A, C = path3.points("ab"), path3.points("bc")
    assert (A & C).labels == ["b"]
    assert (A | C).labels == ["a", "b", "c"]
    assert path3.points("b") <= A
    assert "a" in A and "c" not in A
    assert len(A) == 2
    with pytest.raises(InvariantViolation):
        PointSet(path3, 1 << 5)


@given(spaces_with_sets(), st.sampled_from([Fraction(k, 4) for k in range(1, 17)]))
def test_inclusion_excess_equivalence(data, eps):
    X, a, c = data
    if not a or not c:
        return
    A, C = PointSet(X, a), PointSet(X, c)
    assert (A <= enlargement(X, C, eps)) == (excess(X, A, C) < eps)


@given(spaces_with_sets(), st.fractions(min_value=Fraction(1, 8), max_value=4),
       st.fractions(min_value=Fraction(1, 8), max_value=4))
def test_enlargement_monotone(data, e1, e2):
    X, a, _ = data
    if not a:
        return
    e1, e2 = sorted([e1, e2])
    A = PointSet(X, a)
    assert A <= enlargement(X, A, e1) <= enlargement(X, A, e2)


@given(spaces_with_sets(), st.fractions(min_value=0, max_value=1, max_denominator=97))
def test_spectrum_stability(data, frac):
    X, a, _ = data
    if not a:
        return
    A = PointSet(X, a)
    reps = eps_representatives(X.spectrum)
    lo = Fraction(0)
    for t in reps:
        eps = lo + (t - lo) * frac
        if frac > 0:
            assert enlargement(X, A, eps) == enlargement(X, A, t)
        lo = t


@given(metric_spaces(3, "x"), metric_spaces(3, "y"))
def test_box_product_is_metric(X, Y):
    XY = box_product(X, Y)  # constructor re-checks every axiom
    assert XY.n == X.n * Y.n


def test_refine_grid_contains_representatives():
    reps = [Fraction(1), Fraction(2)]
    fine = refine_grid(reps, 10)
    assert len(fine) == 20
    assert set(reps) <= set(fine)
    assert fine[0] == Fraction(1, 10)
