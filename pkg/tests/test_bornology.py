from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bornconv.bornology import (
    Bornology,
    bornology_from_base,
    bounded_subsets,
    is_stable_under_small_enlargement,
    product_bornology,
    rectangle,
    trivial_bornology,
)
from bornconv.errors import InvariantViolation, NotACover
from bornconv.metric import FiniteMetricSpace, box_product, iter_submasks

from conftest import metric_spaces


@st.composite
def bornologies(draw, max_points=5):
    X = draw(metric_spaces(max_points))
    base = draw(st.lists(st.integers(1, X.full), min_size=1, max_size=4))
    # repair the cover with singletons of whatever is missing
    span = 0
    for b in base:
        span |= b
    base += [1 << i for i in range(X.n) if not span >> i & 1]
    return bornology_from_base(X, [X.labels_of(b) for b in base])


@pytest.fixture
def abc():
    return FiniteMetricSpace("abc", [[0, 1, 2], [1, 0, 1], [2, 1, 0]])


def test_full_base_gives_all_nonempty_subsets(abc):
    assert trivial_bornology(abc).members == frozenset(range(1, 8))
    assert bornology_from_base(abc, [abc.labels]).members == frozenset(range(1, 8))


def test_singleton_base_gives_all_nonempty_subsets(abc):
    born = bornology_from_base(abc, [[x] for x in abc.labels])
    assert born == trivial_bornology(abc)
    assert bounded_subsets(abc) == born


def test_not_a_cover(abc):
    with pytest.raises(NotACover) as exc:
        bornology_from_base(abc, [["a", "b"]])
    assert "c" in str(exc.value)


def test_empty_member_rejected(abc):
    with pytest.raises(InvariantViolation):
        Bornology(abc, [0, abc.full])


def test_membership_queries(abc):
    born = bornology_from_base(abc, [["a", "b"], ["c"]])
    assert abc.points("ab") in born
    assert abc.points("ac") in born  # union of two members
    assert not born.contains(0)


def test_stability_examples(abc):
    assert is_stable_under_small_enlargement(trivial_bornology(abc))
    assert is_stable_under_small_enlargement(bornology_from_base(abc, [["a"], ["b"], ["c"]]))
    # at half the smallest distance every enlargement is the set itself
    half = abc.spectrum[0] / 2
    assert all(abc.enlarge(m, half) == m for m in range(1, 8))


def test_product_bornology_examples(abc):
    Y = FiniteMetricSpace("pq", [[0, 1], [1, 0]])
    XY = box_product(abc, Y)
    assert product_bornology(trivial_bornology(abc), Y).members == frozenset(range(1, XY.full + 1))
    born = bornology_from_base(abc, [["a"], ["b", "c"]])
    prod = product_bornology(born, Y)
    rect = rectangle(abc, Y, abc.mask("a"))
    assert XY.labels_of(rect) == [("a", "p"), ("a", "q")]
    assert rect in prod.members
    assert all(s in prod.members for s in iter_submasks(rect) if s)


@given(bornologies())
def test_closure_is_idempotent(born):
    again = Bornology(born.space, born.members)
    assert again.members == born.members


@given(bornologies())
def test_closure_is_hereditary_and_union_closed(born):
    fam = born.members
    assert 0 not in fam
    for m in fam:
        assert all(s in fam for s in iter_submasks(m) if s)
        for other in fam:
            assert m | other in fam
    span = 0
    for m in fam:
        span |= m
    assert span == born.space.full


@given(bornologies())
def test_every_finite_bornology_is_stable(born):
    assert is_stable_under_small_enlargement(born)


@given(bornologies(max_points=3), st.integers(1, 3))
def test_product_contains_rectangles_and_their_subsets(born, ny):
    Y = FiniteMetricSpace([f"y{i}" for i in range(ny)],
                          [[Fraction(int(i != j)) for j in range(ny)] for i in range(ny)])
    prod = product_bornology(born, Y)
    for b in born.members:
        assert prod.contains(rectangle(born.space, Y, b))
