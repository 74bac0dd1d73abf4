import pytest
from hypothesis import given, strategies as st

from bornconv.bornology import bornology_from_base, trivial_bornology
from bornconv.errors import InvariantViolation
from bornconv.metric import FiniteMetricSpace, PointSet
from bornconv.partial_maps import (
    PartialMap,
    PartialMapNet,
    graph,
    image,
    is_continuous,
    is_strongly_uniformly_continuous,
    is_uniformly_continuous_rel,
)
from bornconv.order import DirectedSet

from conftest import instances, metric_spaces


@pytest.fixture
def X():
    return FiniteMetricSpace("ab", [[0, 1], [1, 0]])


@pytest.fixture
def Y():
    return FiniteMetricSpace("pq", [[0, 1], [1, 0]])


@st.composite
def partial_maps(draw):
    X = draw(metric_spaces(4, "x"))
    Y = draw(metric_spaces(3, "y"))
    table = draw(st.lists(st.one_of(st.none(), st.integers(0, Y.n - 1)), min_size=X.n, max_size=X.n))
    if all(v is None for v in table):
        table[0] = 0
    return PartialMap(X, Y, table)


def test_graph_examples(X, Y):
    assert graph(PartialMap.from_dict(X, Y, {"a": "p"})).labels == [("a", "p")]
    both = PartialMap.from_dict(X, Y, {"a": "p", "b": "p"})
    assert graph(both).labels == [("a", "p"), ("b", "p")]


def test_image_examples(X, Y):
    u = PartialMap.from_dict(X, Y, {"a": "p", "b": "q"})
    assert image(u, X.points("b")).labels == ["q"]
    assert image(u, X.points("ab")).labels == ["p", "q"]
    v = PartialMap.from_dict(X, Y, {"a": "p"})
    assert not image(v, X.points("b"))


def test_partial_map_validation(X, Y):
    with pytest.raises(InvariantViolation):
        PartialMap(X, Y, [None, None])
    with pytest.raises(InvariantViolation):
        PartialMap(X, Y, [0])
    with pytest.raises(InvariantViolation):
        PartialMap(X, Y, [0, 5])


def test_net_validation(X, Y):
    ds = DirectedSet.linear([1, 2])
    u = PartialMap.from_dict(X, Y, {"a": "p"})
    with pytest.raises(InvariantViolation):
        PartialMapNet(ds, [u])
    Z = FiniteMetricSpace("pqr", [[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    with pytest.raises(InvariantViolation):
        PartialMapNet(ds, [u, PartialMap.from_dict(X, Z, {"a": "r"})])


def test_continuity_examples(X, Y):
    born = trivial_bornology(X)
    const = PartialMap.from_dict(X, Y, {"a": "p", "b": "p"})
    swap = PartialMap.from_dict(X, Y, {"a": "q", "b": "p"})
    single = PartialMap.from_dict(X, Y, {"b": "q"})
    for pm in (const, swap, single):
        assert is_strongly_uniformly_continuous(pm, born)
        assert is_uniformly_continuous_rel(pm, born)
        assert is_continuous(pm)


@given(partial_maps())
def test_graph_projects_to_domain(pm):
    G = graph(pm)
    assert len(G) == len(pm.domain)
    assert sorted({x for x, _ in G.labels}) == pm.domain.labels


@given(partial_maps(), st.data())
def test_image_monotone(pm, data):
    a1 = data.draw(st.integers(0, pm.X.full))
    a2 = a1 | data.draw(st.integers(0, pm.X.full))
    assert image(pm, PointSet(pm.X, a1)) <= image(pm, PointSet(pm.X, a2))


@given(partial_maps(), st.data())
def test_uniform_implies_strong(pm, data):
    base = data.draw(st.lists(st.integers(1, pm.X.full), min_size=1, max_size=3)) + [pm.X.full]
    born = bornology_from_base(pm.X, [pm.X.labels_of(b) for b in base])
    uniform = is_uniformly_continuous_rel(pm, born)
    strong = is_strongly_uniformly_continuous(pm, born)
    assert not uniform or strong
    # discreteness makes both true on every finite instance
    assert uniform and strong and is_continuous(pm)


@given(instances())
def test_generated_limits_are_continuous(inst):
    assert is_continuous(inst.limit)
    assert is_strongly_uniformly_continuous(inst.limit, inst.bornology)
