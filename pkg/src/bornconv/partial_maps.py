"""Partial maps ``(D, u)`` between finite metric spaces and nets of them."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .bornology import Bornology, delta_candidates
from .errors import InvariantViolation
from .metric import (
    FiniteMetricSpace,
    PointSet,
    box_product,
    distance_spectrum,
    eps_representatives,
    iter_bits,
)
from .order import DirectedSet


@dataclass(frozen=True)
class PartialMap:
    """``table[i]`` is the Y-index of ``u(x_i)``, or ``None`` off the domain."""

    X: FiniteMetricSpace
    Y: FiniteMetricSpace
    table: tuple

    def __post_init__(self):
        table = tuple(self.table)
        object.__setattr__(self, "table", table)
        problems = []
        if len(table) != self.X.n:
            problems.append(f"table size: expected {self.X.n} entries, got {len(table)}")
        elif all(v is None for v in table):
            problems.append("nonempty domain: a partial map needs at least one point")
        if any(v is not None and not 0 <= v < self.Y.n for v in table):
            problems.append("codomain: a value is not a point of Y")
        if problems:
            raise InvariantViolation(problems)

    @classmethod
    def from_dict(cls, X, Y, mapping: Mapping) -> "PartialMap":
        table = [None] * X.n
        for x, y in mapping.items():
            table[X.index(x)] = Y.index(y)
        return cls(X, Y, table)

    @property
    def domain_mask(self) -> int:
        return sum(1 << i for i, v in enumerate(self.table) if v is not None)

    @property
    def domain(self) -> PointSet:
        return PointSet(self.X, self.domain_mask)

    def __call__(self, x):
        v = self.table[self.X.index(x)]
        if v is None:
            raise KeyError(f"{x!r} is outside the domain")
        return self.Y.labels[v]

    def as_dict(self) -> dict:
        return {
            self.X.labels[i]: self.Y.labels[v]
            for i, v in enumerate(self.table)
            if v is not None
        }

    def graph_mask(self) -> int:
        m = self.Y.n
        return sum(1 << (i * m + v) for i, v in enumerate(self.table) if v is not None)


def graph(pm: PartialMap) -> PointSet:
    """``{(x, u(x)) : x in D}`` inside the box product ``X x Y``."""
    return PointSet(box_product(pm.X, pm.Y), pm.graph_mask())


def image_mask(pm: PartialMap, x_mask: int) -> int:
    out = 0
    for i in iter_bits(x_mask):
        v = pm.table[i]
        if v is not None:
            out |= 1 << v
    return out


def image(pm: PartialMap, A: PointSet) -> PointSet:
    return PointSet(pm.Y, image_mask(pm, A.mask))


@dataclass(frozen=True)
class PartialMapNet:
    ds: DirectedSet
    maps: tuple

    def __post_init__(self):
        maps = tuple(self.maps)
        object.__setattr__(self, "maps", maps)
        problems = []
        if len(maps) != self.ds.n:
            problems.append(f"totality: net has {len(maps)} maps for {self.ds.n} indices")
        if maps and any(m.X != maps[0].X or m.Y != maps[0].Y for m in maps):
            problems.append("shared spaces: maps of the net use different X or Y")
        if problems:
            raise InvariantViolation(problems)

    def __getitem__(self, i: int) -> PartialMap:
        return self.maps[i]

    def __len__(self):
        return len(self.maps)

    def __iter__(self):
        return iter(self.maps)


def _grid(pm: PartialMap, eps_grid):
    if eps_grid is not None:
        return eps_grid
    return eps_representatives(distance_spectrum([pm.X, pm.Y]))


def _pairs_ok(pm: PartialMap, pts: int, delta: Fraction, eps: Fraction) -> bool:
    X, Y, t = pm.X, pm.Y, pm.table
    idx = list(iter_bits(pts))
    for a in idx:
        for b in idx:
            if X.dist[a][b] < delta and not Y.dist[t[a]][t[b]] < eps:
                return False
    return True


def is_strongly_uniformly_continuous(
    pm: PartialMap, born: Bornology, eps_grid: Sequence[Fraction] | None = None
) -> bool:
    """For every member ``B`` and ``eps`` some ``delta`` works on pairs of ``D & B^delta``.

    The condition only gets harder as ``B`` grows, so finite unions of base
    members cover every member.
    """
    D = pm.domain_mask
    deltas = delta_candidates(pm.X)
    return all(
        any(_pairs_ok(pm, D & pm.X.enlarge(B, delta), delta, eps) for delta in deltas)
        for B in born.unions()
        for eps in _grid(pm, eps_grid)
    )


def is_uniformly_continuous_rel(
    pm: PartialMap, born: Bornology, eps_grid: Sequence[Fraction] | None = None
) -> bool:
    D = pm.domain_mask
    deltas = delta_candidates(pm.X)
    return all(
        any(_pairs_ok(pm, D & B, delta, eps) for delta in deltas)
        for B in born.unions()
        for eps in _grid(pm, eps_grid)
    )


def is_continuous(pm: PartialMap, eps_grid: Sequence[Fraction] | None = None) -> bool:
    X, Y, t = pm.X, pm.Y, pm.table
    D = list(iter_bits(pm.domain_mask))
    deltas = delta_candidates(X)
    for x in D:
        for eps in _grid(pm, eps_grid):
            if not any(
                all(Y.dist[t[x]][t[z]] < eps for z in D if X.dist[x][z] < delta)
                for delta in deltas
            ):
                return False
    return True
