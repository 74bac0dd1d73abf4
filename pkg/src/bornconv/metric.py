"""Finite metric spaces with exact rational distances.

Subsets of a space are bitmasks over the point indices; :class:`PointSet`
wraps a mask together with its space for the public API. Every comparison
against a radius is strict, so ``enlargement(A, eps)`` is ``{x : d(x, A) < eps}``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Hashable, Iterable, Iterator, Sequence

from .errors import EmptySet, InvariantViolation, NonPositiveEpsilon

INF = math.inf

_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` or ``"n"``; ints and Fractions pass through."""
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise ValueError(f"not a rational: {text!r}")
    return Fraction(text)


def format_rational(q: Fraction) -> str:
    return str(Fraction(q))


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def iter_submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` including 0 and ``mask`` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def metric_violations(labels: Sequence, dist: Sequence[Sequence]) -> list[str]:
    n = len(labels)
    out = []
    if len(set(labels)) != n:
        out.append("distinct labels: duplicate point labels")
    if n == 0:
        out.append("nonempty: a metric space needs at least one point")
    if len(dist) != n or any(len(row) != n for row in dist):
        out.append(f"square: distance matrix must be {n}x{n}")
        return out
    for i in range(n):
        if dist[i][i] != 0:
            out.append(f"zero diagonal: d({labels[i]},{labels[i]}) = {dist[i][i]}")
    for i, j in combinations(range(n), 2):
        if dist[i][j] <= 0 or dist[j][i] <= 0:
            out.append(f"positivity: d({labels[i]},{labels[j]}) must be > 0")
        if dist[i][j] != dist[j][i]:
            out.append(
                f"symmetry: d({labels[i]},{labels[j]}) = {dist[i][j]} "
                f"but d({labels[j]},{labels[i]}) = {dist[j][i]}"
            )
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if dist[i][k] > dist[i][j] + dist[j][k]:
                    out.append(
                        f"triangle inequality fails at "
                        f"({labels[i]},{labels[j]},{labels[k]})"
                    )
    return out


class FiniteMetricSpace:
    """Labelled points plus a validated matrix of exact distances.

    Instances are immutable. Balls ``B(x, eps)`` are memoized per radius since
    the convergence checkers query the same handful of radii repeatedly.
    """

    def __init__(self, labels: Iterable[Hashable], dist: Sequence[Sequence]):
        self.labels = tuple(labels)
        try:
            self.dist = tuple(tuple(parse_rational(v) for v in row) for row in dist)
        except ValueError as exc:
            raise InvariantViolation(f"rational entries: {exc}") from None
        problems = metric_violations(self.labels, self.dist)
        if problems:
            raise InvariantViolation(problems)
        self.n = len(self.labels)
        self.full = (1 << self.n) - 1
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        self._hash = hash((self.labels, self.dist))
        self._balls: dict[Fraction, tuple[int, ...]] = {}
        self._spectrum: tuple[Fraction, ...] | None = None

    def __repr__(self):
        return f"FiniteMetricSpace({list(self.labels)!r})"

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FiniteMetricSpace):
            return NotImplemented
        return self.labels == other.labels and self.dist == other.dist

    def __hash__(self):
        return self._hash

    def index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"{label!r} is not a point of {self!r}") from None

    def d(self, x, y) -> Fraction:
        return self.dist[self.index(x)][self.index(y)]

    def mask(self, labels: Iterable) -> int:
        m = 0
        for lab in labels:
            m |= 1 << self.index(lab)
        return m

    def labels_of(self, mask: int) -> list:
        return [self.labels[i] for i in iter_bits(mask)]

    def points(self, labels: Iterable = ()) -> "PointSet":
        return PointSet(self, self.mask(labels))

    def balls(self, eps: Fraction) -> tuple[int, ...]:
        """Masks of the open balls ``B(x, eps)`` for every point ``x``."""
        cached = self._balls.get(eps)
        if cached is None:
            cached = tuple(
                sum(1 << j for j in range(self.n) if row[j] < eps) for row in self.dist
            )
            self._balls[eps] = cached
        return cached

    def enlarge(self, mask: int, eps: Fraction) -> int:
        balls = self.balls(eps)
        out = 0
        for i in iter_bits(mask):
            out |= balls[i]
        return out

    @property
    def spectrum(self) -> tuple[Fraction, ...]:
        if self._spectrum is None:
            self._spectrum = tuple(
                sorted({self.dist[i][j] for i, j in combinations(range(self.n), 2)})
            )
        return self._spectrum


@dataclass(frozen=True)
class PointSet:
    space: FiniteMetricSpace
    mask: int = 0

    def __post_init__(self):
        if self.mask < 0 or self.mask & ~self.space.full:
            raise InvariantViolation("membership: indices outside the space")

    @classmethod
    def of(cls, space: FiniteMetricSpace, labels: Iterable) -> "PointSet":
        return cls(space, space.mask(labels))

    @property
    def labels(self) -> list:
        return self.space.labels_of(self.mask)

    def __iter__(self):
        return iter(self.labels)

    def __len__(self):
        return bin(self.mask).count("1")

    def __bool__(self):
        return self.mask != 0

    def __contains__(self, label):
        return bool(self.mask >> self.space.index(label) & 1)

    def _check(self, other):
        if other.space != self.space:
            raise ValueError("point sets live in different spaces")

    def __or__(self, other):
        self._check(other)
        return PointSet(self.space, self.mask | other.mask)

    def __and__(self, other):
        self._check(other)
        return PointSet(self.space, self.mask & other.mask)

    def __le__(self, other):
        self._check(other)
        return self.mask & ~other.mask == 0

    def __repr__(self):
        return f"PointSet({self.labels!r})"


def _gap_mask(space: FiniteMetricSpace, i: int, mask: int):
    row = space.dist[i]
    return min((row[j] for j in iter_bits(mask)), default=INF)


def gap(space: FiniteMetricSpace, x, A: PointSet) -> Fraction:
    """Distance from the point ``x`` to the nonempty set ``A``."""
    if not A:
        raise EmptySet("gap to the empty set is undefined")
    return _gap_mask(space, space.index(x), A.mask)


def enlargement(space: FiniteMetricSpace, A: PointSet, eps) -> PointSet:
    if not A:
        raise EmptySet("enlargement of the empty set")
    eps = Fraction(eps)
    if eps <= 0:
        raise NonPositiveEpsilon(f"eps must be positive, got {eps}")
    return PointSet(space, space.enlarge(A.mask, eps))


def excess_mask(space: FiniteMetricSpace, a_mask: int, c_mask: int):
    if not a_mask:
        return Fraction(0)
    if not c_mask:
        return INF
    return max(_gap_mask(space, i, c_mask) for i in iter_bits(a_mask))


def excess(space: FiniteMetricSpace, A: PointSet, C: PointSet):
    """``sup_{a in A} d(a, C)``; 0 for empty ``A``, ``inf`` for empty ``C``."""
    return excess_mask(space, A.mask, C.mask)


@lru_cache(maxsize=256)
def box_product(X: FiniteMetricSpace, Y: FiniteMetricSpace) -> FiniteMetricSpace:
    """``X x Y`` under the max metric; point ``(x, y)`` has index ``i*|Y| + j``."""
    labels = [(x, y) for x in X.labels for y in Y.labels]
    m = Y.n
    dist = [
        [
            max(X.dist[p // m][q // m], Y.dist[p % m][q % m])
            for q in range(len(labels))
        ]
        for p in range(len(labels))
    ]
    return FiniteMetricSpace(labels, dist)


def distance_spectrum(spaces: Sequence[FiniteMetricSpace]) -> list[Fraction]:
    if not spaces:
        raise ValueError("need at least one space")
    values = set()
    for s in spaces:
        values.update(s.spectrum)
    return sorted(values)


def eps_representatives(spectrum: Sequence[Fraction]) -> list[Fraction]:
    """One radius per interval ``(t_i, t_{i+1}]`` plus one above the maximum.

    Every strict-inequality predicate in this package is constant on those
    intervals, so evaluating at these points decides "for all eps > 0".
    """
    spectrum = sorted(set(spectrum))
    if not spectrum:
        return [Fraction(1)]
    return list(spectrum) + [spectrum[-1] + 1]


def refine_grid(representatives: Sequence[Fraction], factor: int = 10) -> list[Fraction]:
    """Split each interval ``(t_{i-1}, t_i]`` (with ``t_0 = 0``) into ``factor`` steps."""
    out = []
    prev = Fraction(0)
    for t in sorted(representatives):
        step = (t - prev) / factor
        out.extend(prev + step * k for k in range(1, factor + 1))
        prev = t
    return out
