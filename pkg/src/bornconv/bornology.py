"""Bornologies on finite metric spaces, kept as a generating base.

Membership is answered from the base: a nonempty set belongs to the
bornology iff it sits inside a finite union of base members. The full
family is only materialized on demand (``members``), which is affordable for
spaces of at most ``MAX_MATERIALIZE`` points.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .errors import InstanceTooLarge, InvariantViolation, NotACover
from .metric import FiniteMetricSpace, PointSet, box_product, iter_bits, iter_submasks

MAX_MATERIALIZE = 12


def _as_mask(space: FiniteMetricSpace, obj) -> int:
    if isinstance(obj, PointSet):
        if obj.space != space:
            raise ValueError("point set belongs to another space")
        return obj.mask
    return space.mask(obj)


class Bornology:
    def __init__(self, space: FiniteMetricSpace, base: Iterable[int]):
        self.space = space
        self.base = tuple(dict.fromkeys(base))
        problems = []
        if any(b == 0 for b in self.base):
            problems.append("nonempty members: the base contains the empty set")
        if any(b & ~space.full for b in self.base):
            problems.append("ground: a base member is not a subset of the space")
        if problems:
            raise InvariantViolation(problems)
        span = 0
        for b in self.base:
            span |= b
        if span != space.full:
            missing = space.labels_of(space.full & ~span)
            raise NotACover(f"cover: points {missing} lie in no base member")
        self.span = span
        self._members = None

    def __repr__(self):
        return f"Bornology(base={[self.space.labels_of(b) for b in self.base]!r})"

    def __eq__(self, other):
        if not isinstance(other, Bornology):
            return NotImplemented
        return self.space == other.space and self.members == other.members

    def __hash__(self):
        return hash((self.space, self.span))

    def contains(self, mask: int) -> bool:
        # unions of base members are closed under union, so the largest one decides
        return mask != 0 and mask & ~self.span == 0

    def __contains__(self, item) -> bool:
        return self.contains(_as_mask(self.space, item))

    def unions(self) -> frozenset:
        """Every finite union of base members."""
        out = {0}
        for b in self.base:
            out |= {u | b for u in out}
        out.discard(0)
        return frozenset(out)

    @property
    def members(self) -> frozenset:
        if self._members is None:
            if self.space.n > MAX_MATERIALIZE:
                raise InstanceTooLarge(
                    f"refusing to materialize 2**{self.space.n} subsets"
                )
            fam = set()
            for u in self.unions():
                fam.update(iter_submasks(u))
            fam.discard(0)
            self._members = frozenset(fam)
        return self._members


def bornology_from_base(space: FiniteMetricSpace, base: Iterable) -> Bornology:
    """Smallest bornology containing ``base`` (PointSets or label collections)."""
    return Bornology(space, [_as_mask(space, b) for b in base])


def trivial_bornology(space: FiniteMetricSpace) -> Bornology:
    """``P0(X)``, all nonempty subsets."""
    return Bornology(space, [space.full])


# On a finite space the finite, bounded, totally bounded and relatively
# compact bornologies all coincide with P0(X).
finite_subsets = bounded_subsets = totally_bounded_subsets = relatively_compact_subsets = trivial_bornology


def delta_candidates(space: FiniteMetricSpace) -> list[Fraction]:
    """Half the smallest positive distance, then every spectrum value."""
    spec = list(space.spectrum)
    if not spec:
        return [Fraction(1)]
    return [spec[0] / 2] + spec


def is_stable_under_small_enlargement(born: Bornology) -> bool:
    """Every member ``B`` has some ``delta > 0`` with ``B^delta`` a member."""
    space = born.space
    cands = delta_candidates(space)
    try:
        members = born.members
    except InstanceTooLarge:
        members = born.unions()
    return all(
        any(born.contains(space.enlarge(m, delta)) for delta in cands) for m in members
    )


def rectangle(X: FiniteMetricSpace, Y: FiniteMetricSpace, x_mask: int) -> int:
    """Mask of ``B x Y`` inside ``box_product(X, Y)``."""
    row = (1 << Y.n) - 1
    out = 0
    for i in iter_bits(x_mask):
        out |= row << (i * Y.n)
    return out


def product_bornology(born: Bornology, Y: FiniteMetricSpace) -> Bornology:
    """Bornology on ``X x Y`` generated by the rectangles ``B x Y``, ``B`` in the base."""
    XY = box_product(born.space, Y)
    return Bornology(XY, [rectangle(born.space, Y, b) for b in born.base])
