"""Finite directed sets, ideals on them and their dual filters.

Subsets of the index set are bitmasks over element positions. Ideals and
filters are stored as explicit families of masks so every invariant can be
checked directly; the index set is capped at ``MAX_INDEX`` elements to keep
``2**|index set|`` enumeration cheap.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Iterator, Sequence

from .errors import (
    DegenerateTrace,
    InstanceTooLarge,
    InvariantViolation,
    TrivialIdeal,
    UnknownIndex,
)
from .metric import FiniteMetricSpace, eps_representatives, iter_bits, iter_submasks

MAX_INDEX = 12


def directed_violations(elements: Sequence, geq: Sequence[Sequence[bool]]) -> list[str]:
    n = len(elements)
    out = []
    if n == 0:
        out.append("nonempty: a directed set needs at least one element")
    if len(set(elements)) != n:
        out.append("distinct labels: duplicate index labels")
    if len(geq) != n or any(len(row) != n for row in geq):
        out.append(f"square: relation matrix must be {n}x{n}")
        return out
    for i in range(n):
        if not geq[i][i]:
            out.append(f"reflexivity: {elements[i]} >= {elements[i]} missing")
    for i in range(n):
        for j in range(n):
            if not geq[i][j]:
                continue
            for k in range(n):
                if geq[j][k] and not geq[i][k]:
                    out.append(
                        f"transitivity: {elements[i]} >= {elements[j]} >= "
                        f"{elements[k]} but not {elements[i]} >= {elements[k]}"
                    )
    for i in range(n):
        for j in range(i + 1, n):
            if not any(geq[p][i] and geq[p][j] for p in range(n)):
                out.append(f"directedness: {elements[i]} and {elements[j]} have no upper bound")
    return out


class DirectedSet:
    """A finite preorder in which every pair has an upper bound.

    ``geq[i][j]`` is true when ``elements[i] >= elements[j]``. Antisymmetry is
    not required.
    """

    def __init__(self, elements: Iterable[Hashable], geq: Sequence[Sequence[bool]]):
        self.elements = tuple(elements)
        if len(self.elements) > MAX_INDEX:
            raise InstanceTooLarge(
                f"index set has {len(self.elements)} elements, cap is {MAX_INDEX}"
            )
        self.geq = tuple(tuple(bool(v) for v in row) for row in geq)
        problems = directed_violations(self.elements, self.geq)
        if problems:
            raise InvariantViolation(problems)
        self.n = len(self.elements)
        self.full = (1 << self.n) - 1
        self._index = {e: i for i, e in enumerate(self.elements)}
        # tails[i] = M_i = {k : k >= i}
        self.tails = tuple(
            sum(1 << k for k in range(self.n) if self.geq[k][i]) for i in range(self.n)
        )
        self._hash = hash((self.elements, self.geq))

    @classmethod
    def linear(cls, elements: Iterable[Hashable]) -> "DirectedSet":
        """Chain ordered by position: later elements are larger."""
        elements = list(elements)
        n = len(elements)
        return cls(elements, [[i >= j for j in range(n)] for i in range(n)])

    @classmethod
    def from_pairs(cls, elements, pairs) -> "DirectedSet":
        """Reflexive-transitive closure of ``(big, small)`` pairs."""
        elements = list(elements)
        idx = {e: i for i, e in enumerate(elements)}
        n = len(elements)
        geq = [[i == j for j in range(n)] for i in range(n)]
        for big, small in pairs:
            geq[idx[big]][idx[small]] = True
        for k in range(n):
            for i in range(n):
                if geq[i][k]:
                    for j in range(n):
                        if geq[k][j]:
                            geq[i][j] = True
        return cls(elements, geq)

    def __repr__(self):
        return f"DirectedSet({list(self.elements)!r})"

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, DirectedSet):
            return NotImplemented
        return self.elements == other.elements and self.geq == other.geq

    def __hash__(self):
        return self._hash

    def index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownIndex(f"{label!r} is not an element of {self!r}") from None

    def mask(self, labels: Iterable) -> int:
        m = 0
        for lab in labels:
            m |= 1 << self.index(lab)
        return m

    def labels_of(self, mask: int) -> list:
        return [self.elements[i] for i in iter_bits(mask)]

    def is_cofinal(self, mask: int) -> bool:
        return all(self.tails[n] & mask for n in range(self.n))

    def eventually(self, mask: int) -> bool:
        """Some tail ``M_n`` lies inside ``mask``."""
        return any(t & ~mask == 0 for t in self.tails)


def _ideal_violations(members: frozenset[int], ground: int) -> list[str]:
    out = []
    if 0 not in members:
        out.append("contains empty set: the empty set must be a member")
    if any(m & ~ground for m in members):
        out.append("ground: a member is not a subset of the index set")
        return out
    hereditary = True
    for m in members:
        for i in iter_bits(m):
            if m & ~(1 << i) not in members:
                hereditary = False
                break
        if not hereditary:
            out.append("closed under subsets: a subset of a member is missing")
            break
    span = 0
    for m in members:
        span |= m
    if hereditary:
        # hereditary + finite: union-closed iff the union of everything is a member
        union_closed = span in members
    else:
        union_closed = all(a | b in members for a in members for b in members)
    if not union_closed:
        out.append("closed under unions: a union of two members is missing")
    return out


@dataclass(frozen=True)
class Ideal:
    """A nontrivial ideal on ``ground`` (default: the whole index set).

    Nontrivial means the ground set itself is not a member; the family
    ``{empty set}`` is accepted.
    """

    ds: DirectedSet
    members: frozenset
    ground: int = -1
    span: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        ground = self.ds.full if self.ground == -1 else self.ground
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "members", frozenset(self.members))
        problems = _ideal_violations(self.members, ground)
        if problems:
            raise InvariantViolation(problems)
        if ground in self.members:
            raise TrivialIdeal(
                "nontrivial ideal: the whole index set belongs to the ideal"
            )
        span = 0
        for m in self.members:
            span |= m
        object.__setattr__(self, "span", span)

    def __contains__(self, mask: int) -> bool:
        return mask in self.members

    def __len__(self):
        return len(self.members)

    def __repr__(self):
        return f"Ideal(span={self.ds.labels_of(self.span)!r})"

    def maximal_members(self) -> list[int]:
        return [m for m in self.members if not any(m != o and m & ~o == 0 for o in self.members)]


@dataclass(frozen=True)
class Filter:
    ds: DirectedSet
    members: frozenset
    ground: int = -1

    def __post_init__(self):
        ground = self.ds.full if self.ground == -1 else self.ground
        object.__setattr__(self, "ground", ground)
        members = frozenset(self.members)
        object.__setattr__(self, "members", members)
        problems = []
        if not members:
            problems.append("nonempty: a filter has at least one member")
        if 0 in members:
            problems.append("excludes empty set: the empty set is a member")
        if any(m & ~ground for m in members):
            problems.append("ground: a member is not a subset of the index set")
        if any(a & b not in members for a in members for b in members):
            problems.append("closed under intersections: an intersection is missing")
        if any(m | (1 << i) not in members for m in members for i in iter_bits(ground & ~m)):
            problems.append("closed under supersets: a superset is missing")
        if problems:
            raise InvariantViolation(problems)

    def __contains__(self, mask: int) -> bool:
        return mask in self.members


def tail(ds: DirectedSet, n) -> int:
    """``M_n = {k : k >= n}`` as a mask."""
    return ds.tails[ds.index(n)]


def tail_ideal(ds: DirectedSet) -> Ideal:
    """The ideal of sets whose complement contains some tail."""
    members = frozenset(
        a for a in range(ds.full + 1) if any(t & a == 0 for t in ds.tails)
    )
    return Ideal(ds, members)


def ideal_from_generators(ds: DirectedSet, base: Iterable[int], ground: int | None = None) -> Ideal:
    """Smallest ideal containing ``base``; raises :class:`TrivialIdeal` if it would hold ``ground``.

    Finite unions of the generators top out at their overall union, so the
    closure is every subset of that union.
    """
    ground = ds.full if ground is None else ground
    span = 0
    for b in base:
        if b & ~ground:
            raise InvariantViolation("ground: a generator is not a subset of the index set")
        span |= b
    if span == ground:
        raise TrivialIdeal("nontrivial ideal: the generators cover the index set")
    return Ideal(ds, frozenset(iter_submasks(span)), ground)


def dual_filter(ideal: Ideal) -> Filter:
    g = ideal.ground
    return Filter(ideal.ds, frozenset(g & ~m for m in ideal.members), g)


def in_filter(ideal: Ideal, mask: int) -> bool:
    """``mask`` belongs to the filter associated with ``ideal``."""
    return (ideal.ground & ~mask) in ideal.members


def is_D_admissible(ideal: Ideal, ds: DirectedSet | None = None) -> bool:
    ds = ds or ideal.ds
    return all(in_filter(ideal, t & ideal.ground) for t in ds.tails)


def cofinal_subsets(ds: DirectedSet, within: int | None = None) -> Iterator[int]:
    """Masks ``G`` (inside ``within``) such that every ``n`` has some ``m in G`` with ``m >= n``."""
    within = ds.full if within is None else within
    for sub in iter_submasks(within):
        if sub and ds.is_cofinal(sub):
            yield sub


def trace_ideal(ideal: Ideal, g0: int) -> Ideal:
    """``{A & g0 : A in ideal}`` as an ideal on ``g0``.

    Raises :class:`DegenerateTrace` when ``g0`` itself is negligible, since the
    trace would then contain its whole ground set.
    """
    if not g0:
        raise ValueError("trace on the empty set")
    members = frozenset(m & g0 for m in ideal.members)
    if g0 in members:
        raise DegenerateTrace(
            f"{ideal.ds.labels_of(g0)} is contained in a member of the ideal"
        )
    return Ideal(ideal.ds, members, g0)


def ideal_limit_failure(
    net: Sequence,
    y,
    ideal: Ideal,
    space: FiniteMetricSpace,
    eps_grid: Sequence[Fraction] | None = None,
) -> Fraction | None:
    """First radius at which ``{g : d(net[g], y) < eps}`` misses the dual filter.

    ``net`` is indexed by element position; only entries on ``ideal.ground``
    are read. Returns ``None`` when ``y`` is an ideal limit of the net.
    """
    grid = eps_representatives(space.spectrum) if eps_grid is None else eps_grid
    yi = space.index(y)
    dists = {g: space.dist[space.index(net[g])][yi] for g in iter_bits(ideal.ground)}
    for eps in grid:
        close = 0
        for g, dv in dists.items():
            if dv < eps:
                close |= 1 << g
        if not in_filter(ideal, close):
            return eps
    return None


def ideal_limit_point(
    net: Sequence,
    y,
    ideal: Ideal,
    space: FiniteMetricSpace,
    eps_grid: Sequence[Fraction] | None = None,
) -> bool:
    return ideal_limit_failure(net, y, ideal, space, eps_grid) is None
