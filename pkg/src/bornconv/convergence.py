"""Decidable convergence predicates for nets of sets and of partial maps.

Every predicate has the shape "for every bornology member B and every
eps > 0, the set of indices where some inclusion holds is large", where
"large" means in the dual filter of an ideal (ideal forms) or containing a
tail (classical forms). Two reductions make this finite:

* eps ranges over one representative per interval between consecutive
  distance values (see :func:`bornconv.metric.eps_representatives`);
* B ranges over the base of the bornology. Each index set below is an
  intersection over points of B, so a union of base members yields the
  intersection of their index sets, and a subset of a member yields a
  superset of its index set; filters and tail-containment are stable under
  both operations.

Empty-set conventions: ``inf`` over nothing is ``+inf`` and ``sup`` over
nothing is ``0``.
"""
from __future__ import annotations

import operator
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Callable, Hashable, Sequence

from .bornology import Bornology, delta_candidates, product_bornology
from .errors import DegenerateTrace, InstanceTooLarge, InvariantViolation, UnknownMode
from .metric import (
    INF,
    FiniteMetricSpace,
    PointSet,
    box_product,
    distance_spectrum,
    eps_representatives,
    excess_mask,
    format_rational,
    iter_bits,
    iter_submasks,
)
from .order import DirectedSet, Ideal, cofinal_subsets, ideal_limit_failure, in_filter, trace_ideal
from .partial_maps import PartialMap, PartialMapNet, image_mask

NAIVE_MAX_MEMBER = 10


@dataclass(frozen=True)
class Witness:
    """Where a predicate failed.

    ``member`` is the bornology member (labels), ``gammas`` the index set that
    was not large enough. Pointwise failures set ``point`` instead of
    ``member``; ``eps`` is ``None`` when the failure is ``x not in D``.
    """

    eps: Fraction | None
    gammas: tuple
    member: tuple | None = None
    point: Hashable = None
    note: str = ""

    def to_json(self) -> dict:
        out = {
            "eps": None if self.eps is None else format_rational(self.eps),
            "gammas": list(self.gammas),
        }
        if self.member is not None:
            out["member"] = list(self.member)
        if self.point is not None:
            out["point"] = self.point
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class ConvergenceVerdict:
    holds: bool
    failing_witness: Witness | None = None
    thresholds_used: tuple = ()
    degenerate: tuple = ()

    def __post_init__(self):
        if self.holds == (self.failing_witness is not None):
            raise InvariantViolation("verdict: witness present iff the predicate fails")

    def __bool__(self):
        return self.holds

    def to_json(self) -> dict:
        out = {
            "holds": self.holds,
            "failing_witness": self.failing_witness and self.failing_witness.to_json(),
            "thresholds_used": [format_rational(t) for t in self.thresholds_used],
        }
        if self.degenerate:
            out["degenerate_traces"] = [
                {"point": x, "gammas": list(g)} for x, g in self.degenerate
            ]
        return out


def both(a: ConvergenceVerdict, b: ConvergenceVerdict) -> ConvergenceVerdict:
    thresholds = tuple(sorted(set(a.thresholds_used) | set(b.thresholds_used)))
    first_fail = a if not a.holds else b
    return ConvergenceVerdict(
        a.holds and b.holds,
        None if a.holds and b.holds else first_fail.failing_witness,
        thresholds,
        a.degenerate + b.degenerate,
    )


@dataclass(frozen=True)
class Instance:
    """Everything a map-convergence question needs."""

    X: FiniteMetricSpace
    Y: FiniteMetricSpace
    ds: DirectedSet
    ideal: Ideal
    bornology: Bornology
    net: PartialMapNet
    limit: PartialMap

    def __post_init__(self):
        problems = []
        if self.net.ds != self.ds:
            problems.append("consistency: net is indexed by another directed set")
        if self.ideal.ds != self.ds or self.ideal.ground != self.ds.full:
            problems.append("consistency: ideal lives on another index set")
        if self.bornology.space != self.X:
            problems.append("consistency: bornology lives on another space")
        for pm in (self.limit, *self.net.maps):
            if pm.X != self.X or pm.Y != self.Y:
                problems.append("consistency: a partial map is not X -> Y")
                break
        if problems:
            raise InvariantViolation(problems)

    @cached_property
    def XY(self) -> FiniteMetricSpace:
        return box_product(self.X, self.Y)

    @cached_property
    def thresholds(self) -> tuple:
        return tuple(eps_representatives(distance_spectrum([self.X, self.Y, self.XY])))

    def domains(self) -> list[PointSet]:
        return [pm.domain for pm in self.net]

    def with_ideal(self, ideal: Ideal) -> "Instance":
        return replace(self, ideal=ideal)

    def with_maps(self, maps: Sequence[PartialMap]) -> "Instance":
        return replace(self, net=PartialMapNet(self.ds, tuple(maps)))


def _run(
    ds: DirectedSet,
    space: FiniteMetricSpace,
    members: Sequence[int],
    grid: Sequence[Fraction],
    index_set: Callable[[int, Fraction], int],
    large: Callable[[int], bool],
) -> ConvergenceVerdict:
    for B in members:
        for eps in grid:
            g = index_set(B, eps)
            if not large(g):
                w = Witness(eps, tuple(ds.labels_of(g)), tuple(space.labels_of(B)))
                return ConvergenceVerdict(False, w, tuple(grid))
    return ConvergenceVerdict(True, None, tuple(grid))


def _ideal_large(ideal: Ideal):
    return lambda g: in_filter(ideal, g)


# ---------------------------------------------------------------- set nets


def _set_index_set(space, sets, D, lower):
    def index_set(B, eps):
        g = 0
        if lower:
            target = D & B
            for k, Dk in enumerate(sets):
                if target & ~space.enlarge(Dk, eps) == 0:
                    g |= 1 << k
        else:
            big = space.enlarge(D, eps)
            for k, Dk in enumerate(sets):
                if Dk & B & ~big == 0:
                    g |= 1 << k
        return g

    return index_set


def _set_args(sets_net, D, born, eps_grid):
    space = born.space
    masks = [s.mask for s in sets_net]
    if not D:
        raise ValueError("the limit set must be nonempty")
    grid = eps_representatives(space.spectrum) if eps_grid is None else eps_grid
    return space, masks, D.mask, grid


def lower_set_ideal_conv(
    sets_net: Sequence[PointSet],
    D: PointSet,
    born: Bornology,
    ideal: Ideal,
    eps_grid: Sequence[Fraction] | None = None,
) -> ConvergenceVerdict:
    """``{g : D & B <= D_g^eps}`` is in the dual filter for every member and eps."""
    space, masks, d, grid = _set_args(sets_net, D, born, eps_grid)
    return _run(
        ideal.ds, space, born.base, grid,
        _set_index_set(space, masks, d, lower=True), _ideal_large(ideal),
    )


def upper_set_ideal_conv(
    sets_net: Sequence[PointSet],
    D: PointSet,
    born: Bornology,
    ideal: Ideal,
    eps_grid: Sequence[Fraction] | None = None,
) -> ConvergenceVerdict:
    """``{g : D_g & B <= D^eps}`` is in the dual filter for every member and eps."""
    space, masks, d, grid = _set_args(sets_net, D, born, eps_grid)
    return _run(
        ideal.ds, space, born.base, grid,
        _set_index_set(space, masks, d, lower=False), _ideal_large(ideal),
    )


def classical_set_conv(
    sets_net: Sequence[PointSet],
    D: PointSet,
    born: Bornology,
    ds: DirectedSet,
    side: str,
    eps_grid: Sequence[Fraction] | None = None,
) -> ConvergenceVerdict:
    """Eventual bornological convergence, decided with excesses and tails.

    Deliberately shares no code with the ideal checkers beyond the
    enumeration, so the two can be compared.
    """
    space, masks, d, grid = _set_args(sets_net, D, born, eps_grid)
    if side not in ("lower", "upper"):
        raise ValueError(f"side must be 'lower' or 'upper', not {side!r}")

    def ok(k, B, eps):
        if side == "lower":
            return excess_mask(space, d & B, masks[k]) < eps
        return excess_mask(space, masks[k] & B, d) < eps

    for B in born.base:
        for eps in grid:
            if not any(
                all(ok(k, B, eps) for k in iter_bits(ds.tails[n])) for n in range(ds.n)
            ):
                good = sum(1 << k for k in range(ds.n) if ok(k, B, eps))
                w = Witness(eps, tuple(ds.labels_of(good)), tuple(space.labels_of(B)))
                return ConvergenceVerdict(False, w, tuple(grid))
    return ConvergenceVerdict(True, None, tuple(grid))


# ---------------------------------------------------------------- map nets


def _members_for_naive(inst: Instance) -> tuple:
    for B in inst.bornology.base:
        if bin(B).count("1") > NAIVE_MAX_MEMBER:
            raise InstanceTooLarge(
                f"bornology member with more than {NAIVE_MAX_MEMBER} points "
                "is too large for subset enumeration"
            )
    return inst.bornology.base


def _naive_index_set(inst: Instance, minus: bool):
    """Indices where every nonempty ``B1 <= B`` satisfies the image inclusion."""
    X, Y, u = inst.X, inst.Y, inst.limit
    D = u.domain_mask
    maps = inst.net.maps
    doms = [pm.domain_mask for pm in maps]

    def index_set(B, eps):
        g = inst.ds.full
        for B1 in iter_submasks(B):
            if not B1:
                continue
            around = X.enlarge(B1, eps)
            if minus:
                lhs = image_mask(u, D & B1)
                for k in iter_bits(g):
                    rhs = Y.enlarge(image_mask(maps[k], doms[k] & around), eps)
                    if lhs & ~rhs:
                        g &= ~(1 << k)
            else:
                rhs = Y.enlarge(image_mask(u, D & around), eps)
                for k in iter_bits(g):
                    if image_mask(maps[k], doms[k] & B1) & ~rhs:
                        g &= ~(1 << k)
            if not g:
                break
        return g

    return index_set


def _supinf_index_set(inst: Instance, minus: bool, strict: bool):
    X, Y = inst.X, inst.Y
    u = inst.limit.table
    D = inst.limit.domain_mask
    maps = inst.net.maps
    less = operator.lt if strict else operator.le

    def index_set(B, eps):
        balls = X.balls(eps)
        g = 0
        for k, pm in enumerate(maps):
            uk, Dk = pm.table, pm.domain_mask
            worst = 0
            if minus:
                for z in iter_bits(D & B):
                    row = Y.dist[u[z]]
                    best = min((row[uk[x]] for x in iter_bits(balls[z] & Dk)), default=INF)
                    worst = max(worst, best)
            else:
                for z in iter_bits(Dk & B):
                    row = Y.dist[uk[z]]
                    best = min((row[u[x]] for x in iter_bits(balls[z] & D)), default=INF)
                    worst = max(worst, best)
            if less(worst, eps):
                g |= 1 << k
        return g

    return index_set


def _grid(inst: Instance, eps_grid):
    return inst.thresholds if eps_grid is None else tuple(eps_grid)


def p_ideal_minus_naive(inst: Instance, eps_grid=None) -> ConvergenceVerdict:
    """Lower map convergence, quantifying literally over every nonempty ``B1 <= B``."""
    return _run(
        inst.ds, inst.X, _members_for_naive(inst), _grid(inst, eps_grid),
        _naive_index_set(inst, minus=True), _ideal_large(inst.ideal),
    )


def p_ideal_plus_naive(inst: Instance, eps_grid=None) -> ConvergenceVerdict:
    """Upper map convergence, quantifying literally over every nonempty ``B1 <= B``."""
    return _run(
        inst.ds, inst.X, _members_for_naive(inst), _grid(inst, eps_grid),
        _naive_index_set(inst, minus=False), _ideal_large(inst.ideal),
    )


def p_ideal_minus_supinf(inst: Instance, eps_grid=None, *, strict: bool = True) -> ConvergenceVerdict:
    """``sup_{z in D&B} inf_{x in B(z,eps) & D_g} mu(u(z), u_g(x)) < eps`` on a large index set.

    ``strict=False`` swaps the final ``<`` for ``<=``; it exists only so the
    certification harness can prove it notices a broken checker.
    """
    return _run(
        inst.ds, inst.X, inst.bornology.base, _grid(inst, eps_grid),
        _supinf_index_set(inst, minus=True, strict=strict), _ideal_large(inst.ideal),
    )


def p_ideal_plus_supinf(inst: Instance, eps_grid=None, *, strict: bool = True) -> ConvergenceVerdict:
    """``sup_{z in D_g&B} inf_{x in B(z,eps) & D} mu(u(x), u_g(z)) < eps`` on a large index set."""
    return _run(
        inst.ds, inst.X, inst.bornology.base, _grid(inst, eps_grid),
        _supinf_index_set(inst, minus=False, strict=strict), _ideal_large(inst.ideal),
    )


def p_ideal_conv(inst: Instance, eps_grid=None) -> ConvergenceVerdict:
    return both(p_ideal_minus_naive(inst, eps_grid), p_ideal_plus_naive(inst, eps_grid))


def classical_map_conv(inst: Instance, side: str, eps_grid=None) -> ConvergenceVerdict:
    """Eventual (tail-based) map convergence; ``side`` is minus, plus or both."""
    if side == "both":
        return both(
            classical_map_conv(inst, "minus", eps_grid),
            classical_map_conv(inst, "plus", eps_grid),
        )
    if side not in ("minus", "plus"):
        raise ValueError(f"side must be minus, plus or both, not {side!r}")
    return _run(
        inst.ds, inst.X, _members_for_naive(inst), _grid(inst, eps_grid),
        _naive_index_set(inst, minus=side == "minus"), inst.ds.eventually,
    )


def graph_ideal_conv(inst: Instance, side: str, eps_grid=None) -> ConvergenceVerdict:
    """Bornological convergence of graphs in ``X x Y`` under the rectangle bornology."""
    XY = inst.XY
    born = product_bornology(inst.bornology, inst.Y)
    graphs = [PointSet(XY, pm.graph_mask()) for pm in inst.net]
    limit = PointSet(XY, inst.limit.graph_mask())
    grid = _grid(inst, eps_grid)
    if side == "lower":
        return lower_set_ideal_conv(graphs, limit, born, inst.ideal, grid)
    if side == "upper":
        return upper_set_ideal_conv(graphs, limit, born, inst.ideal, grid)
    raise ValueError(f"side must be 'lower' or 'upper', not {side!r}")


def pointwise_ideal_conv(inst: Instance, eps_grid=None) -> ConvergenceVerdict:
    """Pointwise ideal convergence along every cofinal set of indices whose domains contain x.

    Along ``G0`` the ideal is replaced by its trace on ``G0``. Pairs whose
    trace is degenerate are listed in ``degenerate`` and otherwise ignored.
    """
    X, Y, ds = inst.X, inst.Y, inst.ds
    grid = eps_representatives(Y.spectrum) if eps_grid is None else tuple(eps_grid)
    D = inst.limit.domain_mask
    degenerate = []
    failure = None
    for x in range(X.n):
        carrying = sum(1 << k for k, pm in enumerate(inst.net) if pm.table[x] is not None)
        for g0 in cofinal_subsets(ds, within=carrying):
            try:
                tr = trace_ideal(inst.ideal, g0)
            except DegenerateTrace:
                degenerate.append((X.labels[x], tuple(ds.labels_of(g0))))
                continue
            if failure is not None:
                continue
            if not D >> x & 1:
                failure = Witness(None, tuple(ds.labels_of(g0)), point=X.labels[x],
                                  note="point outside the limit domain")
                continue
            values = [Y.labels[pm.table[x]] if pm.table[x] is not None else None for pm in inst.net]
            eps = ideal_limit_failure(values, Y.labels[inst.limit.table[x]], tr, Y, grid)
            if eps is not None:
                failure = Witness(eps, tuple(ds.labels_of(g0)), point=X.labels[x],
                                  note="values do not ideal-converge to u(x)")
    return ConvergenceVerdict(failure is None, failure, tuple(grid), tuple(degenerate))


def sup_sup_condition(inst: Instance, eps_grid=None) -> ConvergenceVerdict:
    """For every member and eps some ``zeta`` makes
    ``sup_{z in D_g&B} sup_{x in B(z,zeta) & D} mu(u(x), u_g(z)) < eps`` hold on a large index set.
    """
    X, Y, ds = inst.X, inst.Y, inst.ds
    u = inst.limit.table
    D = inst.limit.domain_mask
    maps = inst.net.maps
    zetas = delta_candidates(X)

    def index_set_for(B, eps, zeta):
        balls = X.balls(zeta)
        g = 0
        for k, pm in enumerate(maps):
            uk = pm.table
            worst = 0
            for z in iter_bits(pm.domain_mask & B):
                row = Y.dist[uk[z]]
                for x in iter_bits(balls[z] & D):
                    worst = max(worst, row[u[x]])
            if worst < eps:
                g |= 1 << k
        return g

    def index_set(B, eps):
        # report the index set of the best candidate (smallest zeta)
        best = None
        for zeta in zetas:
            g = index_set_for(B, eps, zeta)
            if in_filter(inst.ideal, g):
                return g
            best = g if best is None else best
        return best

    return _run(ds, X, inst.bornology.base, _grid(inst, eps_grid), index_set, _ideal_large(inst.ideal))


# ---------------------------------------------------------------- mode table


def _lower_set(inst, eps_grid=None):
    return lower_set_ideal_conv(inst.domains(), inst.limit.domain, inst.bornology, inst.ideal,
                                _grid(inst, eps_grid))


def _upper_set(inst, eps_grid=None):
    return upper_set_ideal_conv(inst.domains(), inst.limit.domain, inst.bornology, inst.ideal,
                                _grid(inst, eps_grid))


def _classical_set(side):
    def run(inst, eps_grid=None):
        return classical_set_conv(inst.domains(), inst.limit.domain, inst.bornology, inst.ds,
                                  side, _grid(inst, eps_grid))
    return run


MODES: dict[str, Callable[..., ConvergenceVerdict]] = {
    "lower-set": _lower_set,
    "upper-set": _upper_set,
    "p-minus": p_ideal_minus_naive,
    "p-plus": p_ideal_plus_naive,
    "p-minus-supinf": p_ideal_minus_supinf,
    "p-plus-supinf": p_ideal_plus_supinf,
    "p": p_ideal_conv,
    "graph-lower": lambda inst, eps_grid=None: graph_ideal_conv(inst, "lower", eps_grid),
    "graph-upper": lambda inst, eps_grid=None: graph_ideal_conv(inst, "upper", eps_grid),
    "pointwise": pointwise_ideal_conv,
    "sup-sup": sup_sup_condition,
    "classical-lower": _classical_set("lower"),
    "classical-upper": _classical_set("upper"),
    "classical-p-minus": lambda inst, eps_grid=None: classical_map_conv(inst, "minus", eps_grid),
    "classical-p-plus": lambda inst, eps_grid=None: classical_map_conv(inst, "plus", eps_grid),
    "classical-p": lambda inst, eps_grid=None: classical_map_conv(inst, "both", eps_grid),
}

# modes whose verdict depends on the instance's ideal (the classical ones use tails)
IDEAL_MODES = tuple(m for m in MODES if not m.startswith("classical"))


def check(inst: Instance, mode: str, eps_grid=None) -> ConvergenceVerdict:
    try:
        fn = MODES[mode]
    except KeyError:
        raise UnknownMode(f"unknown mode {mode!r}; choose from {sorted(MODES)}") from None
    return fn(inst, eps_grid)
