"""Random instances and certification campaigns.

Each property compares verdicts of independent checkers on one instance.
Hypotheses of a property are evaluated, never assumed: an instance where one
fails is counted as skipped for that property.
"""
from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

from . import convergence as cv
from .bornology import (
    Bornology,
    is_stable_under_small_enlargement,
)
from .errors import InvariantViolation, TrivialIdeal
from .fileformat import instance_to_json, load_instance_doc
from .metric import FiniteMetricSpace, format_rational, iter_bits, refine_grid
from .order import DirectedSet, Ideal, ideal_from_generators, tail_ideal
from .partial_maps import (
    PartialMap,
    PartialMapNet,
    is_continuous,
    is_strongly_uniformly_continuous,
    is_uniformly_continuous_rel,
)

MAX_X, MAX_Y, MAX_GAMMA, MAX_BASE = 8, 6, 12, 8
IDEAL_STRATEGIES = ("i0", "generated", "random", "empty", "mixed")
ORDER_KINDS = ("linear", "tree", "product", "tied")
NET_STYLES = ("exact", "sparse", "tail", "domain", "values", "wild")
DEFAULT_POOL = (Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3))


@dataclass(frozen=True)
class Caps:
    x: int = 5
    y: int = 4
    gamma: int = 6
    base: int = 3

    @classmethod
    def parse(cls, text: str) -> "Caps":
        parts = [int(p) for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError("caps must be |X|,|Y|,|Gamma|,|base|")
        return cls(*parts)


@dataclass(frozen=True)
class CampaignConfig:
    seed: int = 0
    trials: int = 500
    caps: Caps = field(default_factory=Caps)
    distance_pool: tuple = DEFAULT_POOL
    ideal_strategy: str = "mixed"
    order_kinds: tuple = ORDER_KINDS
    min_gamma: int = 1
    theorems: tuple = ()
    mutant: bool = False
    workers: int = 1

    def __post_init__(self):
        problems = []
        c = self.caps
        if not (1 <= c.x <= MAX_X and 1 <= c.y <= MAX_Y and 1 <= c.gamma <= MAX_GAMMA
                and 1 <= c.base <= MAX_BASE):
            problems.append(
                f"caps: need 1<=|X|<={MAX_X}, 1<=|Y|<={MAX_Y}, "
                f"1<=|Gamma|<={MAX_GAMMA}, 1<=|base|<={MAX_BASE}"
            )
        if not 1 <= self.min_gamma <= c.gamma:
            problems.append("min_gamma: must lie in 1..caps.gamma")
        if self.trials < 1:
            problems.append("trials: need at least one trial")
        if not self.distance_pool or any(Fraction(v) <= 0 for v in self.distance_pool):
            problems.append("distance_pool: values must be positive")
        if self.ideal_strategy not in IDEAL_STRATEGIES:
            problems.append(f"ideal_strategy: choose from {IDEAL_STRATEGIES}")
        if not self.order_kinds or set(self.order_kinds) - set(ORDER_KINDS):
            problems.append(f"order_kinds: choose from {ORDER_KINDS}")
        unknown = set(self.theorems) - set(PROPERTIES)
        if unknown:
            problems.append(f"theorems: unknown {sorted(unknown)}")
        if problems:
            raise InvariantViolation(problems)
        if not self.theorems:
            object.__setattr__(self, "theorems", DEFAULT_PROPERTIES)

    def to_json(self) -> dict:
        d = asdict(self)
        d["distance_pool"] = [format_rational(v) for v in self.distance_pool]
        d["order_kinds"] = list(self.order_kinds)
        d["theorems"] = list(self.theorems)
        return d


# ---------------------------------------------------------------- generation


def shortest_path_completion(n: int, weights: dict) -> list[list[Fraction]]:
    """Floyd-Warshall over the complete graph with the given edge weights."""
    d = [[Fraction(0) if i == j else weights[min(i, j), max(i, j)] for j in range(n)] for i in range(n)]
    for k in range(n):
        for i in range(n):
            for j in range(n):
                via = d[i][k] + d[k][j]
                if via < d[i][j]:
                    d[i][j] = via
    return d


def random_metric(rng: random.Random, n: int, prefix: str, pool) -> FiniteMetricSpace:
    pool = [Fraction(v) for v in pool]
    weights = {(i, j): rng.choice(pool) for i in range(n) for j in range(i + 1, n)}
    labels = [f"{prefix}{i}" for i in range(n)]
    return FiniteMetricSpace(labels, shortest_path_completion(n, weights))


def random_directed_set(rng: random.Random, n: int, kinds) -> DirectedSet:
    kind = rng.choice(list(kinds))
    labels = [f"g{i}" for i in range(n)]
    if kind == "tree" and n > 1:
        # each element sits below a random later one, so the last is the top
        pairs = [(labels[rng.randrange(i + 1, n)], labels[i]) for i in range(n - 1)]
        return DirectedSet.from_pairs(labels, pairs)
    if kind == "product" and n > 1:
        a = rng.randint(1, n)
        b = n // a
        cells = [(i, j) for i in range(a) for j in range(b)]
        geq = [[p[0] >= q[0] and p[1] >= q[1] for q in cells] for p in cells]
        return DirectedSet([f"g{i}_{j}" for i, j in cells], geq)
    if kind == "tied" and n > 1:
        # chain whose two largest elements are equivalent
        geq = [[i >= j or (i >= n - 2 and j >= n - 2) for j in range(n)] for i in range(n)]
        return DirectedSet(labels, geq)
    return DirectedSet.linear(labels)


def _random_mask(rng, n, p=0.5, nonempty=False):
    while True:
        m = sum(1 << i for i in range(n) if rng.random() < p)
        if m or not nonempty:
            return m


def random_ideal(rng: random.Random, ds: DirectedSet, strategy: str) -> Ideal:
    if strategy == "mixed":
        strategy = rng.choice(["i0", "generated", "random", "empty"])
    if strategy == "i0":
        return tail_ideal(ds)
    if strategy == "empty":
        return Ideal(ds, frozenset({0}))
    if strategy == "generated":
        for _ in range(20):
            gens = [_random_mask(rng, ds.n, 1 / 3) for _ in range(rng.randint(0, 2))]
            try:
                return ideal_from_generators(ds, gens)
            except TrivialIdeal:
                continue
        return Ideal(ds, frozenset({0}))
    # "random": every ideal on a finite set is all subsets of one proper subset
    span = rng.randrange(ds.full)
    return ideal_from_generators(ds, [span])


def random_bornology(rng: random.Random, X: FiniteMetricSpace, max_base: int) -> Bornology:
    base = [_random_mask(rng, X.n, 0.4, nonempty=True) for _ in range(rng.randint(1, max_base))]
    covered = 0
    for b in base:
        covered |= b
    for i in iter_bits(X.full & ~covered):
        k = rng.randrange(len(base))
        base[k] |= 1 << i
    return Bornology(X, base)


def _perturb(rng, table, ny, kind):
    t = list(table)
    n = len(t)
    for _ in range(rng.randint(1, 2)):
        op = kind if kind != "any" else rng.choice(["domain", "values"])
        if op == "values":
            dom = [i for i in range(n) if t[i] is not None]
            i = rng.choice(dom)
            t[i] = rng.randrange(ny)
        else:
            i = rng.randrange(n)
            if t[i] is None:
                t[i] = rng.randrange(ny)
            elif sum(v is not None for v in t) > 1:
                t[i] = None
    return t


def random_instance(config: CampaignConfig, trial: int) -> cv.Instance:
    """Deterministic in ``(config.seed, trial)`` and the generation caps."""
    rng = random.Random(f"{config.seed}:{trial}")
    caps = config.caps
    X = random_metric(rng, rng.randint(1, caps.x), "x", config.distance_pool)
    Y = random_metric(rng, rng.randint(1, caps.y), "y", config.distance_pool)
    ds = random_directed_set(rng, rng.randint(config.min_gamma, caps.gamma), config.order_kinds)
    ideal = random_ideal(rng, ds, config.ideal_strategy)
    born = random_bornology(rng, X, caps.base)

    dom = _random_mask(rng, X.n, 0.6, nonempty=True)
    limit_table = [rng.randrange(Y.n) if dom >> i & 1 else None for i in range(X.n)]
    style = rng.choice(NET_STYLES)
    exact_tail = ds.tails[rng.randrange(ds.n)]
    tables = []
    for k in range(ds.n):
        if style == "exact":
            disturb = False
        elif style == "tail":
            disturb = not exact_tail >> k & 1
        elif style == "wild":
            disturb = True
        else:
            disturb = rng.random() < 0.35
        if not disturb:
            tables.append(limit_table)
        elif style == "wild":
            d = _random_mask(rng, X.n, 0.5, nonempty=True)
            tables.append([rng.randrange(Y.n) if d >> i & 1 else None for i in range(X.n)])
        else:
            kind = style if style in ("domain", "values") else "any"
            tables.append(_perturb(rng, limit_table, Y.n, kind))
    limit = PartialMap(X, Y, limit_table)
    net = PartialMapNet(ds, tuple(PartialMap(X, Y, t) for t in tables))
    return cv.Instance(X, Y, ds, ideal, born, net, limit)


# ---------------------------------------------------------------- properties


@dataclass
class Outcome:
    status: str  # "pass" | "fail" | "skip"
    verdicts: dict = field(default_factory=dict)
    hypotheses: dict = field(default_factory=dict)
    degenerate: int = 0


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def _prop_3_1(inst, mutant=False):
    v = {
        "p-minus": cv.p_ideal_minus_naive(inst).holds,
        "lower-set": cv.check(inst, "lower-set").holds,
        "p-plus": cv.p_ideal_plus_naive(inst).holds,
        "upper-set": cv.check(inst, "upper-set").holds,
    }
    ok = (not v["p-minus"] or v["lower-set"]) and (not v["p-plus"] or v["upper-set"])
    return Outcome(_status(ok), v)


def _prop_3_1_converse(inst, mutant=False):
    v = {
        "lower-set": cv.check(inst, "lower-set").holds,
        "p-minus": cv.p_ideal_minus_naive(inst).holds,
    }
    return Outcome(_status(not v["lower-set"] or v["p-minus"]), v)


def _prop_3_2(inst, mutant=False):
    v = {
        "p-plus": cv.p_ideal_plus_naive(inst).holds,
        "p-plus-supinf": cv.p_ideal_plus_supinf(inst, strict=not mutant).holds,
    }
    return Outcome(_status(v["p-plus"] == v["p-plus-supinf"]), v)


def _prop_3_3(inst, mutant=False):
    v = {
        "p-minus": cv.p_ideal_minus_naive(inst).holds,
        "p-minus-supinf": cv.p_ideal_minus_supinf(inst, strict=not mutant).holds,
    }
    return Outcome(_status(v["p-minus"] == v["p-minus-supinf"]), v)


def _thm_3_1(inst, mutant=False):
    v = {
        "graph-lower": cv.graph_ideal_conv(inst, "lower").holds,
        "p-minus": cv.p_ideal_minus_naive(inst).holds,
        "graph-upper": cv.graph_ideal_conv(inst, "upper").holds,
        "p-plus": cv.p_ideal_plus_naive(inst).holds,
    }
    ok = v["graph-lower"] == v["p-minus"] and v["graph-upper"] == v["p-plus"]
    return Outcome(_status(ok), v)


def _prop_3_5(inst, mutant=False):
    hyp = {"continuous": is_continuous(inst.limit)}
    pw = cv.pointwise_ideal_conv(inst)
    v = {"p-plus": cv.p_ideal_plus_naive(inst).holds, "pointwise": pw.holds}
    if not hyp["continuous"] or pw.degenerate:
        return Outcome("skip", v, hyp, len(pw.degenerate))
    return Outcome(_status(not v["p-plus"] or v["pointwise"]), v, hyp)


def _thm_3_2(inst, mutant=False):
    hyp = {"strongly-uniformly-continuous": is_strongly_uniformly_continuous(inst.limit, inst.bornology)}
    v = {"p-plus": cv.p_ideal_plus_naive(inst).holds, "sup-sup": cv.sup_sup_condition(inst).holds}
    if not all(hyp.values()):
        return Outcome("skip", v, hyp)
    return Outcome(_status(v["p-plus"] == v["sup-sup"]), v, hyp)


def _thm_3_2_upper(inst, mutant=False):
    hyp = {"strongly-uniformly-continuous": is_strongly_uniformly_continuous(inst.limit, inst.bornology)}
    v = {
        "p-plus": cv.p_ideal_plus_naive(inst).holds,
        "sup-sup": cv.sup_sup_condition(inst).holds,
        "upper-set": cv.check(inst, "upper-set").holds,
    }
    if not all(hyp.values()):
        return Outcome("skip", v, hyp)
    return Outcome(_status(v["p-plus"] == (v["sup-sup"] and v["upper-set"])), v, hyp)


def _thm_3_3_hyps(inst):
    return {
        "stable-under-small-enlargement": is_stable_under_small_enlargement(inst.bornology),
        "uniformly-continuous-rel": is_uniformly_continuous_rel(inst.limit, inst.bornology),
    }


def _thm_3_3(inst, mutant=False):
    hyp = _thm_3_3_hyps(inst)
    v = {
        "p": cv.p_ideal_conv(inst).holds,
        "sup-sup": cv.sup_sup_condition(inst).holds,
        "lower-set": cv.check(inst, "lower-set").holds,
    }
    if not all(hyp.values()):
        return Outcome("skip", v, hyp)
    return Outcome(_status(v["p"] == (v["sup-sup"] and v["lower-set"])), v, hyp)


def _thm_3_3_upper(inst, mutant=False):
    hyp = _thm_3_3_hyps(inst)
    v = {
        "p": cv.p_ideal_conv(inst).holds,
        "sup-sup": cv.sup_sup_condition(inst).holds,
        "lower-set": cv.check(inst, "lower-set").holds,
        "upper-set": cv.check(inst, "upper-set").holds,
    }
    if not all(hyp.values()):
        return Outcome("skip", v, hyp)
    rhs = v["sup-sup"] and v["lower-set"] and v["upper-set"]
    return Outcome(_status(v["p"] == rhs), v, hyp)


_CLASSICAL_PAIRS = {
    "classical-lower": "lower-set",
    "classical-upper": "upper-set",
    "classical-p-minus": "p-minus",
    "classical-p-plus": "p-plus",
    "classical-p": "p",
}


def _classical(inst, mutant=False):
    i0 = inst.with_ideal(tail_ideal(inst.ds))
    v = {}
    for classical, ideal_mode in _CLASSICAL_PAIRS.items():
        v[classical] = cv.check(inst, classical).holds
        v[ideal_mode + "@I0"] = cv.check(i0, ideal_mode).holds
    ok = all(v[c] == v[m + "@I0"] for c, m in _CLASSICAL_PAIRS.items())
    return Outcome(_status(ok), v)


def _classical_implies_ideal(inst, mutant=False):
    v = {}
    for classical, ideal_mode in _CLASSICAL_PAIRS.items():
        v[classical] = cv.check(inst, classical).holds
        v[ideal_mode] = cv.check(inst, ideal_mode).holds
    ok = all(not v[c] or v[m] for c, m in _CLASSICAL_PAIRS.items())
    return Outcome(_status(ok), v)


def larger_ideals(inst) -> list[Ideal]:
    """Nontrivial ideals obtained by adding one index to the instance's ideal."""
    out = []
    for g in range(inst.ds.n):
        if inst.ideal.span >> g & 1:
            continue
        try:
            out.append(ideal_from_generators(inst.ds, [inst.ideal.span | 1 << g]))
        except TrivialIdeal:
            pass
    return out


def _ideal_monotone(inst, mutant=False):
    bigger = larger_ideals(inst)
    if not bigger:
        return Outcome("skip")
    small = {m: cv.check(inst, m).holds for m in cv.IDEAL_MODES}
    v = {f"{m}@I": h for m, h in small.items()}
    ok = True
    for k, ideal in enumerate(bigger):
        big_inst = inst.with_ideal(ideal)
        for m, h in small.items():
            if h:
                hb = cv.check(big_inst, m).holds
                v[f"{m}@I+{k}"] = hb
                ok = ok and hb
    return Outcome(_status(ok), v)


def _spectrum_soundness(inst, mutant=False):
    fine = refine_grid(inst.thresholds, 10)
    v = {}
    ok = True
    for m in cv.MODES:
        a = cv.check(inst, m).holds
        b = cv.check(inst, m, eps_grid=fine).holds
        v[m] = a
        v[m + "@fine"] = b
        ok = ok and a == b
    return Outcome(_status(ok), v)


def _constant_net(inst, mutant=False):
    const = inst.with_maps([inst.limit] * inst.ds.n)
    v = {m: cv.check(const, m).holds for m in cv.MODES}
    return Outcome(_status(all(v.values())), v)


PROPERTIES: dict[str, Callable[..., Outcome]] = {
    "prop3.1": _prop_3_1,
    "prop3.2": _prop_3_2,
    "prop3.3": _prop_3_3,
    "thm3.1": _thm_3_1,
    "prop3.5": _prop_3_5,
    "thm3.2": _thm_3_2,
    "thm3.3": _thm_3_3,
    "thm3.2+upper-domain": _thm_3_2_upper,
    "thm3.3+upper-domain": _thm_3_3_upper,
    "classical": _classical,
    "ideal-monotone": _ideal_monotone,
    "spectrum-soundness": _spectrum_soundness,
    "constant-net": _constant_net,
    # implications that need a hypothesis the campaign does not provide;
    # search_counterexample is expected to refute them
    "prop3.1-converse": _prop_3_1_converse,
    "classical-implies-ideal": _classical_implies_ideal,
}

DEFAULT_PROPERTIES = (
    "prop3.1", "prop3.2", "prop3.3", "thm3.1", "prop3.5", "thm3.2", "thm3.3",
    "thm3.2+upper-domain", "thm3.3+upper-domain",
    "classical", "ideal-monotone", "spectrum-soundness", "constant-net",
)

# hypotheses that finiteness makes true on every instance
AUTO_HYPOTHESES = {
    "continuous", "strongly-uniformly-continuous",
    "stable-under-small-enlargement", "uniformly-continuous-rel",
}


def evaluate(name: str, inst: cv.Instance, mutant: bool = False) -> Outcome:
    return PROPERTIES[name](inst, mutant)


# ---------------------------------------------------------------- campaigns


@dataclass
class CampaignReport:
    config: dict
    properties: dict
    counterexamples: list
    degenerate_traces: int
    duration_s: float

    @property
    def failures(self) -> int:
        return sum(p["fail"] for p in self.properties.values())

    def to_json(self) -> dict:
        return asdict(self)


MAX_STORED_COUNTEREXAMPLES = 5


def _run_trial(config: CampaignConfig, trial: int) -> list:
    inst = random_instance(config, trial)
    return [(name, evaluate(name, inst, config.mutant)) for name in config.theorems]


def _run_chunk(args):
    config, trials = args
    return [(t, _run_trial(config, t)) for t in trials]


def certify(config: CampaignConfig) -> CampaignReport:
    start = time.perf_counter()
    trials = list(range(config.trials))
    if config.workers > 1:
        chunks = [(config, trials[i::config.workers]) for i in range(config.workers)]
        with ProcessPoolExecutor(config.workers) as pool:
            results = [r for chunk in pool.map(_run_chunk, chunks) for r in chunk]
        results.sort(key=lambda r: r[0])
    else:
        results = _run_chunk((config, trials))

    props = {
        name: {"pass": 0, "fail": 0, "skip": 0, "hypotheses": {}}
        for name in config.theorems
    }
    counterexamples = []
    degenerate = 0
    for trial, outcomes in results:
        for name, out in outcomes:
            rec = props[name]
            rec[out.status] += 1
            degenerate += out.degenerate
            for h, val in out.hypotheses.items():
                tally = rec["hypotheses"].setdefault(h, {"true": 0, "false": 0})
                tally["true" if val else "false"] += 1
            if out.status == "fail":
                stored = sum(c["property"] == name for c in counterexamples)
                if stored < MAX_STORED_COUNTEREXAMPLES:
                    counterexamples.append({
                        "property": name,
                        "trial": trial,
                        "mutant": config.mutant,
                        "verdicts": out.verdicts,
                        "instance": instance_to_json(random_instance(config, trial)),
                    })
    for name, rec in props.items():
        if rec["hypotheses"] and set(rec["hypotheses"]) <= AUTO_HYPOTHESES:
            rec["note"] = "hypothesis auto-satisfied on finite spaces; evaluated, not assumed"
    return CampaignReport(
        config.to_json(), props, counterexamples, degenerate,
        round(time.perf_counter() - start, 3),
    )


def reverify(counterexample: dict) -> Outcome:
    """Re-load a stored counterexample and evaluate its property again."""
    inst = load_instance_doc(counterexample["instance"])
    return evaluate(counterexample["property"], inst, counterexample.get("mutant", False))


def search_counterexample(prop: str, config: CampaignConfig) -> cv.Instance | None:
    """First generated instance on which ``prop`` fails, within ``config.trials``."""
    if prop not in PROPERTIES:
        raise KeyError(f"unknown property {prop!r}")
    for trial in range(config.trials):
        inst = random_instance(config, trial)
        if evaluate(prop, inst, config.mutant).status == "fail":
            return inst
    return None
