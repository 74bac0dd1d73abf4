"""Acceptance criteria 1-8, each at its stated tolerance.

Every test records one PASS/FAIL line, printed in the terminal summary.
"""
import pytest

from bornconv import convergence as cv
from bornconv.harness import CampaignConfig, Caps, certify, random_instance, search_counterexample
from bornconv.order import ideal_from_generators, is_D_admissible

from conftest import ACCEPTANCE_LINES

SEED = 0
TRIALS = 500
CAPS = Caps(x=5, y=4, gamma=6, base=3)


def record(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def campaign(*theorems, trials=TRIALS, **kwargs):
    return certify(CampaignConfig(seed=SEED, trials=trials, caps=CAPS, theorems=theorems, **kwargs))


def tallies(report, name):
    r = report.properties[name]
    return f"{name} pass={r['pass']} fail={r['fail']} skip={r['skip']}"


def test_criterion_1_naive_vs_supinf():
    report = campaign("prop3.2", "prop3.3")
    ok = report.failures == 0 and report.duration_s < 60
    record(1, ok, f"{tallies(report, 'prop3.2')}; {tallies(report, 'prop3.3')}; "
                  f"{report.duration_s:.1f}s (limit 60s)")


def test_criterion_2_graph_vs_map():
    report = campaign("thm3.1")
    record(2, report.failures == 0, tallies(report, "thm3.1"))


def test_criterion_3_map_implies_set():
    report = campaign("prop3.1")
    found = search_counterexample("prop3.1-converse", CampaignConfig(seed=SEED, trials=1000, caps=CAPS))
    ok = report.failures == 0 and found is not None
    record(3, ok, f"{tallies(report, 'prop3.1')}; converse counterexample "
                  f"{'found' if found is not None else 'not found'} within 1000 trials")


def test_criterion_4_pointwise():
    report = campaign("prop3.5")
    rec = report.properties["prop3.5"]
    ok = rec["fail"] == 0 and rec["pass"] + rec["skip"] == TRIALS
    record(4, ok, f"{tallies(report, 'prop3.5')} (skips carry degenerate traces: "
                  f"{report.degenerate_traces} pairs)")


def test_criterion_5_sup_sup():
    report = campaign("thm3.2", "thm3.3", "thm3.2+upper-domain", "thm3.3+upper-domain")
    literal = ("thm3.2", "thm3.3")
    hyps_true = all(
        t["false"] == 0
        for name in literal
        for t in report.properties[name]["hypotheses"].values()
    ) and all(report.properties[n]["hypotheses"] for n in literal)
    fails = sum(report.properties[n]["fail"] for n in literal)
    detail = "; ".join(tallies(report, n) for n in report.properties)
    record(5, fails == 0 and hyps_true, f"{detail}; hypotheses logged true: {hyps_true}")


def test_criterion_6_classical_coherence():
    report = campaign("classical")
    config = CampaignConfig(seed=SEED, trials=1000, caps=CAPS, ideal_strategy="empty",
                            order_kinds=("linear",), min_gamma=2)
    found = search_counterexample("classical-implies-ideal", config)
    ok = report.failures == 0 and found is not None and not is_D_admissible(found.ideal)
    record(6, ok, f"{tallies(report, 'classical')}; counterexample to classical => ideal "
                  f"under the ideal of the empty set {'found' if found is not None else 'not found'} within 1000 trials")


def test_criterion_7_spectrum_soundness():
    report = campaign("spectrum-soundness", trials=100)
    record(7, report.failures == 0, f"{tallies(report, 'spectrum-soundness')} (10x finer grid)")


def all_nontrivial_ideals(ds):
    # on a finite set an ideal is all subsets of one proper subset
    return [ideal_from_generators(ds, [span]) for span in range(ds.full)]


def test_criterion_8_trivial_limits():
    problems = []
    config = CampaignConfig(seed=SEED, caps=CAPS)
    checked = 0
    for trial in range(60):
        inst = random_instance(config, trial)
        const = inst.with_maps([inst.limit] * inst.ds.n)
        for ideal in all_nontrivial_ideals(inst.ds):
            for mode in cv.MODES:
                checked += 1
                if not cv.check(const.with_ideal(ideal), mode):
                    problems.append(f"constant net, trial {trial}, mode {mode}")
    single = CampaignConfig(seed=SEED, caps=Caps(1, 1, 6, 3))
    for trial in range(100):
        inst = random_instance(single, trial)
        for mode in cv.MODES:
            checked += 1
            if not cv.check(inst, mode):
                problems.append(f"single point, trial {trial}, mode {mode}")
    mono = campaign("ideal-monotone", "constant-net")
    ok = not problems and mono.failures == 0
    record(8, ok, f"{checked} trivial-limit verdicts, {len(problems)} false; "
                  f"{tallies(mono, 'ideal-monotone')}; {tallies(mono, 'constant-net')}")
