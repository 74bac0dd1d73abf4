"""Search for instances refuting implications that lack a needed hypothesis.

Each search writes the first counterexample it finds as an instance file,
which ``bornconv check`` can inspect afterwards.
"""
import argparse
from pathlib import Path

from bornconv.fileformat import dump_instance
from bornconv.harness import CampaignConfig, evaluate, search_counterexample

SEARCHES = {
    # set convergence of the domains does not force convergence of the maps
    "prop3.1-converse": dict(),
    # eventual convergence need not be ideal convergence when tails are not large
    "classical-implies-ideal": dict(ideal_strategy="empty", order_kinds=("linear",), min_gamma=2),
    # literal sup-sup equivalences, refuted by domains leaving the limit domain
    "thm3.2": dict(),
    "thm3.3": dict(),
}


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--outdir", default="results/counterexamples")
    args = p.parse_args()
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    for prop, extra in SEARCHES.items():
        config = CampaignConfig(seed=args.seed, trials=args.trials, **extra)
        inst = search_counterexample(prop, config)
        if inst is None:
            print(f"{prop:<24} none within {args.trials} trials")
            continue
        path = outdir / f"{prop}.json"
        dump_instance(inst, path)
        print(f"{prop:<24} {evaluate(prop, inst).verdicts} -> {path}")


if __name__ == "__main__":
    main()
