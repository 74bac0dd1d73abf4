"""Run a certification campaign and write the JSON report.

    python3 scripts/run_campaign.py --seed 0 --trials 500 --out results/campaign.json
"""
import argparse
import json
from pathlib import Path

from bornconv.harness import DEFAULT_PROPERTIES, CampaignConfig, Caps, certify


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--caps", default="5,4,6,3")
    p.add_argument("--ideal", default="mixed")
    p.add_argument("--theorems", default=",".join(DEFAULT_PROPERTIES))
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="results/campaign.json")
    args = p.parse_args()

    config = CampaignConfig(
        seed=args.seed,
        trials=args.trials,
        caps=Caps.parse(args.caps),
        ideal_strategy=args.ideal,
        theorems=tuple(args.theorems.split(",")),
        workers=args.workers,
    )
    report = certify(config)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(report.to_json(), indent=2) + "\n")

    for name, rec in report.properties.items():
        print(f"{name:<22} pass={rec['pass']:<4} fail={rec['fail']:<4} skip={rec['skip']}")
    print(f"{len(report.counterexamples)} counterexamples stored, "
          f"{report.degenerate_traces} degenerate traces, {report.duration_s}s -> {out}")


if __name__ == "__main__":
    main()
