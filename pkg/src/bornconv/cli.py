"""Command line: ``bornconv {validate,check,certify,generate}``.

Exit codes: 0 success, 1 a property failed or a counterexample was found,
2 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import convergence as cv
from .errors import BornconvError, InvariantViolation, ParseError, UnknownMode
from .fileformat import dumps_instance, load_instance
from .harness import IDEAL_STRATEGIES, PROPERTIES, CampaignConfig, Caps, certify, random_instance
from .order import tail_ideal

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _render_table(rows: list[dict]) -> str:
    lines = [f"{'mode':<20} {'holds':<6} witness"]
    for r in rows:
        w = r["failing_witness"]
        if w is None:
            detail = ""
        else:
            where = f"B={w['member']}" if "member" in w else f"x={w['point']}"
            detail = f"{where} eps={w['eps']} gammas={w['gammas']}"
            if "note" in w:
                detail += f" ({w['note']})"
        if r.get("degenerate_traces"):
            detail += f" [{len(r['degenerate_traces'])} degenerate trace(s)]"
        lines.append(f"{r['mode']:<20} {str(r['holds']):<6} {detail}".rstrip())
    return "\n".join(lines)


def cmd_validate(args) -> int:
    try:
        load_instance(args.path)
    except InvariantViolation as exc:
        for v in exc.violations:
            print(f"InvariantViolation: {v}")
        return EXIT_INPUT
    except ParseError as exc:
        print(f"ParseError: {exc}")
        return EXIT_INPUT
    except OSError as exc:
        print(f"IOError: {exc}")
        return EXIT_INPUT
    print(f"{args.path}: ok")
    return EXIT_OK


def cmd_check(args) -> int:
    modes = list(cv.MODES) if args.modes == "all" else [m.strip() for m in args.modes.split(",")]
    unknown = [m for m in modes if m not in cv.MODES]
    if unknown:
        print(f"UnknownMode: {unknown}; choose from {', '.join(cv.MODES)}", file=sys.stderr)
        return EXIT_INPUT
    try:
        inst = load_instance(args.path)
    except (BornconvError, OSError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.ideal == "i0":
        inst = inst.with_ideal(tail_ideal(inst.ds))
    rows = []
    for m in modes:
        try:
            rows.append({"mode": m, **cv.check(inst, m).to_json()})
        except UnknownMode as exc:  # pragma: no cover - filtered above
            print(exc, file=sys.stderr)
            return EXIT_INPUT
    if args.format == "json":
        print(json.dumps(rows, indent=2))
    else:
        print(_render_table(rows))
    return EXIT_OK


def _config_from_args(args) -> CampaignConfig:
    theorems = tuple(t.strip() for t in args.theorems.split(",")) if args.theorems else ()
    return CampaignConfig(
        seed=args.seed,
        trials=args.trials,
        caps=Caps.parse(args.caps),
        ideal_strategy=args.ideal,
        theorems=theorems,
        mutant=getattr(args, "mutant", False),
        workers=getattr(args, "workers", 1),
    )


def cmd_certify(args) -> int:
    try:
        config = _config_from_args(args)
    except (InvariantViolation, ValueError) as exc:
        print(f"bad configuration: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = certify(config)
    doc = report.to_json()
    if args.out:
        Path(args.out).write_text(json.dumps(doc, indent=2) + "\n")
    print(f"{'property':<22} {'pass':>5} {'fail':>5} {'skip':>5}")
    for name, rec in doc["properties"].items():
        print(f"{name:<22} {rec['pass']:>5} {rec['fail']:>5} {rec['skip']:>5}")
    print(f"degenerate traces: {doc['degenerate_traces']}  duration: {doc['duration_s']}s")
    return EXIT_OK if report.failures == 0 else EXIT_FAIL


def cmd_generate(args) -> int:
    try:
        config = CampaignConfig(
            seed=args.seed, trials=1, caps=Caps.parse(args.caps), ideal_strategy=args.ideal
        )
    except (InvariantViolation, ValueError) as exc:
        print(f"bad configuration: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = dumps_instance(random_instance(config, args.trial))
    try:
        Path(args.out).write_text(text)
    except OSError as exc:
        print(f"IOError: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bornconv", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check an instance file against every invariant")
    v.add_argument("path")
    v.set_defaults(func=cmd_validate)

    c = sub.add_parser("check", help="run convergence checks on an instance file")
    c.add_argument("path")
    c.add_argument("--modes", default="all", help=f"comma list from: {', '.join(cv.MODES)}")
    c.add_argument("--ideal", choices=["file", "i0"], default="file",
                   help="use the file's ideal or replace it by the tail ideal")
    c.add_argument("--format", choices=["json", "table"], default="table")
    c.set_defaults(func=cmd_check)

    def campaign_flags(q, trials):
        q.add_argument("--seed", type=int, default=0)
        q.add_argument("--caps", default="5,4,6,3", help="|X|,|Y|,|Gamma|,|base|")
        q.add_argument("--ideal", choices=IDEAL_STRATEGIES, default="mixed")
        if trials:
            q.add_argument("--trials", type=int, default=500)

    r = sub.add_parser("certify", help="run a certification campaign")
    campaign_flags(r, trials=True)
    r.add_argument("--theorems", default="", help=f"comma list from: {', '.join(PROPERTIES)}")
    r.add_argument("--out", help="write the JSON report here")
    r.add_argument("--workers", type=int, default=1)
    r.add_argument("--mutant", action="store_true", help=argparse.SUPPRESS)
    r.set_defaults(func=cmd_certify)

    g = sub.add_parser("generate", help="write a random valid instance file")
    campaign_flags(g, trials=False)
    g.add_argument("--trial", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
