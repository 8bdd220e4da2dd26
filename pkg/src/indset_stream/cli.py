"""Command-line front end.

    indset-stream --mode edge --gen gnm:n=1000,m=4000 --est eps --trials 20 --out runs.csv
    indset-stream gen --mode vertex --gen gadget:k=4,z=2,c=2,x=1+3,y=0+2 --out g.txt
"""

from __future__ import annotations

import argparse
import json
import sys

from . import harness
from .graph import StreamValidationError, write_stream


def _run_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="indset-stream", description="Estimate the Caro-Wei bound of a graph stream.")
    src = ap.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="stream file in the text format")
    src.add_argument("--gen", help="gnm:n=..,m=..[,seed=..] or gadget:k=..,z=..,c=..,x=i+j,y=i+j")
    ap.add_argument("--mode", choices=["edge", "vertex"], required=True)
    ap.add_argument("--est", choices=harness.ESTIMATORS, required=True)
    ap.add_argument("--eps", type=float, default=0.25)
    ap.add_argument("--phi", type=float, default=3.0)
    ap.add_argument("--gamma", type=float, default=None, help="lower bound on beta (default: Turan bound)")
    ap.add_argument("--d", type=int, default=None, help="degree bound for degtest")
    ap.add_argument("--C", type=float, default=None, help="override the sampling constant 24/delta^2")
    ap.add_argument("--trials", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--oracle", choices=["auto", "off"], default="auto")
    ap.add_argument("--timing", action="store_true", help="add a wall_time column")
    ap.add_argument("--out", help="CSV path (default: stdout)")
    return ap


def _gen_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="indset-stream gen", description="Write a generated stream file.")
    ap.add_argument("--gen", required=True)
    ap.add_argument("--mode", choices=["edge", "vertex"], required=True)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", required=True)
    return ap


def _gen(argv) -> int:
    args = _gen_parser().parse_args(argv)
    plan = harness.TrialPlan(source=args.gen, mode=args.mode, estimator="eps" if args.mode == "edge" else "vertex",
                             base_seed=args.seed)
    stream = harness.load_instance(plan)
    with open(args.out, "w", encoding="ascii") as fh:
        write_stream(stream, fh)
    if stream.metadata:
        with open(args.out + ".json", "w", encoding="ascii") as fh:
            json.dump(stream.metadata, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


def _run(argv) -> int:
    args = _run_parser().parse_args(argv)
    plan = harness.TrialPlan(
        source=args.input or args.gen, mode=args.mode, estimator=args.est,
        eps=args.eps, phi=args.phi, gamma=args.gamma, d=args.d, trials=args.trials,
        base_seed=args.seed, oracle=args.oracle, C=args.C,
    )
    stream = harness.load_instance(plan)
    records = harness.run_plan(plan, stream)
    text = harness.records_to_csv(records, harness.plan_params(plan, stream), timing=args.timing)
    summary = harness.summary_to_csv(harness.summarize(records, harness.plan_factors(plan)))
    if args.out:
        with open(args.out, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
        sys.stdout.write(summary)
    else:
        sys.stdout.write(text)
        sys.stderr.write(summary)
    return 0


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        if argv and argv[0] == "gen":
            return _gen(argv[1:])
        return _run(argv)
    except (StreamValidationError, harness.PlanError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
