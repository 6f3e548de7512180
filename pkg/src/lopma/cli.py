"""Command line entry point: ``lopma {run,summarize,gap,generate,optimum}``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import asdict

from .bench.experiment import (
    ExperimentSpec,
    EmptySummaryError,
    format_gap_report,
    format_summary,
    gap_to_bks,
    run_experiment,
    summarize,
    summary_json,
)
from .bench.instances import generate_instance, write_instance
from .bench.oracle import BruteForceGuardError, brute_force_optimum
from .bench.registry import BksRegistry
from .budget import Budget
from .core import load_instance
from .engine import Algorithm, ConfigError

WORKERS_ENV = "LOPMA_WORKERS"


def _run_budget(args) -> Budget:
    if args.budget_generations is not None:
        return Budget.generations(args.budget_generations)
    if args.budget_sweeps is not None:
        return Budget.sweeps(args.budget_sweeps)
    if args.budget_iterations is not None:
        return Budget.iterations(args.budget_iterations)
    return Budget.seconds(args.budget_seconds if args.budget_seconds is not None else 3600.0)


def _workers(args) -> int:
    if args.workers is not None:
        return args.workers
    env = os.environ.get(WORKERS_ENV)
    return int(env) if env else 1


def cmd_run(args) -> int:
    ils_budget = (
        Budget.iterations(args.ils_iterations)
        if args.ils_iterations is not None
        else Budget.seconds(args.ils_seconds)
    )
    out = args.out or f"results.{args.format}"
    spec = ExperimentSpec(
        instances=args.instance,
        algorithms=[Algorithm(a) for a in args.algorithm],
        population_size=args.pop_size,
        run_budget=_run_budget(args),
        ils_budget=ils_budget,
        swap_count=args.swaps,
        runs=args.runs,
        base_seed=args.seed,
        workers=_workers(args),
        dispatch=args.dispatch,
        out=out,
        fmt=args.format,
    )
    try:
        status = run_experiment(spec)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    try:
        print(format_summary(summarize(out)), end="")
    except EmptySummaryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return status or 1
    if args.strict_bks:
        report = gap_to_bks(out)
        print(format_gap_report(report), end="")
        if report.unmatched:
            status = status or 1
    return status


def cmd_summarize(args) -> int:
    try:
        rows = summarize(args.results)
    except EmptySummaryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(summary_json(rows) if args.json else format_summary(rows), end="")
    return 0


def cmd_gap(args) -> int:
    registry = BksRegistry.load(args.registry) if args.registry else None
    report = gap_to_bks(args.results, registry)
    if args.json:
        print(json.dumps({"rows": [asdict(r) for r in report.rows], "unmatched": report.unmatched}, indent=1))
    else:
        print(format_gap_report(report), end="")
    return 1 if args.strict_bks and report.unmatched else 0


def cmd_generate(args) -> int:
    inst = generate_instance(args.n, args.low, args.high, args.seed)
    write_instance(inst, args.out)
    return 0


def cmd_optimum(args) -> int:
    inst = load_instance(args.instance)
    try:
        fitness, perm = brute_force_optimum(inst)
    except BruteForceGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(json.dumps({"instance": inst.name, "fitness": fitness, "permutation": list(perm)}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lopma", description="Linear ordering problem solvers and benchmark harness.")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="repeated seeded runs on LOLIB instances")
    r.add_argument("--instance", nargs="+", required=True, metavar="PATH")
    r.add_argument("--algorithm", nargs="+", default=["ma-edm-ei"], choices=[a.value for a in Algorithm])
    r.add_argument("--pop-size", type=int, default=200)
    b = r.add_mutually_exclusive_group()
    b.add_argument("--budget-seconds", type=float)
    b.add_argument("--budget-generations", type=int)
    b.add_argument("--budget-sweeps", type=int, help="total local-search passes")
    b.add_argument("--budget-iterations", type=int, help="ILS iterations (ils algorithm only)")
    ib = r.add_mutually_exclusive_group()
    ib.add_argument("--ils-seconds", type=float, default=3.6)
    ib.add_argument("--ils-iterations", type=int)
    r.add_argument("--swaps", type=int, default=3)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--runs", type=int, default=30)
    r.add_argument("--workers", type=int, help=f"worker threads (default ${WORKERS_ENV} or 1)")
    r.add_argument("--dispatch", choices=["dynamic", "static"], default="dynamic")
    r.add_argument("--out")
    r.add_argument("--format", choices=["csv", "json"], default="csv")
    r.add_argument("--strict-bks", action="store_true", help="fail if an instance is not in the BKS registry")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("summarize", help="mean/best/worst per instance and algorithm")
    s.add_argument("results")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_summarize)

    g = sub.add_parser("gap", help="gap of every run to the best-known solutions")
    g.add_argument("results")
    g.add_argument("--registry", help="registry JSON (default: bundled)")
    g.add_argument("--json", action="store_true")
    g.add_argument("--strict-bks", action="store_true")
    g.set_defaults(func=cmd_gap)

    gen = sub.add_parser("generate", help="write a random LOLIB instance")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--low", type=int, default=0)
    gen.add_argument("--high", type=int, default=100)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=cmd_generate)

    o = sub.add_parser("optimum", help="exhaustive optimum (n <= 10)")
    o.add_argument("instance")
    o.set_defaults(func=cmd_optimum)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
