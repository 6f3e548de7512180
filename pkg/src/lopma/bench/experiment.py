"""Repeated seeded runs, result files, summaries and BKS gaps."""

from __future__ import annotations

import csv
import json
import logging
import os
import statistics
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

from ..budget import Budget
from ..core import load_instance
from ..engine import Algorithm, EngineConfig, run
from ..ils import IlsConfig
from ..parallel import Dispatch, PoolExecutor, SequentialExecutor
from .registry import BksRegistry

log = logging.getLogger(__name__)

CSV_HEADER = ["instance", "algorithm", "seed", "fitness", "generations", "wall_seconds"]
ERROR_MARK = "ERROR"


class EmptySummaryError(ValueError):
    pass


@dataclass
class ExperimentSpec:
    instances: Sequence[str]
    algorithms: Sequence[Algorithm] = (Algorithm.MA_EDM_EI,)
    population_size: int = 200
    run_budget: Budget = field(default_factory=lambda: Budget.seconds(3600.0))
    ils_budget: Budget = field(default_factory=lambda: Budget.seconds(3.6))
    swap_count: int = 3
    runs: int = 30
    base_seed: int = 0
    workers: int = 1
    dispatch: Dispatch = Dispatch.DYNAMIC
    out: str = "results.csv"
    fmt: str = "csv"

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")
        if self.fmt not in ("csv", "json"):
            raise ValueError(f"unknown format {self.fmt!r}")
        self.algorithms = tuple(Algorithm(a) for a in self.algorithms)
        self.dispatch = Dispatch(self.dispatch)

    def describe(self, algorithm: Algorithm, seed: int) -> dict:
        """Everything needed to repeat one run."""
        return {
            "algorithm": algorithm.value,
            "population_size": self.population_size,
            "run_budget": {"kind": self.run_budget.kind.value, "amount": self.run_budget.amount},
            "ils_budget": {"kind": self.ils_budget.kind.value, "amount": self.ils_budget.amount},
            "swap_count": self.swap_count,
            "seed": seed,
        }

    def engine_config(self, algorithm: Algorithm, seed: int) -> EngineConfig:
        if self.workers > 1:
            executor = PoolExecutor(self.workers, self.dispatch)
        else:
            executor = SequentialExecutor()
        return EngineConfig(
            algorithm=algorithm,
            population_size=self.population_size,
            run_budget=self.run_budget,
            ils_config=IlsConfig(self.ils_budget, self.swap_count),
            seed=seed,
            intensify_executor=executor,
        )


def sidecar_dir(out) -> Path:
    out = Path(out)
    return out.with_name(out.name + ".runs")


def run_experiment(spec: ExperimentSpec) -> int:
    """Execute every (instance, algorithm, repetition) and write the results.

    Returns the process exit code: 0 when every instance loaded, 1 otherwise.
    Each CSV row is flushed as soon as its run finishes.
    """
    out = Path(spec.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    status = 0
    records = []
    side = sidecar_dir(out)
    fh = open(out, "w", newline="") if spec.fmt == "csv" else None
    try:
        writer = None
        if fh is not None:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            fh.flush()
            side.mkdir(parents=True, exist_ok=True)
        for path in spec.instances:
            try:
                inst = load_instance(path)
            except (OSError, ValueError) as exc:
                log.error("cannot load %s: %s", path, exc)
                status = 1
                name = os.path.basename(os.fspath(path))
                for alg in spec.algorithms:
                    rec = {"instance": name, "algorithm": alg.value, "error": str(exc)}
                    records.append(rec)
                    if writer is not None:
                        writer.writerow([name, alg.value, "", ERROR_MARK, "", ""])
                        fh.flush()
                continue
            for alg in spec.algorithms:
                for r in range(spec.runs):
                    seed = spec.base_seed + r
                    res = run(inst, spec.engine_config(alg, seed))
                    log.info("%s %s seed %d: %d", inst.name, alg.value, seed, res.best.fitness)
                    rec = {
                        "instance": inst.name,
                        "algorithm": alg.value,
                        "seed": seed,
                        "fitness": res.best.fitness,
                        "generations": res.generations,
                        "wall_seconds": round(res.wall_time, 6),
                        "sweeps": res.sweeps,
                        "config": spec.describe(alg, seed),
                        "trajectory": [[p, f] for p, f in res.trajectory],
                        "permutation": res.best.perm.tolist(),
                    }
                    records.append(rec)
                    if writer is not None:
                        writer.writerow([rec[k] for k in CSV_HEADER])
                        fh.flush()
                        car = {k: v for k, v in rec.items() if k != "wall_seconds"}
                        name = f"{inst.name}__{alg.value}__seed{seed}.json"
                        (side / name).write_text(json.dumps(car, indent=1) + "\n")
    finally:
        if fh is not None:
            fh.close()
    if spec.fmt == "json":
        out.write_text(json.dumps({"runs": records}, indent=1) + "\n")
    return status


def read_results(path) -> list[dict]:
    """Successful run records from a CSV or JSON result file."""
    path = Path(path)
    text = path.read_text()
    if text.lstrip().startswith("{"):
        rows = json.loads(text).get("runs", [])
        return [r for r in rows if "error" not in r]
    rows = []
    for r in csv.DictReader(text.splitlines()):
        if r["fitness"] == ERROR_MARK:
            continue
        rows.append(
            {
                "instance": r["instance"],
                "algorithm": r["algorithm"],
                "seed": int(r["seed"]),
                "fitness": int(r["fitness"]),
                "generations": int(r["generations"]),
                "wall_seconds": float(r["wall_seconds"]),
            }
        )
    return rows


@dataclass
class SummaryRow:
    instance: str
    algorithm: str
    runs: int
    mean: float
    best: int
    worst: int


def summarize(path) -> list[SummaryRow]:
    rows = read_results(path)
    if not rows:
        raise EmptySummaryError(f"no successful runs in {path}")
    groups: dict[tuple[str, str], list[int]] = {}
    for r in rows:
        groups.setdefault((r["instance"], r["algorithm"]), []).append(int(r["fitness"]))
    return [
        SummaryRow(inst, alg, len(v), statistics.fmean(v), max(v), min(v))
        for (inst, alg), v in groups.items()
    ]


def format_summary(rows: Sequence[SummaryRow]) -> str:
    head = ("instance", "algorithm", "runs", "mean", "best", "worst")
    body = [(r.instance, r.algorithm, str(r.runs), f"{r.mean:.2f}", str(r.best), str(r.worst)) for r in rows]
    widths = [max(len(x) for x in col) for col in zip(head, *body)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(line, widths)).rstrip() for line in (head, *body)]
    return "\n".join(lines) + "\n"


def summary_json(rows: Sequence[SummaryRow]) -> str:
    return json.dumps([asdict(r) for r in rows], indent=1) + "\n"


@dataclass
class GapRow:
    instance: str
    algorithm: str
    seed: int
    fitness: int
    previous_bks: int
    new_best: int
    gap_previous: float
    gap_new: float
    record: bool


@dataclass
class GapReport:
    rows: list[GapRow]
    unmatched: list[str]


def _gap(bks: int, fitness: int) -> float:
    return (bks - fitness) / bks


def gap_rows(rows: Sequence[dict], registry: BksRegistry) -> GapReport:
    out, unmatched = [], set()
    for r in rows:
        entry = registry.get(r["instance"])
        if entry is None:
            unmatched.add(r["instance"])
            continue
        f = int(r["fitness"])
        out.append(
            GapRow(
                r["instance"], r["algorithm"], int(r["seed"]), f,
                entry.previous_bks, entry.new_best,
                _gap(entry.previous_bks, f), _gap(entry.new_best, f),
                f > entry.new_best,
            )
        )
    return GapReport(out, sorted(unmatched))


def gap_to_bks(path, registry: BksRegistry | None = None) -> GapReport:
    """Relative gap of every run to the previous and the new best-known value."""
    return gap_rows(read_results(path), registry if registry is not None else BksRegistry.load())


def format_gap_report(report: GapReport) -> str:
    lines = ["instance  algorithm  seed  fitness  gap_previous  gap_new  record"]
    for g in report.rows:
        lines.append(
            f"{g.instance}  {g.algorithm}  {g.seed}  {g.fitness}  "
            f"{g.gap_previous:.6%}  {g.gap_new:.6%}  {'NEW RECORD' if g.record else '-'}"
        )
    if report.unmatched:
        lines.append("")
        lines.append("unmatched: " + ", ".join(report.unmatched))
    return "\n".join(lines) + "\n"
