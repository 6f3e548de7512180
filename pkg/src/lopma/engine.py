"""MA-EDM / MA-EDM-ei orchestration and the single-trajectory baselines."""

from __future__ import annotations

import enum
import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .budget import Budget, BudgetKind, BudgetTracker
from .core import Individual, LopInstance, evaluate, random_permutation
from .evolution import (
    DiversitySchedule,
    binary_tournament,
    bnp_replacement,
    cycle_crossover,
    init_d0,
    threshold,
)
from .ils import IlsConfig, ils_run
from .localsearch import local_search
from .parallel import Intensifier, SequentialExecutor, intensify_all

log = logging.getLogger(__name__)


class ConfigError(ValueError):
    pass


class Algorithm(enum.Enum):
    MA_EDM = "ma-edm"
    MA_EDM_EI = "ma-edm-ei"
    ILS_ONLY = "ils"
    LS_MULTISTART = "ls-multistart"


_RUN_BUDGETS = {
    Algorithm.MA_EDM: {BudgetKind.GENERATIONS, BudgetKind.WALL_CLOCK_SECONDS, BudgetKind.EVALUATION_SWEEPS},
    Algorithm.MA_EDM_EI: {BudgetKind.GENERATIONS, BudgetKind.WALL_CLOCK_SECONDS, BudgetKind.EVALUATION_SWEEPS},
    # GENERATIONS counts restarts for the multistart baseline
    Algorithm.LS_MULTISTART: {BudgetKind.GENERATIONS, BudgetKind.WALL_CLOCK_SECONDS, BudgetKind.EVALUATION_SWEEPS},
    Algorithm.ILS_ONLY: {BudgetKind.ILS_ITERATIONS, BudgetKind.WALL_CLOCK_SECONDS, BudgetKind.EVALUATION_SWEEPS},
}


@dataclass
class EngineConfig:
    algorithm: Algorithm = Algorithm.MA_EDM_EI
    population_size: int = 200
    run_budget: Budget = field(default_factory=lambda: Budget.seconds(3600.0))
    ils_config: IlsConfig = field(default_factory=lambda: IlsConfig(Budget.seconds(3.6)))
    seed: int = 0
    intensify_executor: object = field(default_factory=SequentialExecutor)

    def validate(self) -> None:
        alg = Algorithm(self.algorithm)
        if self.run_budget.kind not in _RUN_BUDGETS[alg]:
            raise ConfigError(f"{alg.value} cannot be bounded by a {self.run_budget.kind.value} budget")
        if alg in (Algorithm.MA_EDM, Algorithm.MA_EDM_EI):
            n = self.population_size
            if n < 2 or n % 2:
                raise ConfigError(f"population size must be even and >= 2, got {n}")
        if (
            alg is Algorithm.MA_EDM_EI
            and self.run_budget.time_based
            and self.ils_config.budget.time_based
            and self.ils_config.budget.amount >= self.run_budget.amount
        ):
            raise ConfigError("ILS time budget must be shorter than the run budget")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must fit in an unsigned 64-bit integer, got {self.seed}")


@dataclass(eq=False)
class RunResult:
    best: Individual
    generations: int
    trajectory: list[tuple[float, int]]
    seed: int
    wall_time: float
    algorithm: Algorithm
    sweeps: int = 0

    def same_outcome(self, other: "RunResult") -> bool:
        """Field-wise equality ignoring wall time."""
        return (
            self.best == other.best
            and self.generations == other.generations
            and self.trajectory == other.trajectory
            and self.seed == other.seed
            and self.algorithm == other.algorithm
            and self.sweeps == other.sweeps
        )


def master_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0,)))


def task_seed(seed: int, generation: int, slot: int) -> np.random.SeedSequence:
    """Stream for the intensification at (generation, slot); generation 0 is P0."""
    return np.random.SeedSequence(seed, spawn_key=(1, generation, slot))


def run(inst: LopInstance, cfg: EngineConfig) -> RunResult:
    cfg.validate()
    alg = Algorithm(cfg.algorithm)
    if alg is Algorithm.LS_MULTISTART:
        return ls_multistart(inst, cfg)
    if alg is Algorithm.ILS_ONLY:
        return _ils_only(inst, cfg)
    return _memetic(inst, cfg, alg)


def _memetic(inst: LopInstance, cfg: EngineConfig, alg: Algorithm) -> RunResult:
    t0 = time.perf_counter()
    n_pop = cfg.population_size
    rng = master_rng(cfg.seed)
    tracker = BudgetTracker(cfg.run_budget)
    task = Intensifier(cfg.ils_config if alg is Algorithm.MA_EDM_EI else None)
    executor = cfg.intensify_executor

    def intensify(batch, generation):
        seeds = [task_seed(cfg.seed, generation, k) for k in range(len(batch))]
        done = intensify_all(executor, inst, batch, task, seeds)
        for item in done:
            tracker.effort.add(item.effort)
        return [item.individual for item in done]

    pop = [Individual.from_perm(inst, random_permutation(inst.n, rng)) for _ in range(n_pop)]
    pop = intensify(pop, 0)
    best = max(pop, key=lambda ind: ind.fitness).copy()
    sched = DiversitySchedule(init_d0(pop), cfg.run_budget)
    trajectory = [(tracker.progress(), best.fitness)]
    log.debug("P0 ready: best %d, D0 %.2f", best.fitness, sched.d0)

    while not tracker.exhausted():
        parents = [binary_tournament(pop, rng) for _ in range(n_pop)]
        offspring = []
        for k in range(0, n_pop, 2):
            for child in cycle_crossover(parents[k].perm, parents[k + 1].perm):
                offspring.append(Individual(child, evaluate(inst, child)))
        offspring = intensify(offspring, tracker.generations + 1)
        tracker.generations += 1
        for ind in offspring:
            if ind.fitness > best.fitness:
                best = ind.copy()
        progress = tracker.progress()
        pop = bnp_replacement(pop, offspring, threshold(sched, progress))
        trajectory.append((progress, best.fitness))
        log.debug("generation %d: best %d", tracker.generations, best.fitness)

    return RunResult(
        best=best,
        generations=tracker.generations,
        trajectory=trajectory,
        seed=cfg.seed,
        wall_time=time.perf_counter() - t0,
        algorithm=alg,
        sweeps=tracker.effort.sweeps,
    )


def ls_multistart(inst: LopInstance, cfg: EngineConfig) -> RunResult:
    """Independent local searches from random starts; keeps the best."""
    if cfg.run_budget.kind not in _RUN_BUDGETS[Algorithm.LS_MULTISTART]:
        raise ConfigError(f"multistart cannot be bounded by a {cfg.run_budget.kind.value} budget")
    t0 = time.perf_counter()
    tracker = BudgetTracker(cfg.run_budget)
    best = None
    trajectory = []
    while best is None or not tracker.exhausted():
        rng = np.random.default_rng(task_seed(cfg.seed, tracker.generations, 0))
        start = Individual.from_perm(inst, random_permutation(inst.n, rng))
        cand = local_search(inst, start, rng, tracker.effort)
        tracker.generations += 1
        if best is None or cand.fitness > best.fitness:
            best = cand
        trajectory.append((tracker.progress(), best.fitness))
    return RunResult(
        best=best,
        generations=tracker.generations,
        trajectory=trajectory,
        seed=cfg.seed,
        wall_time=time.perf_counter() - t0,
        algorithm=Algorithm.LS_MULTISTART,
        sweeps=tracker.effort.sweeps,
    )


def _ils_only(inst: LopInstance, cfg: EngineConfig) -> RunResult:
    t0 = time.perf_counter()
    rng = master_rng(cfg.seed)
    start = Individual.from_perm(inst, random_permutation(inst.n, rng))
    ils_cfg = IlsConfig(cfg.run_budget, cfg.ils_config.swap_count, cfg.ils_config.perturbation)
    trajectory: list[tuple[float, int]] = []

    def record(progress, ind):
        if not trajectory or ind.fitness > trajectory[-1][1]:
            trajectory.append((progress, ind.fitness))

    tracker = BudgetTracker(cfg.run_budget)
    best = ils_run(inst, start, ils_cfg, rng, tracker.effort, on_accept=record)
    return RunResult(
        best=best,
        generations=tracker.effort.ils_iterations,
        trajectory=trajectory,
        seed=cfg.seed,
        wall_time=time.perf_counter() - t0,
        algorithm=Algorithm.ILS_ONLY,
        sweeps=tracker.effort.sweeps,
    )
