"""Iterated local search: multi-swap kick, local search, accept if not worse."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .budget import Budget, BudgetKind, Effort
from .core import DomainError, Individual, LopInstance, evaluate
from .localsearch import local_search

Perturbation = Callable[[np.ndarray, int, np.random.Generator], np.ndarray]

ILS_BUDGET_KINDS = (
    BudgetKind.ILS_ITERATIONS,
    BudgetKind.WALL_CLOCK_SECONDS,
    BudgetKind.EVALUATION_SWEEPS,
)


def perturb(perm, p: int, rng: np.random.Generator) -> np.ndarray:
    """Copy of ``perm`` with ``p`` swaps of two distinct random ranks."""
    out = np.array(perm, dtype=np.int64)
    n = out.size
    if n < 2:
        raise DomainError("cannot swap in a permutation shorter than 2")
    for _ in range(p):
        i = int(rng.integers(n))
        j = int(rng.integers(n - 1))
        if j >= i:
            j += 1
        out[i], out[j] = out[j], out[i]
    return out


@dataclass(frozen=True)
class IlsConfig:
    budget: Budget
    swap_count: int = 3
    # Only multi-swap is used by the engines; other kicks can be plugged in here.
    perturbation: Perturbation = perturb

    def __post_init__(self):
        if self.swap_count < 1:
            raise ValueError(f"swap_count must be >= 1, got {self.swap_count}")
        if self.budget.kind not in ILS_BUDGET_KINDS:
            raise ValueError(f"ILS cannot be bounded by {self.budget.kind.value}")


def ils_run(
    inst: LopInstance,
    start: Individual,
    cfg: IlsConfig,
    rng: np.random.Generator,
    effort: Effort | None = None,
    on_accept: Callable[[float, Individual], None] | None = None,
) -> Individual:
    """Run ILS from ``start`` until ``cfg.budget`` runs out.

    The budget is checked between iterations only, so the iteration in
    flight always completes. ``on_accept(progress, incumbent)`` is called
    for the initial local optimum and after every accepted candidate,
    including equal-fitness ones.
    """
    tracker = cfg.budget.tracker()
    work = tracker.effort
    s = local_search(inst, start, rng, work)
    if on_accept is not None:
        on_accept(0.0, s)
    while not tracker.exhausted():
        kicked = cfg.perturbation(s.perm, cfg.swap_count, rng)
        cand = local_search(inst, Individual(kicked, evaluate(inst, kicked)), rng, work)
        work.ils_iterations += 1
        if cand.fitness >= s.fitness:
            s = cand
            if on_accept is not None:
                on_accept(tracker.progress(), s)
    if effort is not None:
        effort.add(work)
    return s
