"""Stopping criteria shared by the engines and the ILS."""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass


class BudgetKind(enum.Enum):
    WALL_CLOCK_SECONDS = "seconds"
    GENERATIONS = "generations"
    ILS_ITERATIONS = "ils-iterations"
    EVALUATION_SWEEPS = "sweeps"


@dataclass(frozen=True)
class Budget:
    kind: BudgetKind
    amount: float

    def __post_init__(self):
        if not isinstance(self.kind, BudgetKind):
            object.__setattr__(self, "kind", BudgetKind(self.kind))
        if self.amount < 0:
            raise ValueError(f"budget amount must be non-negative, got {self.amount}")

    @property
    def time_based(self) -> bool:
        return self.kind is BudgetKind.WALL_CLOCK_SECONDS

    @classmethod
    def seconds(cls, s: float) -> "Budget":
        return cls(BudgetKind.WALL_CLOCK_SECONDS, s)

    @classmethod
    def generations(cls, g: int) -> "Budget":
        return cls(BudgetKind.GENERATIONS, g)

    @classmethod
    def iterations(cls, k: int) -> "Budget":
        return cls(BudgetKind.ILS_ITERATIONS, k)

    @classmethod
    def sweeps(cls, s: int) -> "Budget":
        return cls(BudgetKind.EVALUATION_SWEEPS, s)

    def tracker(self) -> "BudgetTracker":
        return BudgetTracker(self)


@dataclass
class Effort:
    """Work counters. A sweep is one full pass of the local search over all items."""

    sweeps: int = 0
    moves: int = 0
    ils_iterations: int = 0

    def add(self, other: "Effort") -> None:
        self.sweeps += other.sweeps
        self.moves += other.moves
        self.ils_iterations += other.ils_iterations


class BudgetTracker:
    """Progress in [0, 1] against a budget; callers bump the counters."""

    def __init__(self, budget: Budget):
        self.budget = budget
        self.generations = 0
        self.effort = Effort()
        self._t0 = time.perf_counter()

    def elapsed(self) -> float:
        return time.perf_counter() - self._t0

    def used(self) -> float:
        kind = self.budget.kind
        if kind is BudgetKind.WALL_CLOCK_SECONDS:
            return self.elapsed()
        if kind is BudgetKind.GENERATIONS:
            return self.generations
        if kind is BudgetKind.ILS_ITERATIONS:
            return self.effort.ils_iterations
        return self.effort.sweeps

    def progress(self) -> float:
        if self.budget.amount <= 0:
            return 1.0
        return min(1.0, self.used() / self.budget.amount)

    def exhausted(self) -> bool:
        return self.progress() >= 1.0
