"""Synchronous master-worker intensification.

The master hands a batch of individuals to the executor and blocks until
every slot is back. Results are returned in slot order, and each slot
carries its own seed, so the outcome never depends on which worker ran it
or when.
"""

from __future__ import annotations

import enum
import threading
import time
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .budget import Effort
from .core import Individual, LopInstance
from .ils import IlsConfig, ils_run
from .localsearch import local_search


class Dispatch(enum.Enum):
    DYNAMIC = "dynamic"
    STATIC_BLOCK = "static"


class BatchError(RuntimeError):
    def __init__(self, slot: int, cause: BaseException):
        super().__init__(f"task in slot {slot} failed: {cause!r}")
        self.slot = slot
        self.cause = cause


class TaskEvent(NamedTuple):
    worker: int
    slot: int
    start: float
    end: float


class SequentialExecutor:
    workers = 1

    def execute(self, jobs: Sequence[Callable[[], object]]) -> list:
        out = []
        for slot, job in enumerate(jobs):
            try:
                out.append(job())
            except Exception as exc:
                raise BatchError(slot, exc) from exc
        return out


class PoolExecutor:
    """Thread pool over shared read-only data.

    DYNAMIC gives the next pending slot to whichever worker is idle;
    STATIC_BLOCK splits the batch into ``workers`` contiguous chunks up
    front. ``events`` holds one TaskEvent per slot of the last batch.
    Population sizes that are multiples of ``workers`` balance best.
    """

    def __init__(self, workers: int, dispatch: Dispatch | str = Dispatch.DYNAMIC):
        if workers < 1:
            raise ValueError(f"workers must be >= 1, got {workers}")
        self.workers = workers
        self.dispatch = Dispatch(dispatch)
        self.events: list[TaskEvent] = []

    def _chunks(self, n: int) -> list[range]:
        base, extra = divmod(n, self.workers)
        out, lo = [], 0
        for w in range(self.workers):
            hi = lo + base + (1 if w < extra else 0)
            out.append(range(lo, hi))
            lo = hi
        return out

    def execute(self, jobs: Sequence[Callable[[], object]]) -> list:
        n = len(jobs)
        results: list = [None] * n
        events: list[TaskEvent] = []
        failures: list[tuple[int, BaseException]] = []
        lock = threading.Lock()
        cursor = iter(range(n))
        chunks = self._chunks(n) if self.dispatch is Dispatch.STATIC_BLOCK else None

        def next_slot(worker: int, local) -> int | None:
            with lock:
                if failures:
                    return None
                if chunks is None:
                    return next(cursor, None)
            return next(local, None)

        def worker_loop(worker: int) -> None:
            local = iter(chunks[worker]) if chunks is not None else None
            while (slot := next_slot(worker, local)) is not None:
                t0 = time.perf_counter()
                try:
                    results[slot] = jobs[slot]()
                except Exception as exc:
                    with lock:
                        failures.append((slot, exc))
                    return
                with lock:
                    events.append(TaskEvent(worker, slot, t0, time.perf_counter()))

        threads = [
            threading.Thread(target=worker_loop, args=(w,), daemon=True)
            for w in range(min(self.workers, max(n, 1)))
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        self.events = sorted(events, key=lambda e: e.start)
        if failures:
            slot, exc = min(failures, key=lambda f: f[0])
            raise BatchError(slot, exc) from exc
        return results


@dataclass(frozen=True)
class Intensifier:
    """Local search, or ILS when ``ils`` is set."""

    ils: IlsConfig | None = None

    def __call__(self, inst: LopInstance, ind: Individual, rng: np.random.Generator):
        effort = Effort()
        if self.ils is None:
            out = local_search(inst, ind, rng, effort)
        else:
            out = ils_run(inst, ind, self.ils, rng, effort)
        return Intensified(out, effort)


class Intensified(NamedTuple):
    individual: Individual
    effort: Effort


def intensify_all(
    executor,
    inst: LopInstance,
    batch: Sequence[Individual],
    task: Intensifier,
    seeds: Sequence[np.random.SeedSequence],
) -> list[Intensified]:
    """Intensify every member of ``batch`` once; ``seeds[k]`` drives slot k."""
    if not batch:
        raise ValueError("empty batch")
    if len(seeds) != len(batch):
        raise ValueError("one seed per slot is required")
    jobs = [
        (lambda ind=ind, ss=ss: task(inst, ind, np.random.default_rng(ss)))
        for ind, ss in zip(batch, seeds)
    ]
    return executor.execute(jobs)
