"""Selection, cycle crossover, Kendall-tau distance and BNP replacement."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numba
import numpy as np

from .budget import Budget
from .core import DomainError, Individual, inverse


def binary_tournament(pop: Sequence[Individual], rng: np.random.Generator) -> Individual:
    """Fitter of two distinct random members; ties go to the first drawn."""
    n = len(pop)
    if n < 2:
        raise DomainError("tournament needs at least two members")
    i = int(rng.integers(n))
    j = int(rng.integers(n - 1))
    if j >= i:
        j += 1
    return pop[i] if pop[i].fitness >= pop[j].fitness else pop[j]


def cycle_crossover(p1, p2) -> tuple[np.ndarray, np.ndarray]:
    """CX. Cycles are numbered from the lowest unassigned rank; child A takes
    odd-numbered cycles from ``p1`` and even-numbered ones from ``p2``."""
    p1 = np.asarray(p1, dtype=np.int64)
    p2 = np.asarray(p2, dtype=np.int64)
    if p1.shape != p2.shape:
        raise DomainError(f"parent lengths differ: {p1.size} vs {p2.size}")
    rank_in_p1 = inverse(p1)
    a = p2.copy()
    b = p1.copy()
    assigned = np.zeros(p1.size, dtype=bool)
    odd = True
    for start in range(p1.size):
        if assigned[start]:
            continue
        k = start
        while not assigned[k]:
            assigned[k] = True
            if odd:
                a[k] = p1[k]
                b[k] = p2[k]
            k = rank_in_p1[p2[k]]
        odd = not odd
    return a, b


@numba.njit(cache=True, nogil=True)
def _count_inversions(seq):
    n = seq.size
    src = seq.copy()
    dst = np.empty_like(src)
    inv = 0
    width = 1
    while width < n:
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                if src[i] <= src[j]:
                    dst[k] = src[i]
                    i += 1
                else:
                    dst[k] = src[j]
                    inv += mid - i
                    j += 1
                k += 1
            while i < mid:
                dst[k] = src[i]
                i += 1
                k += 1
            while j < hi:
                dst[k] = src[j]
                j += 1
                k += 1
        src, dst = dst, src
        width *= 2
    return inv


def kendall_tau(a, b) -> int:
    """Number of item pairs the two orders disagree on (O(n log n))."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape != b.shape:
        raise DomainError(f"lengths differ: {a.size} vs {b.size}")
    return int(_count_inversions(inverse(a)[b]))


def init_d0(pop: Sequence[Individual]) -> float:
    """Mean Kendall-tau distance over all unordered pairs of members."""
    n = len(pop)
    if n < 2:
        raise DomainError("need at least two members")
    total = sum(
        kendall_tau(pop[i].perm, pop[j].perm) for i in range(n) for j in range(i + 1, n)
    )
    return total / (n * (n - 1) // 2)


@dataclass(frozen=True)
class DiversitySchedule:
    d0: float
    end_budget: Budget | None = None

    def __post_init__(self):
        if self.d0 < 0:
            raise ValueError(f"d0 must be non-negative, got {self.d0}")


def threshold(sched: DiversitySchedule, progress: float) -> float:
    """Linear decay from ``d0`` at progress 0 to 0 at progress 1."""
    if not 0.0 <= progress <= 1.0:
        raise DomainError(f"progress must lie in [0, 1], got {progress}")
    return max(0.0, sched.d0 * (1.0 - progress))


def bnp_replacement(
    parents: Sequence[Individual], offspring: Sequence[Individual], d: float, size: int | None = None
) -> list[Individual]:
    """Best-Non-Penalized survivor selection over parents + offspring.

    ``size`` defaults to ``len(parents)``. After the overall best is kept,
    each round takes the fittest candidate whose distance to the closest
    survivor (DCS) is at least ``d``; when every candidate is penalized the
    largest DCS wins, then fitness, then position in the union.
    """
    union = list(parents) + list(offspring)
    size = len(parents) if size is None else size
    if len(union) < size:
        raise DomainError(f"union of {len(union)} cannot fill {size} survivors")
    if size == 0:
        return []
    fit = np.array([ind.fitness for ind in union], dtype=np.int64)
    dcs = np.full(len(union), np.iinfo(np.int64).max, dtype=np.int64)
    free = np.ones(len(union), dtype=bool)
    chosen: list[int] = []

    pick = int(np.argmax(fit))
    while True:
        chosen.append(pick)
        free[pick] = False
        if len(chosen) == size:
            break
        pinned = union[pick].perm
        for c in np.flatnonzero(free):
            dist = kendall_tau(union[c].perm, pinned)
            if dist < dcs[c]:
                dcs[c] = dist
        cands = np.flatnonzero(free)
        ok = cands[dcs[cands] >= d]
        if ok.size:
            pick = int(ok[np.argmax(fit[ok])])
        else:
            # lexicographic (DCS, fitness) max; argmax keeps the earliest index
            top = cands[dcs[cands] == dcs[cands].max()]
            pick = int(top[np.argmax(fit[top])])
    return [union[i] for i in chosen]
