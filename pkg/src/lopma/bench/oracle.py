"""Exhaustive optimum for small instances; independent of the search code."""

from __future__ import annotations

import itertools
import math

import numpy as np

from ..core import LopInstance

MAX_BRUTE_FORCE_N = 10
_CHUNK = 200_000


class BruteForceGuardError(ValueError):
    pass


def brute_force_optimum(inst: LopInstance) -> tuple[int, tuple[int, ...]]:
    """Best fitness and the lexicographically smallest permutation attaining it."""
    n = inst.n
    if n > MAX_BRUTE_FORCE_N:
        raise BruteForceGuardError(
            f"refusing to enumerate {math.factorial(n)} permutations: n={n} > {MAX_BRUTE_FORCE_N}"
        )
    w = inst.weights
    best_val = None
    best_perm = None
    perms = itertools.permutations(range(n))  # lexicographic order
    while True:
        block = np.array(list(itertools.islice(perms, _CHUNK)), dtype=np.int64)
        if block.size == 0:
            break
        vals = np.zeros(len(block), dtype=np.int64)
        for i in range(n - 1):
            for j in range(i + 1, n):
                vals += w[block[:, i], block[:, j]]
        k = int(np.argmax(vals))
        if best_val is None or vals[k] > best_val:
            best_val = int(vals[k])
            best_perm = tuple(int(v) for v in block[k])
    return best_val, best_perm
