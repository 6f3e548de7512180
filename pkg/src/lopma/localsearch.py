"""Insertion (shift) neighbourhood and the hill climber built on it."""

from __future__ import annotations

from typing import NamedTuple

import numba
import numpy as np

from .budget import Effort
from .core import DomainError, Individual, LopInstance, inverse


class InsertMove(NamedTuple):
    src: int  # rank the item is taken from
    dst: int  # rank it ends up at


def _check_move(n: int, move: InsertMove) -> None:
    if not (0 <= move.src < n and 0 <= move.dst < n):
        raise DomainError(f"move {tuple(move)} out of range for n={n}")


def insert_delta(inst: LopInstance, perm, move: InsertMove) -> int:
    """Objective change of ``apply_insert(perm, move)``, in O(|src - dst|)."""
    perm = np.asarray(perm, dtype=np.int64)
    _check_move(perm.size, move)
    src, dst = move
    w = inst.weights
    x = perm[src]
    if src < dst:
        between = perm[src + 1 : dst + 1]
        return int(w[between, x].sum() - w[x, between].sum())
    if dst < src:
        between = perm[dst:src]
        return int(w[x, between].sum() - w[between, x].sum())
    return 0


def apply_insert(perm, move: InsertMove) -> np.ndarray:
    perm = np.asarray(perm, dtype=np.int64)
    _check_move(perm.size, move)
    src, dst = move
    out = perm.copy()
    x = perm[src]
    if src < dst:
        out[src:dst] = perm[src + 1 : dst + 1]
    elif dst < src:
        out[dst + 1 : src + 1] = perm[dst:src]
    out[dst] = x
    return out


@numba.njit(cache=True, nogil=True)
def _sweep(w, order, pos, items):
    # One pass: for each item, move it to its best strictly improving rank.
    # Ties keep the first position met scanning outward, left side first.
    n = order.size
    gain = 0
    moves = 0
    for x in items:
        src = pos[x]
        best = 0
        dst = src
        run = 0
        for t in range(src - 1, -1, -1):
            y = order[t]
            run += w[x, y] - w[y, x]
            if run > best:
                best = run
                dst = t
        run = 0
        for t in range(src + 1, n):
            y = order[t]
            run += w[y, x] - w[x, y]
            if run > best:
                best = run
                dst = t
        if dst == src:
            continue
        if src < dst:
            for t in range(src, dst):
                order[t] = order[t + 1]
                pos[order[t]] = t
        else:
            for t in range(src, dst, -1):
                order[t] = order[t - 1]
                pos[order[t]] = t
        order[dst] = x
        pos[x] = dst
        gain += best
        moves += 1
    return gain, moves


def local_search(
    inst: LopInstance,
    ind: Individual,
    rng: np.random.Generator,
    effort: Effort | None = None,
) -> Individual:
    """Best-improvement insertion hill climbing until a pass changes nothing.

    Each pass visits the items in a fresh random order. The returned
    individual is a local optimum: no single insertion has positive delta.
    ``effort``, if given, is incremented with the passes and moves made.
    """
    order = ind.perm.astype(np.int64, copy=True)
    pos = inverse(order)
    n = order.size
    fitness = ind.fitness
    sweeps = moves = 0
    while True:
        items = rng.permutation(n).astype(np.int64)
        gain, applied = _sweep(inst.weights, order, pos, items)
        sweeps += 1
        fitness += int(gain)
        moves += int(applied)
        if applied == 0:
            break
    if effort is not None:
        effort.sweeps += sweeps
        effort.moves += moves
    return Individual(order, fitness)


def improving_moves(inst: LopInstance, perm) -> list[InsertMove]:
    """All insertion moves with positive delta (O(n^3); for checks, not search)."""
    n = len(perm)
    return [
        InsertMove(i, j)
        for i in range(n)
        for j in range(n)
        if i != j and insert_delta(inst, perm, InsertMove(i, j)) > 0
    ]
