"""Instances, permutations and the linear-ordering objective."""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field

import numba
import numpy as np


class FormatError(ValueError):
    """Malformed instance text."""


class TruncatedFileError(FormatError):
    """The matrix ends before n*n entries were read."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


@dataclass(frozen=True, eq=False)
class LopInstance:
    name: str
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = np.ascontiguousarray(self.weights, dtype=np.int64)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise DomainError(f"weights must be square, got shape {w.shape}")
        if w.shape[0] < 2:
            raise DomainError(f"instance dimension must be >= 2, got {w.shape[0]}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.weights.shape[0]


@dataclass(eq=False)
class Individual:
    """A permutation (rank -> item) with its cached objective value."""

    perm: np.ndarray
    fitness: int

    @classmethod
    def from_perm(cls, inst: LopInstance, perm) -> "Individual":
        perm = np.array(perm, dtype=np.int64)
        return cls(perm, evaluate(inst, perm))

    def copy(self) -> "Individual":
        return Individual(self.perm.copy(), self.fitness)

    def __eq__(self, other):
        if not isinstance(other, Individual):
            return NotImplemented
        return self.fitness == other.fitness and np.array_equal(self.perm, other.perm)

    def __repr__(self):
        return f"Individual(fitness={self.fitness}, perm={self.perm.tolist()})"


def is_permutation(perm, n: int | None = None) -> bool:
    perm = np.asarray(perm)
    if perm.ndim != 1 or (n is not None and perm.size != n):
        return False
    seen = np.zeros(perm.size, dtype=bool)
    if perm.size and (perm.min() < 0 or perm.max() >= perm.size):
        return False
    seen[perm] = True
    return bool(seen.all())


def check_permutation(perm, n: int) -> np.ndarray:
    perm = np.asarray(perm, dtype=np.int64)
    if perm.ndim != 1 or perm.size != n:
        raise DomainError(f"permutation length {perm.size} does not match n={n}")
    if not is_permutation(perm):
        raise DomainError("not a permutation of 0..n-1")
    return perm


def inverse(perm) -> np.ndarray:
    """Item -> rank map of a rank -> item permutation."""
    perm = np.asarray(perm, dtype=np.int64)
    inv = np.empty_like(perm)
    inv[perm] = np.arange(perm.size, dtype=np.int64)
    return inv


def evaluate(inst: LopInstance, perm) -> int:
    """Sum of the weights above the diagonal after reordering rows and columns by ``perm``."""
    perm = np.asarray(perm, dtype=np.int64)
    if perm.ndim != 1 or perm.size != inst.n:
        raise DomainError(f"permutation length {perm.size} does not match n={inst.n}")
    if perm.min() < 0 or perm.max() >= inst.n:
        raise DomainError("permutation entries out of range")
    return int(_upper_sum(inst.weights, perm))


@numba.njit(cache=True, nogil=True)
def _upper_sum(w, perm):
    n = perm.size
    total = 0
    for i in range(n - 1):
        row = perm[i]
        for j in range(i + 1, n):
            total += w[row, perm[j]]
    return total


def total_offdiagonal(inst: LopInstance) -> int:
    w = inst.weights
    return int(w.sum(dtype=np.int64) - np.trace(w, dtype=np.int64))


def random_permutation(n: int, rng: np.random.Generator) -> np.ndarray:
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    return rng.permutation(n).astype(np.int64)


def _is_int_token(tok: str) -> bool:
    t = tok[1:] if tok[:1] in "+-" else tok
    return t.isdigit()


def parse_instance(source, name: str | None = None) -> LopInstance:
    """Read a LOLIB-style matrix from bytes, text or a readable stream.

    If the first token is not an integer the whole first line is taken as
    the instance name. Otherwise ``name`` is used (``"unnamed"`` by default).
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, (bytes, bytearray)):
        source = bytes(source).decode("utf-8")
    text = source

    tokens = text.split()
    if not tokens:
        raise TruncatedFileError("empty instance")
    if not _is_int_token(tokens[0]):
        first, _, rest = text.lstrip().partition("\n")
        name = first.strip()
        tokens = rest.split()
        if not tokens:
            raise TruncatedFileError("no dimension after name line")
    if not _is_int_token(tokens[0]):
        raise FormatError(f"dimension token {tokens[0]!r} is not an integer")
    n = int(tokens[0])
    if n < 2:
        raise DomainError(f"instance dimension must be >= 2, got {n}")
    body = tokens[1:]
    if len(body) < n * n:
        raise TruncatedFileError(f"expected {n * n} matrix entries, found {len(body)}")
    if len(body) > n * n:
        raise FormatError(
            f"{len(body) - n * n} trailing tokens after {n}x{n} matrix (dimension mismatch?)"
        )
    for tok in body:
        if not _is_int_token(tok):
            raise FormatError(f"matrix entry {tok!r} is not an integer")
    try:
        weights = np.array([int(t) for t in body], dtype=np.int64).reshape(n, n)
    except OverflowError as exc:
        raise FormatError("matrix entry outside the 64-bit range") from exc
    return LopInstance(name or "unnamed", weights)


def load_instance(path) -> LopInstance:
    """Parse the file at ``path``; the file stem names bare-format instances."""
    stem = os.path.splitext(os.path.basename(os.fspath(path)))[0]
    with open(path, "rb") as fh:
        return parse_instance(fh, name=stem)


def format_instance(inst: LopInstance, with_name: bool = False) -> str:
    out = io.StringIO()
    if with_name:
        out.write(f"{inst.name}\n")
    out.write(f"{inst.n}\n")
    for row in inst.weights:
        out.write(" ".join(str(int(v)) for v in row))
        out.write("\n")
    return out.getvalue()
