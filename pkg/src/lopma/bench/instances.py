from __future__ import annotations

import numpy as np

from ..core import LopInstance, format_instance


def generate_instance(
    n: int, low: int = 0, high: int = 100, seed: int = 0, name: str | None = None
) -> LopInstance:
    """Uniform integer weights in [low, high] off the diagonal, zeros on it."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if low > high:
        raise ValueError(f"empty weight range [{low}, {high}]")
    if low < -(2**63) or high >= 2**63:
        raise ValueError("weight range exceeds 64-bit bounds")
    rng = np.random.default_rng(seed)
    w = rng.integers(low, high, size=(n, n), dtype=np.int64, endpoint=True)
    np.fill_diagonal(w, 0)
    return LopInstance(name or f"rand{n}_{low}_{high}_s{seed}", w)


def write_instance(inst: LopInstance, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(format_instance(inst))


def demo_instance_path():
    """The bundled 3x3 demo matrix (optimum 14 at order 2, 0, 1)."""
    from importlib import resources

    return resources.files(__package__).joinpath("demo3.lop")
