"""Memetic and iterated local search solvers for the linear ordering problem."""

from .budget import Budget, BudgetKind, Effort
from .core import (
    DomainError,
    FormatError,
    Individual,
    LopInstance,
    TruncatedFileError,
    evaluate,
    load_instance,
    parse_instance,
    random_permutation,
    total_offdiagonal,
)
from .engine import Algorithm, ConfigError, EngineConfig, RunResult, run
from .ils import IlsConfig, ils_run, perturb
from .localsearch import InsertMove, apply_insert, insert_delta, local_search
from .parallel import Dispatch, PoolExecutor, SequentialExecutor

__version__ = "0.1.0"

__all__ = [
    "Algorithm", "Budget", "BudgetKind", "ConfigError", "Dispatch", "DomainError", "Effort",
    "EngineConfig", "FormatError", "IlsConfig", "Individual", "InsertMove", "LopInstance",
    "PoolExecutor", "RunResult", "SequentialExecutor", "TruncatedFileError", "apply_insert",
    "evaluate", "ils_run", "insert_delta", "load_instance", "local_search", "parse_instance",
    "perturb", "random_permutation", "run", "total_offdiagonal",
]
