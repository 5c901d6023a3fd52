"""Empirical runtime distributions aggregated over functions and targets."""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .model import AggregationError, DataSet, EcdfCurve, InvalidArgumentError, RuntimeTable, TableKey, TargetSet
from .runtime import bootstrap_table, extract_runtimes


def _is_missing(value) -> bool:
    return value is None or not math.isfinite(value)


def build_ecdf(samples: Iterable[float | None], cross_x: float | None = None,
               solved_fraction: float | None = None) -> EcdfCurve:
    """ECDF of ``samples``; None, NaN and inf count as missing runtimes."""
    samples = list(samples)
    if not samples:
        raise InvalidArgumentError("cannot build an ECDF from no samples")
    finite = [float(s) for s in samples if not _is_missing(s)]
    return EcdfCurve(tuple(finite), len(samples), cross_x, solved_fraction)


@dataclass(frozen=True)
class AggregationScope:
    """One algorithm in exactly one dimension, optionally restricted to functions or precisions."""

    dimension: int
    algorithm: str
    functions: tuple[str, ...] | None = None
    precisions: tuple[float, ...] | None = None

    def __post_init__(self):
        dim = self.dimension
        if isinstance(dim, (list, tuple, set, frozenset)):
            dims = sorted(set(dim))
            if len(dims) != 1:
                raise AggregationError(f"cannot aggregate over several dimensions {dims}")
            dim = dims[0]
        object.__setattr__(self, "dimension", int(dim))
        if self.functions is not None:
            object.__setattr__(self, "functions", tuple(sorted(set(self.functions))))
        if self.precisions is not None:
            object.__setattr__(self, "precisions", tuple(float(p) for p in self.precisions))


def _targets_for(targets: TargetSet | Mapping[str, TargetSet], function_id: str) -> TargetSet:
    if isinstance(targets, TargetSet):
        return targets
    try:
        return targets[function_id]
    except KeyError:
        raise InvalidArgumentError(f"no targets given for function {function_id!r}") from None


def scope_problems(dataset: DataSet, scope: AggregationScope,
                   targets: TargetSet | Mapping[str, TargetSet]) -> tuple[RuntimeTable, list[TableKey]]:
    """Runtime table for the scope plus the (function, dimension, precision) problems it aggregates.

    The problem list follows the target sets and keeps repeated precisions.
    """
    available = dataset.functions(scope.algorithm)
    functions = scope.functions if scope.functions is not None else tuple(available)
    entries = {}
    problems: list[TableKey] = []
    for f in functions:
        if not dataset.group(scope.algorithm, f, scope.dimension):
            raise InvalidArgumentError(f"no runs for {scope.algorithm}/{f}/{scope.dimension}D")
        precisions = list(_targets_for(targets, f))
        if scope.precisions is not None:
            wanted = set(scope.precisions)
            precisions = [p for p in precisions if p in wanted]
        entries.update(extract_runtimes(dataset, scope.algorithm, f, scope.dimension, precisions))
        problems.extend((f, scope.dimension, p) for p in precisions)
    if not problems:
        raise InvalidArgumentError("the aggregation scope is empty")
    return RuntimeTable(entries, algorithm=scope.algorithm), problems


def _check_single_dimension(problems: Sequence[TableKey]) -> None:
    dims = sorted({d for _, d, _ in problems})
    if len(dims) > 1:
        raise AggregationError(f"cannot aggregate over several dimensions {dims}")


def cross_marker(table: RuntimeTable, problems: Sequence[TableKey] | None = None) -> float | None:
    """Median over problems of the longest unsuccessful trial; None without failures."""
    problems = list(table) if problems is None else problems
    longest = [max(table[k].failures) for k in problems if table[k].failures]
    if not longest:
        return None
    return float(statistics.median(longest))


def solved_fraction_dot(table: RuntimeTable, problems: Sequence[TableKey] | None = None) -> float:
    """Fraction of problems with at least one successful trial."""
    problems = list(table) if problems is None else problems
    if not problems:
        raise InvalidArgumentError("no problems")
    return sum(1 for k in problems if table[k].successes) / len(problems)


def table_ecdf(table: RuntimeTable, n: int, seed: int, problems: Sequence[TableKey] | None = None,
               variance_reduction: bool = False, threads: int = 1) -> EcdfCurve:
    """Bootstrapped ECDF over ``problems`` of a runtime table.

    Every problem contributes ``n`` samples: simulated restart runtimes if it
    has a success, otherwise ``n`` missing values.
    """
    problems = list(table) if problems is None else list(problems)
    if not problems:
        raise InvalidArgumentError("no problems to aggregate")
    _check_single_dimension(problems)
    needed = RuntimeTable({k: table[k] for k in dict.fromkeys(problems)}, algorithm=table.algorithm)
    samples = bootstrap_table(needed, n, seed, variance_reduction, threads)
    finite = [samples[k] for k in problems if samples[k] is not None]
    runtimes = np.concatenate(finite).tolist() if finite else []
    return EcdfCurve(
        tuple(runtimes),
        n * len(problems),
        cross_marker(table, problems),
        solved_fraction_dot(table, problems),
    )


def aggregate_ecdf(dataset: DataSet, scope: AggregationScope, targets: TargetSet | Mapping[str, TargetSet],
                   n: int, seed: int, variance_reduction: bool = False, threads: int = 1) -> EcdfCurve:
    table, problems = scope_problems(dataset, scope, targets)
    return table_ecdf(table, n, seed, problems, variance_reduction, threads)


def geometric_mean_runtime(samples: Iterable[float | None]) -> float:
    values = list(samples)
    if not values:
        raise InvalidArgumentError("no samples")
    if any(_is_missing(v) for v in values):
        raise InvalidArgumentError("geometric mean is undefined with missing runtimes")
    if any(v < 1 for v in values):
        raise InvalidArgumentError("runtimes must be >= 1")
    return math.exp(math.fsum(math.log(v) for v in values) / len(values))
