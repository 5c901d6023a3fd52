"""Runtime extraction, average runtime and simulated restarts."""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .model import (
    DataSet,
    InvalidArgumentError,
    RunTrace,
    RuntimeEntry,
    RuntimeTable,
    TableKey,
    TargetSet,
    UndefinedRuntimeError,
    absolute_target,
)

PRNG_ID = "numpy.random.PCG64"
DEFAULT_BOOTSTRAPS = 1000


def make_rng(seed: int | np.random.SeedSequence) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def derive_seed(master_seed: int, *key) -> np.random.SeedSequence:
    """Child seed for ``key``, independent of the order in which keys are processed."""
    digest = hashlib.sha256("\x1f".join(repr(k) for k in key).encode("utf-8")).digest()
    words = tuple(int.from_bytes(digest[i:i + 4], "little") for i in range(0, 16, 4))
    return np.random.SeedSequence(entropy=int(master_seed), spawn_key=words)


@dataclass(frozen=True)
class RestartSample:
    runtime: int
    restarts_used: int


def hitting_time(trace: RunTrace, target: float) -> int | None:
    """First evaluation whose best-so-far value is <= ``target``, or None."""
    for evals, value in trace.steps:
        if value <= target:
            return evals
    return None


def _unique(precisions: Iterable[float]) -> list[float]:
    return list(dict.fromkeys(float(p) for p in precisions))


def extract_runtimes(dataset: DataSet, algorithm: str, function_id: str, dimension: int,
                     targets: TargetSet | Sequence[float]) -> RuntimeTable:
    traces = dataset.group(algorithm, function_id, dimension)
    if not traces:
        raise InvalidArgumentError(f"no runs for {algorithm}/{function_id}/{dimension}D")
    entries = {}
    for precision in _unique(targets):
        succ, fail = [], []
        for trace in traces:
            rt = hitting_time(trace, absolute_target(trace.reference_value, precision))
            if rt is None:
                fail.append(trace.total_evaluations)
            else:
                succ.append(rt)
        entries[(function_id, dimension, precision)] = RuntimeEntry(tuple(succ), tuple(fail))
    return RuntimeTable(entries, algorithm=algorithm)


def extract_all(dataset: DataSet, algorithm: str, targets: TargetSet | Sequence[float],
                functions: Iterable[str] | None = None,
                dimensions: Iterable[int] | None = None) -> RuntimeTable:
    """Runtime table over every (function, dimension) group of one algorithm."""
    functions = dataset.functions(algorithm) if functions is None else functions
    dimensions = dataset.dimensions(algorithm) if dimensions is None else dimensions
    entries = {}
    for f in functions:
        for d in dimensions:
            if dataset.group(algorithm, f, d):
                entries.update(extract_runtimes(dataset, algorithm, f, d, targets))
    return RuntimeTable(entries, algorithm=algorithm)


def art(entry: RuntimeEntry) -> float:
    """Average runtime: all evaluations spent divided by the number of successes."""
    if not entry.successes:
        return math.inf
    return (sum(entry.successes) + sum(entry.failures)) / len(entry.successes)


def art_ps_form(mean_success: float, mean_failure: float | None, p_s: float) -> float:
    """Expected restart runtime from mean runtimes and success probability."""
    if not 0 < p_s <= 1:
        raise InvalidArgumentError(f"success probability must be in (0, 1], got {p_s}")
    if p_s == 1:
        return mean_success
    if mean_failure is None:
        raise InvalidArgumentError("mean failure length required when p_s < 1")
    return mean_success + (1 - p_s) / p_s * mean_failure


def _trials(entry: RuntimeEntry) -> tuple[np.ndarray, np.ndarray]:
    evals = np.array(entry.successes + entry.failures, dtype=np.int64)
    ok = np.zeros(evals.size, dtype=bool)
    ok[:len(entry.successes)] = True
    return evals, ok


def simulate_restart(entry: RuntimeEntry, rng: np.random.Generator) -> RestartSample:
    """One runtime of the restarted algorithm, drawing trials uniformly with replacement."""
    if not entry.successes:
        raise UndefinedRuntimeError("no successful trial: the restarted runtime is undefined")
    evals, ok = _trials(entry)
    total, failures = 0, 0
    while True:
        i = int(rng.integers(evals.size))
        total += int(evals[i])
        if ok[i]:
            return RestartSample(total, failures)
        failures += 1


def bootstrap_runtimes(entry: RuntimeEntry, n: int, rng: np.random.Generator,
                       variance_reduction: bool = False) -> np.ndarray:
    """``n`` simulated restart runtimes.

    With ``variance_reduction`` the trials are shuffled once, then sample k
    (0-based) starts from trial ``k mod K`` and only continues with random
    draws if that trial failed.
    """
    if not entry.successes:
        raise UndefinedRuntimeError("no successful trial: the restarted runtime is undefined")
    if n < 1:
        raise InvalidArgumentError("number of bootstrap samples must be >= 1")
    evals, ok = _trials(entry)
    k = evals.size
    if variance_reduction:
        perm = rng.permutation(k)
        evals, ok = evals[perm], ok[perm]
        first = np.arange(n) % k
    else:
        first = rng.integers(k, size=n)
    total = evals[first].copy()
    pending = np.flatnonzero(~ok[first])
    while pending.size:
        draw = rng.integers(k, size=pending.size)
        total[pending] += evals[draw]
        pending = pending[~ok[draw]]
    return total


def bootstrap_table(table: RuntimeTable, n: int, seed: int, variance_reduction: bool = False,
                    threads: int = 1) -> dict[TableKey, np.ndarray | None]:
    """Bootstrap every entry of ``table`` with per-entry derived seeds.

    Unsolved entries map to None. The result does not depend on ``threads``.
    """
    keys = list(table)

    def work(key):
        entry = table[key]
        if not entry.successes:
            return None
        rng = make_rng(derive_seed(seed, *key))
        return bootstrap_runtimes(entry, n, rng, variance_reduction)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, keys))
    else:
        results = [work(k) for k in keys]
    return dict(zip(keys, results))


class ScalingPoint(NamedTuple):
    dimension: int
    art_per_dimension: float | None  # None: no success, nothing to plot


def scaling_series(dataset: DataSet, algorithm: str, function_id: str,
                   dimensions: Iterable[int], precision: float) -> list[ScalingPoint]:
    points = []
    for d in sorted(set(dimensions)):
        table = extract_runtimes(dataset, algorithm, function_id, d, [precision])
        value = art(table[(function_id, d, precision)])
        points.append(ScalingPoint(d, value / d if math.isfinite(value) else None))
    return points
