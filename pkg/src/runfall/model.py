"""Core data types: problems, run traces, target sets, runtime tables, datasets."""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping


class RunfallError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgumentError(RunfallError, ValueError):
    pass


class DuplicateKeyError(RunfallError):
    pass


class UndefinedRuntimeError(RunfallError):
    """Raised when a runtime is requested from an entry without any success."""


class AggregationError(RunfallError):
    pass


INDICATORS = ("best-so-far", "noisy-percentile")


@dataclass(frozen=True, order=True)
class ProblemTriple:
    function_id: str
    dimension: int
    instance_id: int

    def __post_init__(self):
        if int(self.dimension) < 1:
            raise InvalidArgumentError(f"dimension must be >= 1, got {self.dimension}")
        if int(self.instance_id) < 0:
            raise InvalidArgumentError(f"instance id must be >= 0, got {self.instance_id}")


@dataclass(frozen=True)
class ProblemQuintuple:
    triple: ProblemTriple
    indicator: str
    target_precision: float

    def __post_init__(self):
        if self.indicator not in INDICATORS:
            raise InvalidArgumentError(f"unknown indicator {self.indicator!r}")
        if not self.target_precision > 0:
            raise InvalidArgumentError("target precision must be > 0")


def absolute_target(reference_value: float, precision: float) -> float:
    """Absolute indicator target for one instance: ``reference_value + precision``."""
    if not (math.isfinite(reference_value) and math.isfinite(precision)):
        raise InvalidArgumentError("reference value and precision must be finite")
    if precision <= 0:
        raise InvalidArgumentError(f"precision must be > 0, got {precision}")
    return reference_value + precision


@dataclass(frozen=True)
class RunTrace:
    """One trial: best-so-far improvement steps plus the full trial length.

    ``steps`` holds ``(evals, value)`` pairs with strictly increasing evals and
    non-increasing values. ``repetition_of`` is set when the instance id was
    synthesized at ingestion for a repeated run on an existing instance.
    """

    triple: ProblemTriple
    algorithm: str
    reference_value: float
    steps: tuple[tuple[int, float], ...]
    total_evaluations: int
    suite: str = "mini"
    repetition_of: int | None = field(default=None, compare=False)

    def __post_init__(self):
        steps = tuple((int(e), float(v)) for e, v in self.steps)
        object.__setattr__(self, "steps", steps)
        if not steps:
            raise InvalidArgumentError("a trace needs at least one evaluation")
        if steps[0][0] < 1:
            raise InvalidArgumentError("evaluation counts start at 1")
        for (e0, v0), (e1, v1) in zip(steps, steps[1:]):
            if e1 <= e0:
                raise InvalidArgumentError("evals must be strictly increasing")
            if v1 > v0:
                raise InvalidArgumentError("best-so-far values must be non-increasing")
        if self.total_evaluations < steps[-1][0]:
            raise InvalidArgumentError(
                f"total evaluations {self.total_evaluations} < last step {steps[-1][0]}"
            )
        if not math.isfinite(self.reference_value):
            raise InvalidArgumentError("reference value must be finite")

    @property
    def key(self) -> tuple[str, str, int, int]:
        t = self.triple
        return (self.algorithm, t.function_id, t.dimension, t.instance_id)

    @property
    def final_value(self) -> float:
        return self.steps[-1][1]


@dataclass(frozen=True)
class TargetSet:
    """Target precisions, easiest (largest) first.

    Fixed sets are strictly decreasing. Runlength-based sets carry the budget
    each precision was derived from and may repeat the final precision.
    """

    precisions: tuple[float, ...]
    origin: str = "fixed"
    budgets: tuple[float, ...] | None = None

    def __post_init__(self):
        precisions = tuple(float(p) for p in self.precisions)
        object.__setattr__(self, "precisions", precisions)
        if not precisions:
            raise InvalidArgumentError("empty target set")
        if any(not (p > 0 and math.isfinite(p)) for p in precisions):
            raise InvalidArgumentError("target precisions must be finite and > 0")
        if self.origin == "fixed":
            if any(b >= a for a, b in zip(precisions, precisions[1:])):
                raise InvalidArgumentError("fixed target precisions must be strictly decreasing")
        elif self.origin == "runlength":
            if any(b > a for a, b in zip(precisions, precisions[1:])):
                raise InvalidArgumentError("runlength targets must be non-increasing")
            if self.budgets is None or len(self.budgets) != len(precisions):
                raise InvalidArgumentError("runlength targets need one budget per precision")
        else:
            raise InvalidArgumentError(f"unknown target origin {self.origin!r}")

    def __len__(self) -> int:
        return len(self.precisions)

    def __iter__(self) -> Iterator[float]:
        return iter(self.precisions)

    @property
    def final(self) -> float:
        return min(self.precisions)

    def absolute(self, reference_value: float) -> list[float]:
        return [absolute_target(reference_value, p) for p in self.precisions]


@dataclass(frozen=True)
class RuntimeEntry:
    """Runtimes of the K trials of one (function, dimension, precision) problem.

    ``successes`` are first-hitting times of successful trials, ``failures``
    the total evaluation counts of trials that never reached the target.
    Both are stored in trial (instance) order.
    """

    successes: tuple[int, ...] = ()
    failures: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "successes", tuple(int(s) for s in self.successes))
        object.__setattr__(self, "failures", tuple(int(f) for f in self.failures))
        if any(v < 1 for v in self.successes + self.failures):
            raise InvalidArgumentError("runtimes and trial lengths must be >= 1")

    @property
    def count(self) -> int:
        return len(self.successes) + len(self.failures)

    @property
    def n_success(self) -> int:
        return len(self.successes)

    @property
    def success_rate(self) -> float:
        return self.n_success / self.count if self.count else 0.0


TableKey = tuple[str, int, float]


class RuntimeTable(Mapping[TableKey, RuntimeEntry]):
    """Read-only mapping ``(function_id, dimension, precision) -> RuntimeEntry``."""

    def __init__(self, entries: Mapping[TableKey, RuntimeEntry] | Iterable[tuple[TableKey, RuntimeEntry]] = (),
                 algorithm: str = ""):
        items = entries.items() if isinstance(entries, Mapping) else entries
        data: dict[TableKey, RuntimeEntry] = {}
        for (fid, dim, prec), entry in items:
            key = (str(fid), int(dim), float(prec))
            if key in data:
                raise DuplicateKeyError(f"duplicate runtime table key {key}")
            data[key] = entry
        if any(e.count < 1 for e in data.values()):
            raise InvalidArgumentError("every runtime entry needs at least one trial")
        self._data = MappingProxyType(dict(sorted(data.items(), key=_table_sort_key)))
        self.algorithm = algorithm

    def __getitem__(self, key: TableKey) -> RuntimeEntry:
        fid, dim, prec = key
        return self._data[(str(fid), int(dim), float(prec))]

    def __iter__(self) -> Iterator[TableKey]:
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def __eq__(self, other):
        if isinstance(other, RuntimeTable):
            return dict(self._data) == dict(other._data)
        return NotImplemented

    def __repr__(self):
        return f"RuntimeTable(algorithm={self.algorithm!r}, keys={len(self)})"

    def group(self, function_id: str, dimension: int) -> dict[float, RuntimeEntry]:
        """Entries of one (function, dimension), keyed by precision, easiest first."""
        return {p: e for (f, d, p), e in self._data.items() if f == function_id and d == dimension}

    def functions(self) -> list[str]:
        return sorted({k[0] for k in self._data})

    def dimensions(self) -> list[int]:
        return sorted({k[1] for k in self._data})


def _table_sort_key(item):
    (fid, dim, prec), _ = item
    return (fid, dim, -prec)


@dataclass(frozen=True)
class EcdfCurve:
    """Empirical runtime distribution with missing runtimes in the denominator."""

    runtimes: tuple[float, ...]
    total_count: int
    cross_x: float | None = None
    solved_fraction: float | None = None

    def __post_init__(self):
        rts = tuple(sorted(float(r) for r in self.runtimes))
        object.__setattr__(self, "runtimes", rts)
        if self.total_count < 1:
            raise InvalidArgumentError("an ECDF needs at least one sample")
        if len(rts) > self.total_count:
            raise InvalidArgumentError("more finite runtimes than samples")
        if any(not math.isfinite(r) for r in rts):
            raise InvalidArgumentError("runtimes must be finite; pass missing values via total_count")
        if self.solved_fraction is None:
            object.__setattr__(self, "solved_fraction", len(rts) / self.total_count)
        elif not 0.0 <= self.solved_fraction <= 1.0:
            raise InvalidArgumentError("solved fraction must lie in [0, 1]")

    def __call__(self, x: float) -> float:
        """Fraction of samples with runtime <= x."""
        return bisect.bisect_right(self.runtimes, x) / self.total_count

    @property
    def right_limit(self) -> float:
        return len(self.runtimes) / self.total_count

    def steps(self) -> list[tuple[float, float]]:
        """Distinct step positions with the curve value reached there."""
        out: list[tuple[float, float]] = []
        for i, r in enumerate(self.runtimes):
            if out and out[-1][0] == r:
                out[-1] = (r, (i + 1) / self.total_count)
            else:
                out.append((r, (i + 1) / self.total_count))
        return out

    def scaled(self, factor: float) -> "EcdfCurve":
        """Same distribution with every runtime (and the cross) multiplied by ``factor``."""
        if not factor > 0:
            raise InvalidArgumentError("scale factor must be > 0")
        return EcdfCurve(
            tuple(r * factor for r in self.runtimes),
            self.total_count,
            None if self.cross_x is None else self.cross_x * factor,
            self.solved_fraction,
        )


TraceKey = tuple[str, str, int, int]


class DataSet(Mapping[TraceKey, RunTrace]):
    """Run traces indexed by ``(algorithm, function_id, dimension, instance_id)``."""

    def __init__(self, traces: Iterable[RunTrace] = ()):
        data: dict[TraceKey, RunTrace] = {}
        for trace in traces:
            if trace.key in data:
                raise DuplicateKeyError(f"duplicate trace key {trace.key}")
            data[trace.key] = trace
        self._data = MappingProxyType(dict(sorted(data.items())))

    def __getitem__(self, key: TraceKey) -> RunTrace:
        return self._data[key]

    def __iter__(self) -> Iterator[TraceKey]:
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def __repr__(self):
        return f"DataSet({len(self)} traces)"

    def traces(self) -> list[RunTrace]:
        return list(self._data.values())

    def algorithms(self) -> list[str]:
        return sorted({k[0] for k in self._data})

    def functions(self, algorithm: str | None = None) -> list[str]:
        return sorted({k[1] for k in self._data if algorithm is None or k[0] == algorithm})

    def dimensions(self, algorithm: str | None = None) -> list[int]:
        return sorted({k[2] for k in self._data if algorithm is None or k[0] == algorithm})

    def group(self, algorithm: str, function_id: str, dimension: int) -> list[RunTrace]:
        """Traces of one (algorithm, function, dimension), ordered by instance id."""
        return [t for (a, f, d, _), t in self._data.items()
                if a == algorithm and f == function_id and d == dimension]

