"""Reading and writing ``.rlog`` run logs, and assembling datasets from them.

Format (version 1), UTF-8, one record per line, ``#`` starts a comment::

    format: 1
    suite: mini
    algorithm: random-search
    function: sphere
    dimension: 5
    instance: 1
    reference: -42.25

    1 113.5
    4 80.25
    total: 1000

Data lines hold ``<evals> <indicator value>``; raw values are accepted and
reduced to their best-so-far improvements on load.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .model import (
    DataSet,
    DuplicateKeyError,
    InvalidArgumentError,
    ProblemTriple,
    RunfallError,
    RunTrace,
    RuntimeEntry,
    RuntimeTable,
)

FORMAT_VERSION = 1
EXTENSION = ".rlog"
HEADER_KEYS = ("format", "suite", "algorithm", "function", "dimension", "instance", "reference")


class LogParseError(RunfallError):
    def __init__(self, message: str, lineno: int | None = None, path: str | None = None):
        self.message = message
        self.lineno = lineno
        self.path = path
        where = ""
        if path:
            where += f"{path}:"
        if lineno is not None:
            where += f"{lineno}:"
        super().__init__(f"{where} {message}" if where else message)


class DatasetLoadError(RunfallError):
    def __init__(self, errors: list[LogParseError]):
        self.errors = errors
        super().__init__("\n".join(str(e) for e in errors))


@dataclass(frozen=True)
class LogHeader:
    format_version: int
    suite: str
    algorithm: str
    function_id: str
    dimension: int
    instance_id: int
    reference_value: float


def _int(text: str, lineno: int, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise LogParseError(f"{what} is not an integer: {text!r}", lineno) from None


def _float(text: str, lineno: int, what: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise LogParseError(f"{what} is not a number: {text!r}", lineno) from None


def _parse_header(fields: dict[str, tuple[str, int]], lineno: int) -> LogHeader:
    for key in HEADER_KEYS:
        if key not in fields:
            raise LogParseError(f"missing header key {key!r}", lineno)
    version = _int(*fields["format"], "format")
    if version != FORMAT_VERSION:
        raise LogParseError(f"unsupported format version {version}", fields["format"][1])
    dimension = _int(*fields["dimension"], "dimension")
    if dimension < 1:
        raise LogParseError("dimension must be >= 1", fields["dimension"][1])
    instance = _int(*fields["instance"], "instance")
    if instance < 0:
        raise LogParseError("instance must be >= 0", fields["instance"][1])
    return LogHeader(
        format_version=version,
        suite=fields["suite"][0],
        algorithm=fields["algorithm"][0],
        function_id=fields["function"][0],
        dimension=dimension,
        instance_id=instance,
        reference_value=_float(*fields["reference"], "reference"),
    )


def parse_run_log(data: bytes | str) -> RunTrace:
    """Parse one run log into a best-so-far :class:`RunTrace`."""
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise LogParseError(f"not valid UTF-8: {exc}") from None
    else:
        text = data

    fields: dict[str, tuple[str, int]] = {}
    header: LogHeader | None = None
    records: list[tuple[int, float]] = []
    total: int | None = None
    lineno = 0
    for lineno, line in enumerate(text.split("\n"), start=1):
        line = line.split("#", 1)[0].strip()
        if header is None:
            if not line:
                if fields:
                    header = _parse_header(fields, lineno)
                continue
            key, sep, value = line.partition(":")
            key = key.strip()
            if not sep:
                raise LogParseError(f"expected 'key: value' header line, got {line!r}", lineno)
            if key not in HEADER_KEYS:
                raise LogParseError(f"unknown header key {key!r}", lineno)
            if key in fields:
                raise LogParseError(f"duplicate header key {key!r}", lineno)
            fields[key] = (value.strip(), lineno)
            continue
        if not line:
            continue
        if total is not None:
            raise LogParseError("content after footer line", lineno)
        if line.startswith("total:"):
            total = _int(line[len("total:"):].strip(), lineno, "total")
            continue
        parts = line.split()
        if len(parts) != 2:
            raise LogParseError(f"expected '<evals> <value>', got {line!r}", lineno)
        evals = _int(parts[0], lineno, "evals")
        value = _float(parts[1], lineno, "indicator value")
        if evals < 1:
            raise LogParseError("evals must be >= 1", lineno)
        if records and evals <= records[-1][0]:
            raise LogParseError(f"evals not strictly increasing ({records[-1][0]} -> {evals})", lineno)
        records.append((evals, value))

    if header is None:
        if fields:
            raise LogParseError("missing blank line after header", lineno)
        raise LogParseError("empty log", lineno)
    if total is None:
        raise LogParseError("missing footer line 'total: <evals>'", lineno)
    if not records:
        raise LogParseError("no data lines", lineno)
    if total < records[-1][0]:
        raise LogParseError(f"footer total {total} < last evals {records[-1][0]}", lineno)

    steps: list[tuple[int, float]] = []
    for evals, value in records:
        if not steps or value < steps[-1][1]:
            steps.append((evals, value))
    try:
        return RunTrace(
            triple=ProblemTriple(header.function_id, header.dimension, header.instance_id),
            algorithm=header.algorithm,
            reference_value=header.reference_value,
            steps=tuple(steps),
            total_evaluations=total,
            suite=header.suite,
        )
    except InvalidArgumentError as exc:
        raise LogParseError(str(exc), lineno) from None


def write_run_log(trace: RunTrace, comments: Iterable[str] = ()) -> bytes:
    if not trace.steps:
        raise InvalidArgumentError("cannot write a trace without evaluations")
    t = trace.triple
    for name in (trace.suite, trace.algorithm, t.function_id):
        if not name or name != name.strip() or any(c in name for c in "#\n\r"):
            raise InvalidArgumentError(f"name {name!r} cannot be written to a run log header")
    lines = [f"# {c}" for c in comments]
    lines += [
        f"format: {FORMAT_VERSION}",
        f"suite: {trace.suite}",
        f"algorithm: {trace.algorithm}",
        f"function: {t.function_id}",
        f"dimension: {t.dimension}",
        f"instance: {t.instance_id}",
        f"reference: {trace.reference_value!r}",
        "",
    ]
    # repr() is the shortest round-tripping decimal form
    lines += [f"{e} {v!r}" for e, v in trace.steps]
    lines.append(f"total: {trace.total_evaluations}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def run_log_name(trace: RunTrace) -> str:
    t = trace.triple
    return f"{trace.algorithm}_{t.function_id}_d{t.dimension}_i{t.instance_id}{EXTENSION}"


def write_run_logs(traces: Iterable[RunTrace], directory: str | os.PathLike,
                   comments: Iterable[str] = ()) -> list[Path]:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    comments = list(comments)
    paths = []
    for trace in traces:
        path = out / run_log_name(trace)
        path.write_bytes(write_run_log(trace, comments))
        paths.append(path)
    return paths


def find_run_logs(paths: Iterable[str | os.PathLike]) -> list[Path]:
    """Expand files and directories (recursively, ``.rlog`` only) into a sorted file list."""
    found: set[Path] = set()
    for p in paths:
        p = Path(p)
        if p.is_dir():
            found.update(q for q in p.rglob(f"*{EXTENSION}") if q.is_file())
        elif p.is_file():
            found.add(p)
        else:
            raise FileNotFoundError(str(p))
    return sorted(found)


def load_dataset(paths: Iterable[str | os.PathLike], allow_repetitions: bool = False) -> DataSet:
    """Load every run log under ``paths`` into a :class:`DataSet`.

    Parse failures are collected and raised together. With
    ``allow_repetitions``, a second run on an already present instance gets a
    fresh instance id (flagged through ``RunTrace.repetition_of``) instead of
    raising :class:`DuplicateKeyError`.
    """
    errors: list[LogParseError] = []
    traces: list[tuple[Path, RunTrace]] = []
    for path in find_run_logs(paths):
        try:
            traces.append((path, parse_run_log(path.read_bytes())))
        except LogParseError as exc:
            errors.append(LogParseError(exc.message, exc.lineno, str(path)))
    if errors:
        raise DatasetLoadError(errors)

    seen: dict[tuple, Path] = {}
    final: list[RunTrace] = []
    repeats: list[RunTrace] = []
    for path, trace in traces:
        if trace.key in seen:
            if not allow_repetitions:
                raise DuplicateKeyError(
                    f"duplicate run {trace.key} in {seen[trace.key]} and {path}"
                )
            repeats.append(trace)
            continue
        seen[trace.key] = path
        final.append(trace)
    for trace in repeats:
        a, f, d, i = trace.key
        used = {k[3] for k in seen if k[:3] == (a, f, d)}
        new_id = max(used) + 1
        synthetic = RunTrace(
            triple=ProblemTriple(f, d, new_id),
            algorithm=a,
            reference_value=trace.reference_value,
            steps=trace.steps,
            total_evaluations=trace.total_evaluations,
            suite=trace.suite,
            repetition_of=i,
        )
        seen[synthetic.key] = Path("<repetition>")
        final.append(synthetic)
    return DataSet(final)


TABLE_FORMAT = "runfall-runtime-table/1"


def dump_table(table: RuntimeTable) -> str:
    """Serialize a runtime table to JSON (precisions as shortest round-trip strings)."""
    rows = [
        {
            "function": f,
            "dimension": d,
            "precision": repr(p),
            "successes": list(e.successes),
            "failures": list(e.failures),
        }
        for (f, d, p), e in table.items()
    ]
    return json.dumps({"format": TABLE_FORMAT, "algorithm": table.algorithm, "entries": rows}, indent=1) + "\n"


def load_table(text: str) -> RuntimeTable:
    try:
        doc = json.loads(text)
        if doc.get("format") != TABLE_FORMAT:
            raise LogParseError(f"not a runtime table file (format {doc.get('format')!r})")
        entries = {
            (row["function"], int(row["dimension"]), float(row["precision"])):
                RuntimeEntry(tuple(row["successes"]), tuple(row["failures"]))
            for row in doc["entries"]
        }
        return RuntimeTable(entries, algorithm=doc.get("algorithm", ""))
    except (ValueError, KeyError, TypeError, InvalidArgumentError) as exc:
        if isinstance(exc, LogParseError):
            raise
        raise LogParseError(f"malformed runtime table: {exc}") from None
