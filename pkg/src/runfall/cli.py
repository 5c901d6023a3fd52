"""Command line front end: ``runfall run|art|targets|ecdf|best|plot``."""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path
from typing import Sequence, TextIO

from . import __version__
from .ecdf import AggregationScope, scope_problems, table_ecdf
from .ingest import LogParseError, dump_table, load_dataset, load_table, write_run_logs
from .model import AggregationError, DataSet, EcdfCurve, InvalidArgumentError, RunfallError, RuntimeTable, TargetSet
from .plot import PlotSpec, render_ecdf_svg, render_scaling_svg
from .refbest import compose_virtual_dataset, select_best
from .runtime import DEFAULT_BOOTSTRAPS, PRNG_ID, ScalingPoint, art, derive_seed, extract_all, make_rng
from .suite import FUNCTIONS, instantiate, parse_function_list, random_search
from .targets import (
    DEFAULT_CANDIDATES,
    BudgetSet,
    default_expensive_budgets,
    default_unique,
    parse_target_range,
    runlength_targets,
)

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2
SEED_ENV = "RUNFALL_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(v: float | None) -> str:
    if v is None:
        return ""
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    if isinstance(v, float) and v.is_integer() and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def _metadata_lines(seed: int | None, n: int | None, **extra) -> list[str]:
    meta = {"generator": f"runfall {__version__}", "prng": PRNG_ID,
            "seed": "none" if seed is None else seed, "N": "none" if n is None else n}
    meta.update(extra)
    return [f"# {k}={'' if v is None else v}" for k, v in meta.items()]


def _emit(text: str, out: str | None, stdout: TextIO) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        raise UsageError(f"--seed is required (or set {SEED_ENV})")
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from None


def _targets(text: str) -> TargetSet:
    try:
        return parse_target_range(text)
    except InvalidArgumentError as exc:
        raise UsageError(str(exc)) from None


def _pick_algorithm(dataset: DataSet, requested: str | None) -> str:
    algorithms = dataset.algorithms()
    if requested is not None:
        if requested not in algorithms:
            raise InvalidArgumentError(f"algorithm {requested!r} not found; have {algorithms}")
        return requested
    if len(algorithms) != 1:
        raise UsageError(f"several algorithms in the data {algorithms}; pick one with --algorithm")
    return algorithms[0]


# --- run ---------------------------------------------------------------------

def cmd_run(args, stdout: TextIO) -> int:
    seed = _seed(args)
    if args.suite != "mini":
        raise UsageError(f"unknown suite {args.suite!r}")
    if args.algorithm != "random-search":
        raise UsageError(f"unknown algorithm {args.algorithm!r}")
    try:
        functions = parse_function_list(args.functions)
    except InvalidArgumentError as exc:
        raise UsageError(str(exc)) from None
    if args.budget < 1 or args.instances < 1:
        raise UsageError("--budget and --instances must be >= 1")
    traces = []
    for fid in functions:
        for dim in sorted(set(args.dim)):
            for iid in range(args.first_instance, args.first_instance + args.instances):
                problem = instantiate(fid, dim, iid)
                rng = make_rng(derive_seed(seed, "run", args.algorithm, fid, dim, iid))
                traces.append(random_search(problem, args.budget, rng, args.algorithm))
    comments = [line[2:] for line in _metadata_lines(seed, None)]
    paths = write_run_logs(traces, args.out, comments=comments)
    stdout.write(f"# seed={seed}\nwrote {len(paths)} run logs to {args.out}\n")
    return EXIT_OK


# --- art ---------------------------------------------------------------------

def cmd_art(args, stdout: TextIO) -> int:
    targets = _targets(args.targets)
    dataset = load_dataset(args.inputs)
    algorithms = [args.algorithm] if args.algorithm else dataset.algorithms()
    lines = _metadata_lines(None, None, targets=args.targets)
    lines.append("algorithm,function,dimension,precision,n_success,K,art")
    for alg in algorithms:
        table = extract_all(dataset, alg, targets,
                            functions=args.function or None, dimensions=args.dim or None)
        for (f, d, p), entry in table.items():
            lines.append(f"{alg},{f},{d},{_fmt(p)},{entry.n_success},{entry.count},{_fmt(art(entry))}")
    _emit("\n".join(lines) + "\n", args.out, stdout)
    return EXIT_OK


# --- targets -----------------------------------------------------------------

def _reference_group(args) -> dict:
    candidates = _targets(args.candidates)
    if args.table:
        table = load_table(Path(args.table).read_text(encoding="utf-8"))
    else:
        if not args.inputs:
            raise UsageError("give reference data with --in or --table")
        dataset = load_dataset(args.inputs)
        alg = _pick_algorithm(dataset, args.algorithm)
        table = extract_all(dataset, alg, candidates, functions=[args.function], dimensions=[args.dim])
    group = table.group(args.function, args.dim)
    if not group:
        raise InvalidArgumentError(f"no reference data for {args.function} in {args.dim}D")
    return group


def _budgets(args, dim: int) -> tuple[BudgetSet, bool]:
    unique = default_unique(args.variant) if args.unique is None else args.unique
    if args.budgets:
        try:
            return BudgetSet(tuple(float(b) for b in args.budgets.split(","))), unique
        except (ValueError, InvalidArgumentError) as exc:
            raise UsageError(f"bad --budgets: {exc}") from None
    return default_expensive_budgets(dim, args.variant), unique


def cmd_targets(args, stdout: TextIO) -> int:
    group = _reference_group(args)
    budgets, unique = _budgets(args, args.dim)
    chosen = runlength_targets(group, budgets, unique)
    lines = _metadata_lines(None, None, function=args.function, dimension=args.dim,
                            variant=args.variant, unique=unique)
    lines.append("budget,precision")
    lines += [f"{_fmt(b)},{_fmt(p)}" for b, p in zip(chosen.budgets, chosen.precisions)]
    _emit("\n".join(lines) + "\n", args.out, stdout)
    return EXIT_OK


# --- ecdf --------------------------------------------------------------------

def ecdf_csv(curve: EcdfCurve, metadata: dict) -> str:
    lines = [f"# {k}={_fmt(v) if isinstance(v, float) else ('' if v is None else v)}"
             for k, v in metadata.items()]
    lines.append(f"# total_count={curve.total_count}")
    lines.append(f"# cross_x={_fmt(curve.cross_x) if curve.cross_x is not None else 'none'}")
    lines.append(f"# solved_fraction={curve.solved_fraction!r}")
    lines.append("x,fraction")
    lines += [f"{_fmt(x)},{frac!r}" for x, frac in curve.steps()]
    return "\n".join(lines) + "\n"


def read_ecdf_csv(text: str) -> tuple[EcdfCurve, dict[str, str]]:
    """Rebuild a curve from :func:`ecdf_csv` output."""
    meta: dict[str, str] = {}
    steps: list[tuple[float, float]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            meta[key.strip()] = value.strip()
            continue
        if line == "x,fraction":
            continue
        try:
            x, frac = line.split(",")
            steps.append((float(x), float(frac)))
        except ValueError:
            raise LogParseError(f"bad ECDF row {line!r}", lineno) from None
    if "total_count" not in meta:
        raise LogParseError("ECDF file lacks '# total_count=' metadata")
    total = int(meta["total_count"])
    runtimes: list[float] = []
    done = 0
    for x, frac in steps:
        count = round(frac * total)
        runtimes.extend([x] * (count - done))
        done = count
    cross = meta.get("cross_x", "none")
    curve = EcdfCurve(
        tuple(runtimes), total,
        None if cross in ("", "none") else float(cross),
        float(meta["solved_fraction"]) if "solved_fraction" in meta else None,
    )
    return curve, meta


def _ecdf_targets(args, dim: int, functions: Sequence[str]):
    targets = _targets(args.targets)
    if not args.runlength_reference:
        return targets
    reference = load_table(Path(args.runlength_reference).read_text(encoding="utf-8"))
    budgets, unique = _budgets(args, dim)
    per_function = {}
    for f in functions:
        group = reference.group(f, dim)
        if not group:
            raise InvalidArgumentError(f"reference table has no data for {f} in {dim}D")
        per_function[f] = runlength_targets(group, budgets, unique)
    return per_function


def cmd_ecdf(args, stdout: TextIO) -> int:
    seed = _seed(args)
    dims = sorted(set(args.dim or []))
    if len(dims) > 1:
        raise AggregationError(f"cannot aggregate over several dimensions {dims}")
    if args.bootstraps < 1:
        raise UsageError("--bootstraps must be >= 1")
    functions = parse_function_list(args.functions) if args.functions else None
    if args.table:
        table = load_table(Path(args.table).read_text(encoding="utf-8"))
        if not dims:
            if len(table.dimensions()) != 1:
                raise AggregationError(f"table spans dimensions {table.dimensions()}; pick one with --dim")
            dims = table.dimensions()
        dim = dims[0]
        functions = functions or [f for f in table.functions() if table.group(f, dim)]
        targets = _ecdf_targets(args, dim, functions)
        problems = []
        for f in functions:
            group = table.group(f, dim)
            for p in (targets if isinstance(targets, TargetSet) else targets[f]):
                if p not in group:
                    raise InvalidArgumentError(f"table has no entry for {f}/{dim}D at precision {p!r}")
                problems.append((f, dim, p))
        algorithm = table.algorithm
    else:
        if not args.inputs:
            raise UsageError("give run logs with --in or a runtime table with --table")
        dataset = load_dataset(args.inputs)
        algorithm = _pick_algorithm(dataset, args.algorithm)
        if not dims:
            available = dataset.dimensions(algorithm)
            if len(available) != 1:
                raise AggregationError(f"data spans dimensions {available}; pick one with --dim")
            dims = available
        dim = dims[0]
        scope = AggregationScope(dim, algorithm, tuple(functions) if functions else None)
        fids = scope.functions or tuple(dataset.functions(algorithm))
        targets = _ecdf_targets(args, dim, fids)
        table, problems = scope_problems(dataset, scope, targets)
    curve = table_ecdf(table, args.bootstraps, seed, problems, args.variance_reduction, args.threads)
    if args.x_unit == "evals-per-dimension":
        curve = curve.scaled(1.0 / dim)
    meta = dict(line[2:].split("=", 1) for line in _metadata_lines(seed, args.bootstraps))
    meta.update(algorithm=algorithm, dimension=dim, targets=args.targets,
                runlength_reference=args.runlength_reference or "none",
                variance_reduction=str(args.variance_reduction).lower(), x_unit=args.x_unit,
                problems=len(problems))
    _emit(ecdf_csv(curve, meta), args.out, stdout)
    return EXIT_OK


# --- best --------------------------------------------------------------------

def cmd_best(args, stdout: TextIO) -> int:
    targets = _targets(args.targets)
    dataset = load_dataset(args.inputs)
    algorithms = dataset.algorithms()
    if not algorithms:
        raise InvalidArgumentError("no run logs found")
    groups = None
    for alg in algorithms:
        have = {(f, d) for f in dataset.functions(alg) for d in dataset.dimensions(alg)
                if dataset.group(alg, f, d)}
        groups = have if groups is None else groups & have
    if args.dim:
        groups = {g for g in groups if g[1] in set(args.dim)}
    if not groups:
        raise InvalidArgumentError("the algorithms share no (function, dimension) group")
    functions = sorted({f for f, _ in groups})
    dims = sorted({d for _, d in groups})
    tables = {}
    for alg in algorithms:
        full = extract_all(dataset, alg, targets, functions, dims)
        tables[alg] = RuntimeTable({k: e for k, e in full.items() if (k[0], k[1]) in groups}, algorithm=alg)
    selection = select_best(tables)
    composed = compose_virtual_dataset(selection, tables, label=args.label)
    lines = _metadata_lines(None, None, targets=args.targets, algorithms=" ".join(algorithms))
    lines.append("function,dimension,precision,algorithm,art")
    lines += [f"{f},{d},{_fmt(p)},{sel.algorithm},{_fmt(sel.art)}" for (f, d, p), sel in selection.items()]
    _emit("\n".join(lines) + "\n", args.out, stdout)
    if args.out_table:
        Path(args.out_table).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out_table).write_text(dump_table(composed), encoding="utf-8")
    return EXIT_OK


# --- plot --------------------------------------------------------------------

def _read_art_csv(path: str) -> list[dict[str, str]]:
    rows = []
    header = None
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        cells = line.split(",")
        if header is None:
            header = cells
            continue
        rows.append(dict(zip(header, cells)))
    if header is None or "art" not in header:
        raise LogParseError(f"{path}: not an aRT CSV")
    return rows


def cmd_plot(args, stdout: TextIO) -> int:
    labels = list(args.label or [])
    if args.kind == "ecdf":
        curves = []
        meta: dict[str, str] = {}
        for i, path in enumerate(args.inputs):
            curve, m = read_ecdf_csv(Path(path).read_text(encoding="utf-8"))
            label = labels[i] if i < len(labels) else m.get("algorithm", Path(path).stem)
            curves.append((label, curve))
            for key in ("seed", "N", "prng", "dimension", "x_unit"):
                if key in m:
                    meta[f"{label}:{key}" if len(args.inputs) > 1 else key] = m[key]
        x_unit = args.x_unit or next((m for k, m in meta.items() if k.endswith("x_unit")), "evals")
        svg = render_ecdf_svg(curves, PlotSpec("ecdf", x_unit=x_unit, title=args.title or "", metadata=meta))
    else:
        if args.precision is None:
            raise UsageError("--precision is required for scaling plots")
        series: dict[str, list[ScalingPoint]] = {}
        for path in args.inputs:
            for row in _read_art_csv(path):
                if float(row["precision"]) != args.precision:
                    continue
                if args.function and row["function"] not in args.function:
                    continue
                value = float(row["art"])
                dim = int(row["dimension"])
                label = f"{row['algorithm']} {row['function']}"
                series.setdefault(label, []).append(
                    ScalingPoint(dim, value / dim if math.isfinite(value) else None))
        if not series:
            raise InvalidArgumentError(f"no aRT rows at precision {args.precision!r}")
        ordered = [(label, sorted(pts)) for label, pts in sorted(series.items())]
        meta = {"prng": PRNG_ID, "seed": "none", "N": "none", "precision": repr(args.precision)}
        svg = render_scaling_svg(ordered, PlotSpec("scaling", title=args.title or "", metadata=meta))
    _emit(svg, args.out, stdout)
    return EXIT_OK


# --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="runfall", description="Fixed-target runtime analysis of benchmark runs.")
    parser.add_argument("--version", action="version", version=f"runfall {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def seed_arg(p):
        p.add_argument("--seed", type=int, help=f"master seed (fallback: ${SEED_ENV})")

    def out_arg(p, what="output file (default: standard output)"):
        p.add_argument("--out", "-o", help=what)

    p = sub.add_parser("run", help="run random search on the mini suite and write .rlog files")
    p.add_argument("--suite", default="mini")
    p.add_argument("--functions", default=f"{FUNCTIONS[0]}..{FUNCTIONS[-1]}",
                   help="comma list and/or ranges like sphere..rastrigin")
    p.add_argument("--dim", type=int, action="append", required=True)
    p.add_argument("--instances", type=int, default=15)
    p.add_argument("--first-instance", type=int, default=1)
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--algorithm", default="random-search")
    seed_arg(p)
    p.add_argument("--out", "-o", required=True, help="output directory")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("art", help="average runtimes as CSV")
    p.add_argument("--in", dest="inputs", action="append", required=True)
    p.add_argument("--targets", default=DEFAULT_CANDIDATES, help="MAX:MIN:COUNT")
    p.add_argument("--algorithm")
    p.add_argument("--function", action="append")
    p.add_argument("--dim", type=int, action="append")
    out_arg(p)
    p.set_defaults(func=cmd_art)

    p = sub.add_parser("targets", help="runlength-based targets from reference data")
    p.add_argument("--in", dest="inputs", action="append")
    p.add_argument("--table", help="reference runtime table (JSON, e.g. from 'best')")
    p.add_argument("--algorithm")
    p.add_argument("--function", required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--candidates", default=DEFAULT_CANDIDATES, help="candidate targets MAX:MIN:COUNT")
    p.add_argument("--variant", choices=("five", "thirtyone"), default="five")
    p.add_argument("--budgets", help="explicit comma-separated budgets instead of --variant")
    p.add_argument("--unique", dest="unique", action="store_true", default=None)
    p.add_argument("--no-unique", dest="unique", action="store_false")
    out_arg(p)
    p.set_defaults(func=cmd_targets)

    p = sub.add_parser("ecdf", help="bootstrapped runtime ECDF for one algorithm and dimension")
    p.add_argument("--in", dest="inputs", action="append")
    p.add_argument("--table", help="runtime table (JSON) instead of run logs")
    p.add_argument("--algorithm")
    p.add_argument("--dim", type=int, action="append")
    p.add_argument("--functions")
    p.add_argument("--targets", default=DEFAULT_CANDIDATES, help="MAX:MIN:COUNT")
    p.add_argument("--runlength-reference", help="reference runtime table for runlength-based targets")
    p.add_argument("--variant", choices=("five", "thirtyone"), default="thirtyone")
    p.add_argument("--budgets")
    p.add_argument("--unique", dest="unique", action="store_true", default=None)
    p.add_argument("--no-unique", dest="unique", action="store_false")
    p.add_argument("--bootstraps", "-N", type=int, default=DEFAULT_BOOTSTRAPS)
    p.add_argument("--variance-reduction", action="store_true")
    p.add_argument("--x-unit", choices=("evals", "evals-per-dimension"), default="evals")
    p.add_argument("--threads", type=int, default=1)
    seed_arg(p)
    out_arg(p)
    p.set_defaults(func=cmd_ecdf)

    p = sub.add_parser("best", help="compose the artificial best algorithm")
    p.add_argument("--in", dest="inputs", action="append", required=True)
    p.add_argument("--targets", default=DEFAULT_CANDIDATES)
    p.add_argument("--dim", type=int, action="append")
    p.add_argument("--label", default="best")
    p.add_argument("--out-table", help="write the composed runtime table (JSON)")
    out_arg(p)
    p.set_defaults(func=cmd_best)

    p = sub.add_parser("plot", help="render ECDF or scaling CSVs to SVG")
    p.add_argument("--kind", choices=("ecdf", "scaling"), required=True)
    p.add_argument("--in", dest="inputs", action="append", required=True)
    p.add_argument("--label", action="append")
    p.add_argument("--title")
    p.add_argument("--x-unit", choices=("evals", "evals-per-dimension"))
    p.add_argument("--precision", type=float, help="target precision for scaling plots")
    p.add_argument("--function", action="append")
    out_arg(p, "output SVG (default: standard output)")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv: Sequence[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not getattr(args, "command", None):
        parser.print_usage(stderr)
        stderr.write("runfall: error: a subcommand is required\n")
        return EXIT_USAGE
    try:
        return args.func(args, stdout)
    except (UsageError, AggregationError) as exc:
        stderr.write(f"runfall {args.command}: error: {exc}\n")
        return EXIT_USAGE
    except (RunfallError, OSError, ValueError) as exc:
        stderr.write(f"runfall {args.command}: error: {exc}\n")
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
