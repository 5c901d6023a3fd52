from __future__ import annotations

import pytest

from runfall.ingest import load_dataset, write_run_logs
from runfall.model import ProblemTriple, RunTrace
from runfall.runtime import derive_seed, make_rng
from runfall.suite import instantiate, random_search

SPHERE_SEED = 20160601


def make_trace(steps, total=None, algorithm="algo", function_id="f1", dimension=5, instance=1,
               reference=0.0):
    steps = tuple(steps)
    return RunTrace(
        triple=ProblemTriple(function_id, dimension, instance),
        algorithm=algorithm,
        reference_value=reference,
        steps=steps,
        total_evaluations=total if total is not None else (steps[-1][0] if steps else 1),
    )


@pytest.fixture(scope="session")
def sphere_logs(tmp_path_factory):
    """Random search on sphere, n=5, 15 instances, 1e6 evaluations each, written as run logs."""
    out = tmp_path_factory.mktemp("sphere5")
    traces = []
    for iid in range(1, 16):
        rng = make_rng(derive_seed(SPHERE_SEED, "run", "random-search", "sphere", 5, iid))
        traces.append(random_search(instantiate("sphere", 5, iid), 1_000_000, rng))
    write_run_logs(traces, out)
    return out


@pytest.fixture(scope="session")
def sphere_dataset(sphere_logs):
    return load_dataset([sphere_logs])


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for report in terminalreporter.stats.get(outcome, []):
            if report.when != "call":
                continue
            props = dict(report.user_properties)
            if "criterion" in props:
                lines.append((props["criterion"], "PASS" if outcome == "passed" else "FAIL",
                              props.get("detail", "")))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, status, detail in sorted(lines, key=lambda x: int(x[0].split(":")[0])):
            terminalreporter.write_line(f"[{status}] criterion {name} {detail}".rstrip())
