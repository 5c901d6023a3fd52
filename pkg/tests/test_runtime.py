import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from runfall.model import DataSet, InvalidArgumentError, RuntimeEntry, UndefinedRuntimeError
from runfall.runtime import (
    art,
    art_ps_form,
    bootstrap_runtimes,
    bootstrap_table,
    derive_seed,
    extract_runtimes,
    hitting_time,
    make_rng,
    scaling_series,
    simulate_restart,
)
from runfall.targets import log_targets

from conftest import make_trace

entries = st.builds(
    RuntimeEntry,
    st.lists(st.integers(1, 10**6), max_size=20).map(tuple),
    st.lists(st.integers(1, 10**6), max_size=20).map(tuple),
).filter(lambda e: 1 <= e.count <= 20)


def brute_art(entry):
    """All evaluations of all trials, divided by the number of successes, in exact arithmetic."""
    return Fraction(sum(entry.successes) + sum(entry.failures), len(entry.successes))


def test_hitting_time_examples():
    trace = make_trace([(1, 5.0), (3, 4.0)], total=10)
    assert hitting_time(trace, 4.0) == 3
    assert hitting_time(trace, 10.0) == 1
    assert hitting_time(trace, 3.9) is None


def test_extract_runtimes_by_hand():
    trace = make_trace([(1, 5.0), (40, 0.5), (900, 0.2)], total=1000)
    table = extract_runtimes(DataSet([trace]), "algo", "f1", 5, [1.0, 0.1])
    assert table[("f1", 5, 1.0)] == RuntimeEntry((40,), ())
    assert table[("f1", 5, 0.1)] == RuntimeEntry((), (1000,))


def test_extract_runtimes_all_hit():
    trace = make_trace([(1, 1.0), (50, -1.0)], reference=-1.0)
    table = extract_runtimes(DataSet([trace]), "algo", "f1", 5, log_targets(1e2, 1e-8, 51))
    assert len(table) == 51
    assert all(not e.failures for e in table.values())


def test_extract_runtimes_empty_group():
    with pytest.raises(InvalidArgumentError):
        extract_runtimes(DataSet(), "algo", "f1", 5, [1.0])


@given(st.lists(st.tuples(st.integers(1, 50), st.floats(-10, 10)), min_size=1, max_size=20),
       st.integers(0, 100))
def test_hitting_times_nested_and_failures_shared(raw, extra):
    steps, best, used = [], math.inf, 0
    for gap, v in raw:
        used += gap
        if v < best:
            steps.append((used, v))
            best = v
    trace = make_trace(steps, total=used + extra)
    targets = log_targets(1e2, 1e-8, 51)
    table = extract_runtimes(DataSet([trace]), "algo", "f1", 5, targets)
    times = [table[("f1", 5, p)].successes for p in targets]
    hit = [t[0] for t in times if t]
    assert hit == sorted(hit)
    # once a target is missed, every harder one is missed too, with the same trial length
    missed = [table[("f1", 5, p)].failures for p in targets if not table[("f1", 5, p)].successes]
    assert all(f == (used + extra,) for f in missed)


def test_art_examples():
    assert art(RuntimeEntry((100, 200), (50,))) == 175.0
    assert art(RuntimeEntry((10, 20, 30))) == 20.0
    assert art(RuntimeEntry((), (5, 5))) == math.inf


def test_art_ps_form_examples():
    assert art_ps_form(100, 100, 0.5) == 200.0
    assert art_ps_form(42.0, None, 1.0) == 42.0
    with pytest.raises(InvalidArgumentError):
        art_ps_form(1.0, 1.0, 0.0)


@given(entries.filter(lambda e: e.successes))
def test_art_identities(entry):
    ms = sum(entry.successes) / len(entry.successes)
    mf = sum(entry.failures) / len(entry.failures) if entry.failures else None
    ps = entry.n_success / entry.count
    assert art(entry) == pytest.approx(art_ps_form(ms, mf, ps), rel=1e-12)
    assert art(entry) == float(brute_art(entry))


def test_simulate_restart_all_successful_returns_observed():
    entry = RuntimeEntry((3, 8, 21))
    rng = make_rng(5)
    for _ in range(200):
        sample = simulate_restart(entry, rng)
        assert sample.runtime in entry.successes and sample.restarts_used == 0


def test_simulate_restart_requires_success():
    with pytest.raises(UndefinedRuntimeError):
        simulate_restart(RuntimeEntry((), (10,)), make_rng(1))
    with pytest.raises(UndefinedRuntimeError):
        bootstrap_runtimes(RuntimeEntry((), (10,)), 5, make_rng(1))


def test_simulate_restart_is_deterministic():
    entry = RuntimeEntry((10, 30), (100, 200, 300))
    assert [simulate_restart(entry, make_rng(9)) for _ in range(3)] == [simulate_restart(entry, make_rng(9))] * 3


def test_simulate_restart_geometric_law():
    # outcome 10 + 100 m has probability 2^-(m+1)
    entry = RuntimeEntry((10,), (100,))
    rng = make_rng(11)
    n = 40000
    counts = Counter(simulate_restart(entry, rng) for _ in range(n))
    for m in range(5):
        p = 2.0 ** -(m + 1)
        observed = sum(c for s, c in counts.items() if s.runtime == 10 + 100 * m and s.restarts_used == m)
        assert abs(observed / n - p) < 4 * math.sqrt(p * (1 - p) / n)


def test_bootstrap_matches_simulate_restart_law():
    entry = RuntimeEntry((10,), (100,))
    samples = bootstrap_runtimes(entry, 40000, make_rng(12))
    for m in range(5):
        p = 2.0 ** -(m + 1)
        assert abs(np.mean(samples == 10 + 100 * m) - p) < 4 * math.sqrt(p * (1 - p) / 40000)


def test_bootstrap_single_sample_equals_simulate_restart():
    entry = RuntimeEntry((10, 40), (100, 7, 300))
    for seed in range(50):
        assert bootstrap_runtimes(entry, 1, make_rng(seed))[0] == simulate_restart(entry, make_rng(seed)).runtime


def test_bootstrap_variance_reduction_full_coverage():
    entry = RuntimeEntry((5, 17, 17, 230, 1000, 4))
    out = bootstrap_runtimes(entry, entry.count, make_rng(3), variance_reduction=True)
    assert sorted(out.tolist()) == sorted(entry.successes)


def test_bootstrap_variance_reduction_first_pick_cycles():
    # successes only: sample k must be exactly trial (k mod K) of the shuffled order
    entry = RuntimeEntry((1, 2, 3))
    out = bootstrap_runtimes(entry, 9, make_rng(4), variance_reduction=True)
    assert out[:3].tolist() == out[3:6].tolist() == out[6:].tolist()


@pytest.mark.parametrize("entry", [
    RuntimeEntry((10,), (100,)),
    RuntimeEntry((120, 3000, 45), (10000,) * 12),
    RuntimeEntry((1, 2, 3, 4), (50, 60)),
])
def test_bootstrap_mean_within_three_standard_errors(entry):
    samples = bootstrap_runtimes(entry, 100_000, make_rng(derive_seed(7, entry)))
    se = samples.std(ddof=1) / math.sqrt(samples.size)
    assert abs(samples.mean() - art(entry)) < 3 * se


def test_bootstrap_table_independent_of_threads():
    from runfall.model import RuntimeTable
    table = RuntimeTable({("f", 2, 10.0 ** -i): RuntimeEntry((i + 1, 5 * i + 2), (100,)) for i in range(8)}
                         | {("f", 2, 1e-9): RuntimeEntry((), (100, 100, 100))})
    one = bootstrap_table(table, 200, seed=99, threads=1)
    four = bootstrap_table(table, 200, seed=99, threads=4)
    assert one[("f", 2, 1e-9)] is None
    for key in table:
        if one[key] is not None:
            assert np.array_equal(one[key], four[key])


def test_derive_seed_distinguishes_keys():
    a = make_rng(derive_seed(1, "f", 2, 0.1)).integers(2**62)
    b = make_rng(derive_seed(1, "f", 2, 0.01)).integers(2**62)
    c = make_rng(derive_seed(2, "f", 2, 0.1)).integers(2**62)
    assert len({a, b, c}) == 3
    assert a == make_rng(derive_seed(1, "f", 2, 0.1)).integers(2**62)


def test_scaling_series():
    traces = []
    for dim, rt in ((20, None), (5, 500), (2, 30)):
        for i in (1, 2):
            steps = [(1, 10.0)] + ([(rt, 0.0)] if rt else [])
            traces.append(make_trace(steps, total=1000, dimension=dim, instance=i))
    points = scaling_series(DataSet(traces), "algo", "f1", [20, 5, 2], 1e-8)
    assert points == [(2, 15.0), (5, 100.0), (20, None)]
