import math

from hypothesis import given, strategies as st

from runfall.indicator import best_so_far, expand_steps, lower_quantile, noisy_indicator, noisy_window_size

values = st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=1, max_size=200)


def test_best_so_far_examples():
    assert best_so_far([3.0, 2.0, 2.0, 1.0]) == [(1, 3.0), (2, 2.0), (4, 1.0)]
    assert best_so_far([1.0]) == [(1, 1.0)]
    assert best_so_far([1, 2, 3]) == [(1, 1.0)]


@given(values)
def test_best_so_far_is_idempotent(history):
    steps = best_so_far(history)
    assert best_so_far(expand_steps(steps, len(history))) == steps
    assert all(b[0] > a[0] and b[1] < a[1] for a, b in zip(steps, steps[1:]))
    assert steps[0] == (1, float(history[0]))
    assert steps[-1][1] == min(history)


def test_window_size_by_hand():
    # (ln 4)^2 / 2 = 0.9609..., (ln 6)^2 / 2 = 1.6053...
    assert noisy_window_size(1) == 1
    assert noisy_window_size(3) == 2
    assert math.ceil(math.log(1003) ** 2 / 2) == noisy_window_size(1000) == 24


def test_window_size_monotone_and_capped():
    sizes = [noisy_window_size(t) for t in range(1, 5000)]
    assert all(1 <= w <= t for t, w in enumerate(sizes, start=1))
    assert all(b >= a for a, b in zip(sizes, sizes[1:]))


def test_lower_quantile_is_minimum_for_small_windows():
    assert lower_quantile([5.0, 2.0]) == 2.0
    assert lower_quantile(list(range(100, 0, -1))) == 1
    # 101 values: ceil(1.01) = 2nd smallest
    assert lower_quantile(list(range(101))) == 1


def test_noisy_constant_history():
    assert noisy_indicator([5, 5, 5, 5]) == [(1, 5.0)]


def test_noisy_dip_is_kept():
    # t=1: w=1 -> 9; t=2,3: w=2 -> 1; t=4: w=2 -> 9 (the 1 has left the window)
    assert noisy_indicator([9, 1, 9, 9, 9, 9]) == [(1, 9.0), (2, 1.0)]


@given(st.lists(st.floats(-100, 100), min_size=1, max_size=3))
def test_noisy_matches_best_so_far_on_short_prefixes(history):
    # windows of size <= 2 for t <= 3: the 1%-tile is the window minimum
    raw = [min(history[max(0, t - noisy_window_size(t)):t]) for t in range(1, len(history) + 1)]
    assert noisy_indicator(history) == best_so_far(raw)
    if all(b <= a for a, b in zip(history, history[1:])):
        assert noisy_indicator(history) == best_so_far(history)
