import math

import pytest
from hypothesis import given, strategies as st

from runfall.model import InvalidArgumentError, RuntimeEntry
from runfall.runtime import art
from runfall.targets import (
    BudgetSet,
    default_expensive_budgets,
    log_targets,
    parse_target_range,
    runlength_targets,
)


def test_log_targets_default_grid():
    t = log_targets(1e2, 1e-8, 51)
    assert len(t) == 51
    assert t.precisions[0] == 1e2 and t.precisions[-1] == 1e-8
    for a, b in zip(t.precisions, t.precisions[1:]):
        assert a / b == pytest.approx(10 ** 0.2, rel=1e-12)


def test_log_targets_decades():
    assert log_targets(1e2, 1e-2, 5).precisions == (1e2, 1e1, 1e0, 1e-1, 1e-2)


@pytest.mark.parametrize("args", [(1.0, 1.0, 5), (1.0, 2.0, 5), (1.0, 0.0, 5), (10.0, 1.0, 1)])
def test_log_targets_rejects(args):
    with pytest.raises(InvalidArgumentError):
        log_targets(*args)


@given(st.integers(1, 12), st.integers(2, 80))
def test_log_targets_mirror_symmetry(decades, count):
    p = log_targets(10.0 ** decades, 10.0 ** -decades, count).precisions
    for i, v in enumerate(p):
        if v >= 1:
            assert p[-1 - i] == 1 / v


def test_parse_target_range():
    assert parse_target_range("1e2:1e-2:5") == log_targets(1e2, 1e-2, 5)
    with pytest.raises(InvalidArgumentError):
        parse_target_range("1e2:1e-2")


def test_five_budgets():
    assert default_expensive_budgets(5, "five").budgets == (2.5, 6.0, 15.0, 50.0, 250.0)
    assert default_expensive_budgets(1, "five").budgets == (0.5, 1.2, 3.0, 10.0, 50.0)


def test_thirtyone_budgets():
    b = default_expensive_budgets(5, "thirtyone").budgets
    assert len(b) == 31 and b[0] == 2.5 and b[-1] == 250.0
    ratios = [y / x for x, y in zip(b, b[1:])]
    assert ratios == pytest.approx([100 ** (1 / 30)] * 30, rel=1e-12)


def test_budget_set_validation():
    with pytest.raises(InvalidArgumentError):
        BudgetSet((1.0, 1.0))
    with pytest.raises(InvalidArgumentError):
        BudgetSet((0.0, 1.0))


REFERENCE = {1.0: 10.0, 0.1: 100.0, 0.01: 1000.0}


def test_runlength_rule_by_hand():
    assert runlength_targets(REFERENCE, [50, 500]).precisions == (0.1, 0.01)


def test_runlength_budget_beyond_all_arts_takes_final():
    assert runlength_targets(REFERENCE, [5000]).precisions == (0.01,)


def test_runlength_unique_takes_next_harder():
    # both budgets map to 0.1 by rule (i); rule (ii) moves the second to 0.01
    assert runlength_targets(REFERENCE, [20, 30], unique=True).precisions == (0.1, 0.01)
    assert runlength_targets(REFERENCE, [20, 30], unique=False).precisions == (0.1, 0.1)


def test_runlength_with_entries_and_unsolved():
    reference = {1.0: RuntimeEntry((4, 6)), 0.1: RuntimeEntry((40,), (100,)), 0.01: RuntimeEntry((), (100, 100))}
    t = runlength_targets(reference, [1, 5, 200])
    # aRTs 5, 140, inf
    assert t.precisions == (1.0, 0.1, 0.01)
    assert t.budgets == (1.0, 5.0, 200.0)


def test_runlength_empty_reference():
    with pytest.raises(InvalidArgumentError):
        runlength_targets({}, [1.0])


arts = st.one_of(st.floats(1, 1e7), st.just(math.inf))


@given(st.lists(arts, min_size=1, max_size=30),
       st.lists(st.floats(0.5, 1e7), min_size=1, max_size=31, unique=True),
       st.booleans())
def test_runlength_properties(values, budgets, unique):
    reference = {10.0 ** (2 - 0.2 * i): v for i, v in enumerate(values)}
    budgets = sorted(budgets)
    t = runlength_targets(reference, budgets, unique)
    final = min(reference)
    assert all(b <= a for a, b in zip(t.precisions, t.precisions[1:]))
    for budget, p in zip(t.budgets, t.precisions):
        if p != final:
            assert reference[p] > budget
            # nothing easier qualifies (unless already taken under rule (ii))
            easier = [q for q in reference if q > p and reference[q] > budget]
            assert unique and all(q in t.precisions for q in easier) or not easier
    if unique:
        non_final = [p for p in t.precisions if p != final]
        assert len(non_final) == len(set(non_final))


def test_runlength_five_versus_thirtyone_reference_arts():
    # aRT of a reference with aRT(p) = 1/p: targets follow the budgets
    reference = {p: RuntimeEntry((max(1, round(1 / p)),)) for p in log_targets(1e2, 1e-8, 51)}
    t = runlength_targets(reference, default_expensive_budgets(10, "five"), unique=True)
    for budget, p in zip(t.budgets, t.precisions):
        assert art(reference[p]) > budget
