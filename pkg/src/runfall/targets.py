"""Target precision sets: fixed log-spaced grids and runlength-based targets."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .model import InvalidArgumentError, RuntimeEntry, TargetSet
from .runtime import art

FIVE_BUDGET_FACTORS = (0.5, 1.2, 3.0, 10.0, 50.0)


@dataclass(frozen=True)
class BudgetSet:
    budgets: tuple[float, ...]

    def __post_init__(self):
        budgets = tuple(float(b) for b in self.budgets)
        object.__setattr__(self, "budgets", budgets)
        if not budgets:
            raise InvalidArgumentError("empty budget set")
        if any(not b > 0 for b in budgets):
            raise InvalidArgumentError("budgets must be > 0")
        if any(b <= a for a, b in zip(budgets, budgets[1:])):
            raise InvalidArgumentError("budgets must be strictly increasing")

    def __iter__(self):
        return iter(self.budgets)

    def __len__(self):
        return len(self.budgets)


def log_targets(max_precision: float, min_precision: float, count: int) -> TargetSet:
    """``count`` precisions uniform in log10 from ``max_precision`` down to ``min_precision``.

    >>> log_targets(1e2, 1e-2, 5).precisions
    (100.0, 10.0, 1.0, 0.1, 0.01)
    """
    if not (math.isfinite(max_precision) and min_precision > 0 and max_precision > min_precision):
        raise InvalidArgumentError("need max_precision > min_precision > 0")
    if count < 2:
        raise InvalidArgumentError("need at least two targets")
    hi, lo = math.log10(max_precision), math.log10(min_precision)
    exponents = [(hi * (count - 1 - i) + lo * i) / (count - 1) for i in range(count)]
    # 1 / 10**|e| below one keeps mirrored grids exact reciprocals and decades exact
    precisions = [10.0 ** e if e >= 0 else 1.0 / 10.0 ** -e for e in exponents]
    # pin the endpoints to the requested values
    precisions[0], precisions[-1] = float(max_precision), float(min_precision)
    return TargetSet(tuple(precisions))


def parse_target_range(text: str) -> TargetSet:
    """Parse ``MAX:MIN:COUNT`` into a log-spaced target set."""
    try:
        hi, lo, count = text.split(":")
        return log_targets(float(hi), float(lo), int(count))
    except ValueError as exc:
        raise InvalidArgumentError(f"bad target range {text!r}, expected MAX:MIN:COUNT ({exc})") from None


DEFAULT_CANDIDATES = "1e2:1e-8:51"


def default_expensive_budgets(dimension: int, variant: str = "five") -> BudgetSet:
    if dimension < 1:
        raise InvalidArgumentError("dimension must be >= 1")
    if variant == "five":
        return BudgetSet(tuple(f * dimension for f in FIVE_BUDGET_FACTORS))
    if variant == "thirtyone":
        budgets = np.logspace(math.log10(0.5 * dimension), math.log10(50.0 * dimension), 31)
        budgets[0], budgets[-1] = 0.5 * dimension, 50.0 * dimension
        return BudgetSet(tuple(float(b) for b in budgets))
    raise InvalidArgumentError(f"unknown budget variant {variant!r}")


def default_unique(variant: str) -> bool:
    return variant == "five"


def runlength_targets(reference: Mapping[float, RuntimeEntry | float], budgets: BudgetSet | Sequence[float],
                      unique: bool = True) -> TargetSet:
    """Pick, per budget, the easiest target whose reference aRT exceeds the budget.

    ``reference`` maps candidate precisions to the reference algorithm's
    runtime entries (or directly to aRT values). Budgets are processed in
    increasing order; with ``unique`` a target chosen for a smaller budget is
    skipped. When no candidate qualifies, the final (smallest) precision is used.
    """
    if not reference:
        raise InvalidArgumentError("empty candidate target set")
    if not isinstance(budgets, BudgetSet):
        budgets = BudgetSet(tuple(budgets))
    candidates = sorted(reference, reverse=True)
    arts = {}
    for p in candidates:
        v = reference[p]
        arts[p] = art(v) if isinstance(v, RuntimeEntry) else float(v)
    final = candidates[-1]
    chosen: list[float] = []
    for budget in budgets:
        pick = final
        for p in candidates:
            if arts[p] > budget and not (unique and p in chosen):
                pick = p
                break
        chosen.append(pick)
    return TargetSet(tuple(chosen), origin="runlength", budgets=budgets.budgets)
