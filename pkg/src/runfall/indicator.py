"""Quality indicators mapping raw evaluation histories to improvement steps."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

NOISY_QUANTILE = 0.01


def best_so_far(history: Sequence[float]) -> list[tuple[int, float]]:
    """Strict improvements of the running minimum as ``(evals, value)`` pairs.

    Evaluation counts are 1-based: the first entry is always ``(1, history[0])``.
    """
    values = np.asarray(history, dtype=float)
    if values.size == 0:
        raise ValueError("empty history")
    running = np.minimum.accumulate(values)
    keep = np.empty(values.size, dtype=bool)
    keep[0] = True
    keep[1:] = running[1:] < running[:-1]
    idx = np.flatnonzero(keep)
    return [(int(i) + 1, float(running[i])) for i in idx]


def noisy_window_size(t: int) -> int:
    """Number of most recent evaluations the noisy indicator looks at after ``t`` evaluations."""
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    w = math.ceil(math.log(t + 3) ** 2 / 2)
    return max(1, min(w, t))


def lower_quantile(values: Sequence[float], q: float = NOISY_QUANTILE) -> float:
    # ceil(q*w)-th smallest, which is the minimum for w <= 1/q
    ordered = sorted(values)
    k = max(1, math.ceil(q * len(ordered)))
    return ordered[k - 1]


def noisy_indicator(history: Sequence[float], q: float = NOISY_QUANTILE) -> list[tuple[int, float]]:
    """Windowed lower 1%-quantile indicator, compressed to its best-so-far improvements."""
    values = [float(v) for v in history]
    if not values:
        raise ValueError("empty history")
    raw = []
    for t in range(1, len(values) + 1):
        w = noisy_window_size(t)
        raw.append(lower_quantile(values[t - w:t], q))
    return best_so_far(raw)


def expand_steps(steps: Sequence[tuple[int, float]], total: int) -> list[float]:
    """Expand improvement steps back into a per-evaluation best-so-far history."""
    out: list[float] = []
    for i, (e, v) in enumerate(steps):
        end = steps[i + 1][0] if i + 1 < len(steps) else total + 1
        out.extend([v] * (end - e))
    return out
