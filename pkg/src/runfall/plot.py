"""Deterministic SVG rendering of ECDF and scaling plots.

No plotting library is involved: coordinates are formatted with a fixed
number of decimals so identical input gives byte-identical documents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence
from xml.sax.saxutils import escape, quoteattr

from .model import EcdfCurve, InvalidArgumentError
from .runtime import ScalingPoint

WIDTH, HEIGHT = 800, 600
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 80, 180, 40, 70
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f")
DOT_OFFSET = 2.0


@dataclass(frozen=True)
class PlotSpec:
    kind: str = "ecdf"
    log_x: bool = True
    log_y: bool = True
    x_unit: str = "evals"
    title: str = ""
    metadata: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("ecdf", "scaling"):
            raise InvalidArgumentError(f"unknown plot kind {self.kind!r}")
        if self.x_unit not in ("evals", "evals-per-dimension"):
            raise InvalidArgumentError(f"unknown x unit {self.x_unit!r}")


def _f(v: float) -> str:
    return f"{v:.2f}"


class _Axis:
    def __init__(self, lo: float, hi: float, log: bool, start: float, stop: float):
        if log:
            lo, hi = math.floor(math.log10(lo)), math.ceil(math.log10(hi))
            if hi <= lo:
                hi = lo + 1
        elif hi <= lo:
            hi = lo + 1
        self.lo, self.hi, self.log = lo, hi, log
        self.start, self.stop = start, stop

    def __call__(self, v: float) -> float:
        u = math.log10(v) if self.log else v
        return self.start + (u - self.lo) / (self.hi - self.lo) * (self.stop - self.start)

    def ticks(self) -> list[tuple[float, str]]:
        if self.log:
            return [(10.0 ** e, f"1e{e}") for e in range(int(self.lo), int(self.hi) + 1)]
        step = (self.hi - self.lo) / 5
        return [(self.lo + i * step, f"{self.lo + i * step:g}") for i in range(6)]


def _frame(x_axis: _Axis, y_axis: _Axis, x_label: str, y_label: str, title: str,
           metadata: Mapping[str, object]) -> list[str]:
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" '
        f'width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">',
    ]
    if metadata:
        out.append("<metadata>")
        out.extend(f"<entry key={quoteattr(str(k))}>{escape(str(v))}</entry>" for k, v in metadata.items())
        out.append("</metadata>")
    out.append(f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>')
    x0, x1, y0, y1 = x_axis.start, x_axis.stop, y_axis.start, y_axis.stop
    out.append(f'<rect class="frame" x="{_f(x0)}" y="{_f(y1)}" width="{_f(x1 - x0)}" '
               f'height="{_f(y0 - y1)}" fill="none" stroke="black"/>')
    for v, label in x_axis.ticks():
        x = x_axis(v)
        out.append(f'<line class="grid" x1="{_f(x)}" y1="{_f(y0)}" x2="{_f(x)}" y2="{_f(y1)}" stroke="#dddddd"/>')
        out.append(f'<text x="{_f(x)}" y="{_f(y0 + 18)}" text-anchor="middle">{escape(label)}</text>')
    for v, label in y_axis.ticks():
        y = y_axis(v)
        out.append(f'<line class="grid" x1="{_f(x0)}" y1="{_f(y)}" x2="{_f(x1)}" y2="{_f(y)}" stroke="#dddddd"/>')
        out.append(f'<text x="{_f(x0 - 6)}" y="{_f(y + 4)}" text-anchor="end">{escape(label)}</text>')
    out.append(f'<text x="{_f((x0 + x1) / 2)}" y="{_f(HEIGHT - 20)}" text-anchor="middle">{escape(x_label)}</text>')
    out.append(f'<text x="20" y="{_f((y0 + y1) / 2)}" text-anchor="middle" '
               f'transform="rotate(-90 20 {_f((y0 + y1) / 2)})">{escape(y_label)}</text>')
    if title:
        out.append(f'<text x="{_f((x0 + x1) / 2)}" y="24" text-anchor="middle">{escape(title)}</text>')
    return out


def _legend(labels: Sequence[str]) -> list[str]:
    out = []
    x = WIDTH - MARGIN_RIGHT + 16
    for i, label in enumerate(labels):
        y = MARGIN_TOP + 16 + 20 * i
        color = COLORS[i % len(COLORS)]
        out.append(f'<line x1="{x}" y1="{y}" x2="{x + 24}" y2="{y}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{x + 30}" y="{y + 4}">{escape(label)}</text>')
    return out


def render_ecdf_svg(curves: Sequence[tuple[str, EcdfCurve]], spec: PlotSpec | None = None) -> str:
    """Semilog-x step plot of one or more ECDFs with cross and solved-fraction markers."""
    spec = spec or PlotSpec("ecdf")
    if not curves:
        raise InvalidArgumentError("nothing to plot")
    xs = [r for _, c in curves for r in c.runtimes] + [c.cross_x for _, c in curves if c.cross_x]
    hi = max(xs) if xs else 10.0
    lo = min(xs) if xs else 1.0
    if spec.log_x:
        lo = max(lo, 1e-300)
    x_axis = _Axis(lo, hi * DOT_OFFSET * 1.01, spec.log_x, MARGIN_LEFT, WIDTH - MARGIN_RIGHT)
    y_axis = _Axis(0.0, 1.0, False, HEIGHT - MARGIN_BOTTOM, MARGIN_TOP)
    x_label = "function evaluations" if spec.x_unit == "evals" else "function evaluations / dimension"
    out = _frame(x_axis, y_axis, x_label, "fraction of problems solved", spec.title, spec.metadata)
    left = x_axis(10.0 ** x_axis.lo) if spec.log_x else x_axis(x_axis.lo)
    for i, (label, curve) in enumerate(curves):
        color = COLORS[i % len(COLORS)]
        points = [(left, y_axis(0.0))]
        level = 0.0
        for x, frac in curve.steps():
            px = x_axis(x)
            points.append((px, y_axis(level)))
            points.append((px, y_axis(frac)))
            level = frac
        end = max(curve.runtimes) if curve.runtimes else None
        if end is not None:
            points.append((x_axis(end * DOT_OFFSET), y_axis(level)))
        coords = " ".join(f"{_f(px)},{_f(py)}" for px, py in points)
        out.append(f'<polyline class="ecdf" data-label={quoteattr(label)} points="{coords}" '
                   f'fill="none" stroke="{color}" stroke-width="2"/>')
        if curve.cross_x is not None:
            cx, cy = x_axis(curve.cross_x), y_axis(curve(curve.cross_x))
            out.append(f'<path class="cross" d="M{_f(cx - 6)},{_f(cy - 6)} L{_f(cx + 6)},{_f(cy + 6)} '
                       f'M{_f(cx - 6)},{_f(cy + 6)} L{_f(cx + 6)},{_f(cy - 6)}" stroke="{color}" stroke-width="2"/>')
        if end is not None:
            dx, dy = x_axis(end * DOT_OFFSET), y_axis(curve.solved_fraction)
            out.append(f'<circle class="solved-dot" cx="{_f(dx)}" cy="{_f(dy)}" r="4" fill="{color}"/>')
    out.extend(_legend([label for label, _ in curves]))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_scaling_svg(series: Sequence[tuple[str, Sequence[ScalingPoint]]], spec: PlotSpec | None = None) -> str:
    """Log-log plot of aRT/dimension versus dimension; missing points become arrows at the top."""
    spec = spec or PlotSpec("scaling")
    if not series or all(not pts for _, pts in series):
        raise InvalidArgumentError("nothing to plot")
    dims = [p.dimension for _, pts in series for p in pts]
    vals = [p.art_per_dimension for _, pts in series for p in pts if p.art_per_dimension is not None]
    y_lo, y_hi = (min(vals), max(vals)) if vals else (1.0, 10.0)
    if spec.log_y:
        y_hi = y_hi * 1.5
    x_axis = _Axis(min(dims), max(dims), spec.log_x, MARGIN_LEFT, WIDTH - MARGIN_RIGHT)
    y_axis = _Axis(y_lo, y_hi, spec.log_y, HEIGHT - MARGIN_BOTTOM, MARGIN_TOP)
    out = _frame(x_axis, y_axis, "dimension", "aRT / dimension", spec.title, spec.metadata)
    top = MARGIN_TOP + 4
    for i, (label, pts) in enumerate(series):
        color = COLORS[i % len(COLORS)]
        run: list[str] = []
        segments = []
        for p in pts:
            if p.art_per_dimension is None:
                if len(run) > 1:
                    segments.append(run)
                run = []
                continue
            run.append(f"{_f(x_axis(p.dimension))},{_f(y_axis(p.art_per_dimension))}")
        if len(run) > 1:
            segments.append(run)
        for seg in segments:
            out.append(f'<polyline class="scaling" data-label={quoteattr(label)} points="{" ".join(seg)}" '
                       f'fill="none" stroke="{color}" stroke-width="2"/>')
        for p in pts:
            x = x_axis(p.dimension)
            if p.art_per_dimension is None:
                out.append(f'<path class="missing-arrow" d="M{_f(x)},{_f(top + 24)} L{_f(x)},{_f(top)} '
                           f'M{_f(x - 5)},{_f(top + 7)} L{_f(x)},{_f(top)} L{_f(x + 5)},{_f(top + 7)}" '
                           f'stroke="{color}" stroke-width="2" fill="none"/>')
            else:
                y = y_axis(p.art_per_dimension)
                out.append(f'<circle class="marker" cx="{_f(x)}" cy="{_f(y)}" r="4" fill="{color}"/>')
    out.extend(_legend([label for label, _ in series]))
    out.append("</svg>")
    return "\n".join(out) + "\n"
