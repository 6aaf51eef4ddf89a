"""Minimal self-contained SVG emitters: spectrum overlay, basin heatmap, trace chart."""

from __future__ import annotations

import math
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .dynamics import CellStatus, EscapeGrid
from .spectral import AnalyticCurve, PseudospectrumGrid

SIZE = 640
PAD = 40

# perceptual-ish ramp, dark to light
_RAMP = [(13, 8, 135), (126, 3, 168), (204, 71, 120), (248, 149, 64), (240, 249, 33)]


def _f(x: float) -> str:
    return f"{x:.3f}".rstrip("0").rstrip(".")


def _ramp(u: float) -> str:
    u = min(max(u, 0.0), 1.0) * (len(_RAMP) - 1)
    i = min(int(u), len(_RAMP) - 2)
    t = u - i
    c = [round(a + (b - a) * t) for a, b in zip(_RAMP[i], _RAMP[i + 1])]
    return "#%02x%02x%02x" % tuple(c)


class _Canvas:
    def __init__(self, window: Tuple[float, float, float, float], title: str):
        self.xmin, self.xmax, self.ymin, self.ymax = window
        self.w = SIZE - 2 * PAD
        self.h = SIZE - 2 * PAD
        self.parts: List[str] = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
            f'viewBox="0 0 {SIZE} {SIZE}">',
            f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>',
            f'<text x="{PAD}" y="{PAD - 14}" font-family="sans-serif" font-size="14">{title}</text>',
        ]

    def px(self, x: float) -> float:
        return PAD + (x - self.xmin) / (self.xmax - self.xmin) * self.w

    def py(self, y: float) -> float:
        return PAD + (self.ymax - y) / (self.ymax - self.ymin) * self.h

    def frame(self) -> None:
        self.parts.append(f'<rect x="{PAD}" y="{PAD}" width="{self.w}" height="{self.h}" '
                          'fill="none" stroke="black"/>')
        for x, anchor in ((self.xmin, "start"), (self.xmax, "end")):
            self.parts.append(f'<text x="{_f(self.px(x))}" y="{SIZE - PAD + 16}" font-size="11" '
                              f'font-family="sans-serif" text-anchor="{anchor}">{_f(x)}</text>')
        for y in (self.ymin, self.ymax):
            self.parts.append(f'<text x="{PAD - 4}" y="{_f(self.py(y))}" font-size="11" '
                              f'font-family="sans-serif" text-anchor="end">{_f(y)}</text>')

    def polyline(self, pts: Iterable[complex], color: str, width: float = 1.5) -> None:
        coords = " ".join(f"{_f(self.px(z.real))},{_f(self.py(z.imag))}" for z in pts)
        self.parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" '
                          f'stroke-width="{width}"/>')

    def circle(self, z: complex, r: float, color: str, fill: str = "none") -> None:
        self.parts.append(f'<circle cx="{_f(self.px(z.real))}" cy="{_f(self.py(z.imag))}" r="{_f(r)}" '
                          f'fill="{fill}" stroke="{color}"/>')

    def finish(self) -> str:
        self.frame()
        self.parts.append("</svg>")
        return "\n".join(self.parts) + "\n"


def _heat_rows(c: _Canvas, x: np.ndarray, y: np.ndarray, colors: Sequence[Sequence[str]]) -> None:
    # merge horizontal runs of one colour into a single rect
    dx = (c.xmax - c.xmin) / len(x) / (c.xmax - c.xmin) * c.w
    dy = (c.ymax - c.ymin) / len(y) / (c.ymax - c.ymin) * c.h
    for i in range(len(y)):
        row = colors[i]
        top = c.py(y[i]) - dy / 2
        j = 0
        while j < len(row):
            k = j
            while k + 1 < len(row) and row[k + 1] == row[j]:
                k += 1
            left = c.px(x[j]) - dx / 2
            c.parts.append(f'<rect x="{_f(left)}" y="{_f(top)}" width="{_f(dx * (k - j + 1) + 0.01)}" '
                           f'height="{_f(dy + 0.01)}" fill="{row[j]}"/>')
            j = k + 1


def spectrum_svg(eigenvalues: Sequence[complex], curve: AnalyticCurve,
                 window: Tuple[float, float, float, float],
                 pseudo: Optional[PseudospectrumGrid] = None, title: str = "spectrum") -> str:
    c = _Canvas(window, title)
    if pseudo is not None:
        logs = np.log10(np.maximum(pseudo.values, 1e-16))
        lo, hi = float(logs.min()), float(logs.max())
        span = hi - lo if hi > lo else 1.0
        colors = [[_ramp((v - lo) / span) for v in row] for row in logs]
        _heat_rows(c, pseudo.x, pseudo.y, colors)
    c.polyline(curve.samples, "#1f77b4", 2.0)
    c.circle(0j, 3, "#1f77b4", "#1f77b4")
    for z in eigenvalues:
        if c.xmin <= z.real <= c.xmax and c.ymin <= z.imag <= c.ymax:
            c.circle(z, 2.2, "#d62728", "#d62728")
    return c.finish()


_STATUS_COLORS = {
    int(CellStatus.CONVERGED_TO_ZERO): "#3b528b",
    int(CellStatus.ESCAPED): "#fde725",
    int(CellStatus.UNDECIDED): "#888888",
}


def basin_svg(grid: EscapeGrid, title: str = "basin of 0 for g(z) = z - z^2") -> str:
    c = _Canvas(grid.window, title)
    colors = [[_STATUS_COLORS[int(s)] for s in row] for row in grid.status]
    _heat_rows(c, grid.x, grid.y, colors)
    # parameter disk |a - 1/4| < 1/4
    ring = [0.25 + 0.25 * complex(math.cos(t), math.sin(t)) for t in np.linspace(0, 2 * math.pi, 241)]
    c.polyline(ring, "#e6194b", 2.0)
    return c.finish()


def trace_svg(trace_r: Sequence[float], sampled: Sequence[float], title: str = "sup |phi_n - 1|") -> str:
    """Log-scale chart of bounds and sampled sups against n."""
    vals = [v for v in list(trace_r) + list(sampled) if v > 0]
    n = max(len(trace_r), len(sampled), 1)
    lo = math.floor(math.log10(min(vals))) if vals else -1
    hi = math.ceil(math.log10(max(vals))) if vals else 1
    if hi <= lo:
        hi = lo + 1
    c = _Canvas((1.0, float(max(n, 2)), float(lo), float(hi)), title)
    for series, color in ((trace_r, "#d62728"), (sampled, "#1f77b4")):
        pts = [complex(k + 1, math.log10(v)) for k, v in enumerate(series) if v > 0]
        if pts:
            c.polyline(pts, color)
    return c.finish()
