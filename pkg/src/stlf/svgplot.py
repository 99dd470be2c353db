"""Dependency-free SVG scatter with a least-squares trend line.

Each point is one ``<circle>`` and the trend is the only ``<line>`` element.
Coordinates are written with ``repr`` so the exact data-to-pixel mapping,
which is stored on the ``plot-area`` group, can be inverted by a reader.
"""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

from .regression import CoefficientVector

WIDTH, HEIGHT = 640, 480
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 70, 20, 30, 60
N_TICKS = 5


def _padded(lo: float, hi: float):
    span = hi - lo
    pad = 0.05 * span if span > 0 else max(1.0, abs(lo) * 0.05)
    return lo - pad, hi + pad


class _Axes:
    def __init__(self, xlim, ylim):
        self.x0, self.x1 = xlim
        self.y0, self.y1 = ylim
        self.left = MARGIN_LEFT
        self.top = MARGIN_TOP
        self.width = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
        self.height = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def px(self, x: float) -> float:
        return self.left + (x - self.x0) / (self.x1 - self.x0) * self.width

    def py(self, y: float) -> float:
        return self.top + (self.y1 - y) / (self.y1 - self.y0) * self.height


def _f(v: float) -> str:
    return repr(float(v))


def render_scatter_svg(
    x: Sequence[float],
    y: Sequence[float],
    trend: CoefficientVector,
    *,
    title: str = "Temperature vs next-hour demand",
    xlabel: str = "Temperature (°C)",
    ylabel: str = "Demand (MW)",
) -> str:
    """SVG 1.1 document text for the scatter of ``(x, y)`` and ``trend``."""
    if len(x) != len(y) or not x:
        raise ValueError("x and y must be non-empty and of equal length")
    b1, b2 = trend.intercept, trend.coefficients[0]
    xmin, xmax = min(x), max(x)
    line_y = (b1 + b2 * xmin, b1 + b2 * xmax)
    ax = _Axes(_padded(xmin, xmax), _padded(min(min(y), *line_y), max(max(y), *line_y)))

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f"<title>{escape(title)}</title>",
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<g id="plot-area" data-x-min="{_f(ax.x0)}" data-x-max="{_f(ax.x1)}" '
        f'data-y-min="{_f(ax.y0)}" data-y-max="{_f(ax.y1)}" data-left="{ax.left}" '
        f'data-top="{ax.top}" data-width="{ax.width}" data-height="{ax.height}">',
        f'<rect x="{ax.left}" y="{ax.top}" width="{ax.width}" height="{ax.height}" '
        f'fill="none" stroke="black" stroke-width="1"/>',
    ]

    ticks = []
    for i in range(N_TICKS):
        tx = ax.x0 + (ax.x1 - ax.x0) * i / (N_TICKS - 1)
        ty = ax.y0 + (ax.y1 - ax.y0) * i / (N_TICKS - 1)
        px, py = ax.px(tx), ax.py(ty)
        bottom = ax.top + ax.height
        ticks.append(f"M{_f(px)},{bottom} v5 M{ax.left},{_f(py)} h-5")
        out.append(
            f'<text x="{_f(px)}" y="{bottom + 18}" font-size="11" text-anchor="middle">{tx:.1f}</text>'
        )
        out.append(
            f'<text x="{ax.left - 8}" y="{_f(py + 4)}" font-size="11" text-anchor="end">{ty:.1f}</text>'
        )
    out.append(f'<path class="ticks" d="{" ".join(ticks)}" stroke="black" fill="none"/>')

    out.append('<g class="points" fill="#1f77b4" fill-opacity="0.8">')
    for xi, yi in zip(x, y):
        out.append(f'<circle cx="{_f(ax.px(xi))}" cy="{_f(ax.py(yi))}" r="3"/>')
    out.append("</g>")

    out.append(
        f'<line class="trend" x1="{_f(ax.px(xmin))}" y1="{_f(ax.py(line_y[0]))}" '
        f'x2="{_f(ax.px(xmax))}" y2="{_f(ax.py(line_y[1]))}" '
        f'data-intercept="{_f(b1)}" data-slope="{_f(b2)}" stroke="#d62728" stroke-width="2"/>'
    )
    out.append("</g>")

    cx = ax.left + ax.width / 2
    cy = ax.top + ax.height / 2
    out += [
        f'<text x="{_f(cx)}" y="{HEIGHT - 15}" font-size="13" text-anchor="middle">{escape(xlabel)}</text>',
        f'<text x="18" y="{_f(cy)}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 18 {_f(cy)})">{escape(ylabel)}</text>',
        f'<text x="{_f(cx)}" y="18" font-size="14" text-anchor="middle">'
        f"{escape(title)}: D = {b1:.4f} + {b2:.4f} T</text>",
        "</svg>",
    ]
    return "\n".join(out) + "\n"
