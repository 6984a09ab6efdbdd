"""Minimal SVG line-chart writer (polyline + axis ticks), no plotting dependency."""

from __future__ import annotations

from pathlib import Path

import numpy as np

__all__ = ["line_chart"]

WIDTH, HEIGHT = 640, 400
MARGIN = 50


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def line_chart(values, path, marker: int | None = None, title: str = "") -> None:
    """Write a line chart of ``values`` vs index, optional vertical marker at an index."""
    y = np.asarray(values, dtype=float)
    n = y.size
    x_lo, x_hi = 0.0, float(max(n - 1, 1))
    y_lo, y_hi = float(y.min()), float(y.max())
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    plot_w = WIDTH - 2 * MARGIN
    plot_h = HEIGHT - 2 * MARGIN

    def sx(v: float) -> float:
        return MARGIN + (v - x_lo) / (x_hi - x_lo) * plot_w

    def sy(v: float) -> float:
        return HEIGHT - MARGIN - (v - y_lo) / (y_hi - y_lo) * plot_h

    points = " ".join(f"{sx(i):.2f},{sy(v):.2f}" for i, v in enumerate(y))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.0f}" y="20" text-anchor="middle" font-size="14">{title}</text>',
        f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" '
        f'y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
    ]
    for tick in _ticks(x_lo, x_hi):
        px = sx(tick)
        parts.append(
            f'<line x1="{px:.2f}" y1="{HEIGHT - MARGIN}" x2="{px:.2f}" '
            f'y2="{HEIGHT - MARGIN + 5}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{px:.2f}" y="{HEIGHT - MARGIN + 18}" text-anchor="middle" '
            f'font-size="10">{tick:.4g}</text>'
        )
    for tick in _ticks(y_lo, y_hi):
        py = sy(tick)
        parts.append(
            f'<line x1="{MARGIN - 5}" y1="{py:.2f}" x2="{MARGIN}" y2="{py:.2f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{MARGIN - 8}" y="{py + 3:.2f}" text-anchor="end" '
            f'font-size="10">{tick:.4g}</text>'
        )
    if marker is not None and n:
        px = sx(float(min(max(marker, 0), n - 1)))
        parts.append(
            f'<line x1="{px:.2f}" y1="{MARGIN}" x2="{px:.2f}" y2="{HEIGHT - MARGIN}" '
            f'stroke="red" stroke-dasharray="4 3"/>'
        )
        parts.append(
            f'<text x="{px + 4:.2f}" y="{MARGIN + 12}" font-size="11" fill="red">n={marker}</text>'
        )
    parts.append(f'<polyline points="{points}" fill="none" stroke="steelblue" stroke-width="1.5"/>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
