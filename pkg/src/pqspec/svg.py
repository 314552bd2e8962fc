"""Minimal SVG scatter plots on a logarithmic value axis."""
from __future__ import annotations

import math
from typing import Sequence
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 720, 360
MARGIN = 60
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def scatter(rows: Sequence[Sequence[float]], lines: Sequence[float], title: str,
            labels: Sequence[str] = ()) -> str:
    """One row of points per series, dashed vertical lines at ``lines``."""
    values = [v for row in rows for v in row if v > 0] + [v for v in lines if v > 0]
    if not values:
        values = [1.0]
    lo, hi = math.log10(min(values)), math.log10(max(values))
    if hi - lo < 1e-12:
        lo, hi = lo - 0.5, hi + 0.5
    pad = 0.02 * (hi - lo)
    lo, hi = lo - pad, hi + pad
    span_x = WIDTH - 2 * MARGIN

    def xpos(v):
        return MARGIN + span_x * (math.log10(v) - lo) / (hi - lo)

    n = max(len(rows), 1)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH // 2}" y="24" text-anchor="middle" font-family="sans-serif" '
        f'font-size="14">{escape(title)}</text>',
        f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
    ]
    for e in range(math.ceil(lo), math.floor(hi) + 1):
        x = xpos(10.0 ** e)
        out.append(f'<line x1="{_fmt(x)}" y1="{HEIGHT - MARGIN}" x2="{_fmt(x)}" '
                   f'y2="{HEIGHT - MARGIN + 6}" stroke="black"/>')
        out.append(f'<text x="{_fmt(x)}" y="{HEIGHT - MARGIN + 20}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="11">1e{e}</text>')
    for v in lines:
        if v > 0:
            x = xpos(v)
            out.append(f'<line x1="{_fmt(x)}" y1="{MARGIN}" x2="{_fmt(x)}" y2="{HEIGHT - MARGIN}" '
                       f'stroke="gray" stroke-dasharray="4,3"/>')
    for i, row in enumerate(rows):
        y = MARGIN + (HEIGHT - 2 * MARGIN) * (i + 1) / (n + 1)
        color = COLORS[i % len(COLORS)]
        if i < len(labels):
            out.append(f'<text x="{MARGIN - 6}" y="{_fmt(y + 4)}" text-anchor="end" '
                       f'font-family="sans-serif" font-size="11">{escape(labels[i])}</text>')
        for v in row:
            if v > 0:
                out.append(f'<circle cx="{_fmt(xpos(v))}" cy="{_fmt(y)}" r="2.5" fill="{color}" fill-opacity="0.6"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
