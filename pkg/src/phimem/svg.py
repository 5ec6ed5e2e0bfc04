"""Bare-bones SVG line plots: axes, tick labels, one polyline per series."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence, Union
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 640, 480
MARGIN = 64
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def _ticks(lo: float, hi: float, n: int = 5) -> np.ndarray:
    return np.linspace(lo, hi, n)


def line_plot(
    series: Sequence[tuple[np.ndarray, np.ndarray, str]],
    xlabel: str,
    ylabel: str,
    title: str = "",
) -> str:
    xs = np.concatenate([np.asarray(s[0], dtype=float) for s in series])
    ys = np.concatenate([np.asarray(s[1], dtype=float) for s in series])
    x0, x1 = float(np.min(xs)), float(np.max(xs))
    y0, y1 = float(np.min(ys)), float(np.max(ys))
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1
    pw, ph = WIDTH - 2 * MARGIN, HEIGHT - 2 * MARGIN

    def px(x):
        return MARGIN + (np.asarray(x) - x0) / (x1 - x0) * pw

    def py(y):
        return HEIGHT - MARGIN - (np.asarray(y) - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for xt in _ticks(x0, x1):
        X = px(xt)
        out.append(f'<line x1="{X:.2f}" y1="{HEIGHT - MARGIN}" x2="{X:.2f}" y2="{HEIGHT - MARGIN + 5}" stroke="black"/>')
        out.append(f'<text x="{X:.2f}" y="{HEIGHT - MARGIN + 18}" font-size="11" text-anchor="middle">{xt:.3g}</text>')
    for yt in _ticks(y0, y1):
        Y = py(yt)
        out.append(f'<line x1="{MARGIN - 5}" y1="{Y:.2f}" x2="{MARGIN}" y2="{Y:.2f}" stroke="black"/>')
        out.append(f'<text x="{MARGIN - 8}" y="{Y + 4:.2f}" font-size="11" text-anchor="end">{yt:.3g}</text>')
    if x0 < 0 < x1:
        out.append(f'<line x1="{px(0):.2f}" y1="{MARGIN}" x2="{px(0):.2f}" y2="{HEIGHT - MARGIN}" stroke="#bbbbbb"/>')
    if y0 < 0 < y1:
        out.append(f'<line x1="{MARGIN}" y1="{py(0):.2f}" x2="{WIDTH - MARGIN}" y2="{py(0):.2f}" stroke="#bbbbbb"/>')
    for n, (x, y, label) in enumerate(series):
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px(x), py(y)))
        color = COLORS[n % len(COLORS)]
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        if label:
            out.append(
                f'<text x="{WIDTH - MARGIN - 4}" y="{MARGIN + 16 + 14 * n}" font-size="12" text-anchor="end" '
                f'fill="{color}">{escape(label)}</text>'
            )
    out.append(f'<text x="{WIDTH / 2}" y="{HEIGHT - 16}" font-size="13" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(
        f'<text x="18" y="{HEIGHT / 2}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 18 {HEIGHT / 2})">{escape(ylabel)}</text>'
    )
    if title:
        out.append(f'<text x="{WIDTH / 2}" y="28" font-size="14" text-anchor="middle">{escape(title)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_plot(path: Union[str, Path], *args, **kwargs) -> None:
    Path(path).write_text(line_plot(*args, **kwargs))
