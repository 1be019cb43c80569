"""Minimal SVG line charts written as direct markup.

Data series are drawn as one <polyline> each; axes, ticks, and the ROC
diagonal use <line> and <text>, so counting polylines counts curves.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 720, 360
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 64, 16, 36, 44

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

# Cap on points per polyline; longer series are strided down.
_MAX_POINTS = 2000


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / count
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 10))
        t += step
    return ticks


class _Panel:
    """One plotting area mapped onto a pixel rectangle."""

    def __init__(self, x0, y0, w, h, xlim, ylim):
        self.x0, self.y0, self.w, self.h = x0, y0, w, h
        self.xlo, self.xhi = xlim
        self.ylo, self.yhi = ylim
        if self.xhi <= self.xlo:
            self.xhi = self.xlo + 1.0
        if self.yhi <= self.ylo:
            pad = abs(self.ylo) if self.ylo else 1.0
            self.ylo, self.yhi = self.ylo - pad * 0.5, self.ylo + pad * 0.5

    def px(self, x):
        return self.x0 + (x - self.xlo) / (self.xhi - self.xlo) * self.w

    def py(self, y):
        return self.y0 + self.h - (y - self.ylo) / (self.yhi - self.ylo) * self.h


def _polyline(panel: _Panel, xs, ys, color: str) -> str:
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.size > _MAX_POINTS:
        stride = int(np.ceil(xs.size / _MAX_POINTS))
        keep = np.arange(0, xs.size, stride)
        if keep[-1] != xs.size - 1:
            keep = np.append(keep, xs.size - 1)
        xs, ys = xs[keep], ys[keep]
    pts = " ".join(f"{panel.px(x):.2f},{panel.py(y):.2f}" for x, y in zip(xs, ys))
    return (
        f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>'
    )


def _axes(panel: _Panel, xlabel: str, ylabel: str) -> list[str]:
    parts = []
    x1, y1 = panel.x0, panel.y0 + panel.h
    parts.append(
        f'<line x1="{panel.x0}" y1="{y1}" x2="{panel.x0 + panel.w}" y2="{y1}" stroke="#444"/>'
    )
    parts.append(f'<line x1="{x1}" y1="{panel.y0}" x2="{x1}" y2="{y1}" stroke="#444"/>')
    for t in _ticks(panel.xlo, panel.xhi):
        px = panel.px(t)
        parts.append(f'<line x1="{px:.2f}" y1="{y1}" x2="{px:.2f}" y2="{y1 + 4}" stroke="#444"/>')
        parts.append(
            f'<text x="{px:.2f}" y="{y1 + 16}" font-size="10" text-anchor="middle" fill="#333">{t:g}</text>'
        )
    for t in _ticks(panel.ylo, panel.yhi):
        py = panel.py(t)
        parts.append(f'<line x1="{x1 - 4}" y1="{py:.2f}" x2="{x1}" y2="{py:.2f}" stroke="#444"/>')
        parts.append(
            f'<text x="{x1 - 6}" y="{py + 3:.2f}" font-size="10" text-anchor="end" fill="#333">{t:g}</text>'
        )
    parts.append(
        f'<text x="{panel.x0 + panel.w / 2:.2f}" y="{y1 + 32}" font-size="11" '
        f'text-anchor="middle" fill="#333">{escape(xlabel)}</text>'
    )
    parts.append(
        f'<text x="{panel.x0 - 48}" y="{panel.y0 + panel.h / 2:.2f}" font-size="11" '
        f'text-anchor="middle" fill="#333" transform="rotate(-90 {panel.x0 - 48} '
        f'{panel.y0 + panel.h / 2:.2f})">{escape(ylabel)}</text>'
    )
    return parts


def _document(height: int, body: list[str], title: str) -> str:
    head = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" '
        f'viewBox="0 0 {WIDTH} {height}">',
        f'<rect width="{WIDTH}" height="{height}" fill="white"/>',
        f'<text x="{WIDTH / 2}" y="20" font-size="13" text-anchor="middle" '
        f'fill="#111">{escape(title)}</text>',
    ]
    return "\n".join(head + body + ["</svg>"]) + "\n"


def line_chart(
    series: list[tuple[str, np.ndarray, np.ndarray]],
    title: str,
    xlabel: str,
    ylabel: str,
    diagonal: bool = False,
    xlim: tuple[float, float] | None = None,
    ylim: tuple[float, float] | None = None,
) -> str:
    """Overlayed curves with a shared axis and a legend; one polyline each."""
    xs_all = np.concatenate([np.asarray(s[1], dtype=np.float64) for s in series])
    ys_all = np.concatenate([np.asarray(s[2], dtype=np.float64) for s in series])
    if xlim is None:
        xlim = (float(xs_all.min()), float(xs_all.max()))
    if ylim is None:
        span = float(ys_all.max() - ys_all.min()) or 1.0
        ylim = (float(ys_all.min()) - 0.05 * span, float(ys_all.max()) + 0.05 * span)
    panel = _Panel(MARGIN_L, MARGIN_T, WIDTH - MARGIN_L - MARGIN_R, HEIGHT - MARGIN_T - MARGIN_B, xlim, ylim)
    body = _axes(panel, xlabel, ylabel)
    if diagonal:
        body.append(
            f'<line x1="{panel.px(xlim[0]):.2f}" y1="{panel.py(ylim[0]):.2f}" '
            f'x2="{panel.px(xlim[1]):.2f}" y2="{panel.py(ylim[1]):.2f}" '
            'stroke="#999" stroke-dasharray="4 3"/>'
        )
    for i, (name, xs, ys) in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        body.append(_polyline(panel, xs, ys, color))
        lx = panel.x0 + panel.w - 150
        ly = panel.y0 + 14 + 14 * i
        body.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 18}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        body.append(f'<text x="{lx + 24}" y="{ly}" font-size="10" fill="#333">{escape(name)}</text>')
    return _document(HEIGHT, body, title)


def stacked_chart(
    panels: list[tuple[str, np.ndarray, np.ndarray]],
    title: str,
    xlabel: str,
) -> str:
    """One sub-panel per series, stacked vertically; one polyline each."""
    panel_h = 110
    height = MARGIN_T + len(panels) * panel_h + MARGIN_B
    body = []
    for i, (name, xs, ys) in enumerate(panels):
        xs = np.asarray(xs, dtype=np.float64)
        ys = np.asarray(ys, dtype=np.float64)
        span = float(ys.max() - ys.min()) or 1.0
        p = _Panel(
            MARGIN_L,
            MARGIN_T + i * panel_h,
            WIDTH - MARGIN_L - MARGIN_R,
            panel_h - 26,
            (float(xs.min()), float(xs.max())),
            (float(ys.min()) - 0.05 * span, float(ys.max()) + 0.05 * span),
        )
        body.extend(_axes(p, xlabel if i == len(panels) - 1 else "", name))
        body.append(_polyline(p, xs, ys, PALETTE[i % len(PALETTE)]))
    return _document(height, body, title)
