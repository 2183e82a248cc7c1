"""Minimal deterministic SVG charts (line, box and histogram)."""
from __future__ import annotations

from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

from ..stats import FiveNumberSummary, HistogramSummary

W, H = 640, 400
ML, MR, MT, MB = 70, 20, 40, 50
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
           "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79")


def _n(v: float) -> str:
    return f"{v:.2f}"


class _Canvas:
    def __init__(self, title: str, xlabel: str, ylabel: str, xlim, ylim):
        x0, x1 = xlim
        y0, y1 = ylim
        if x1 <= x0:
            x0, x1 = x0 - 0.5, x0 + 0.5
        if y1 <= y0:
            y0, y1 = y0 - 0.5, y0 + 0.5
        self.xlim, self.ylim = (x0, x1), (y0, y1)
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
            f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
            f'<text x="{W / 2}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{escape(title)}</text>',
            f'<text x="{W / 2}" y="{H - 10}" text-anchor="middle" font-family="sans-serif" font-size="12">{escape(xlabel)}</text>',
            f'<text x="16" y="{H / 2}" text-anchor="middle" font-family="sans-serif" font-size="12" '
            f'transform="rotate(-90 16 {H / 2})">{escape(ylabel)}</text>',
            f'<rect x="{ML}" y="{MT}" width="{W - ML - MR}" height="{H - MT - MB}" fill="none" stroke="black"/>',
        ]
        for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
            xv = x0 + frac * (x1 - x0)
            yv = y0 + frac * (y1 - y0)
            self.parts.append(f'<text x="{_n(self.px(xv))}" y="{H - MB + 16}" text-anchor="middle" '
                              f'font-family="sans-serif" font-size="10">{xv:.4g}</text>')
            self.parts.append(f'<text x="{ML - 6}" y="{_n(self.py(yv) + 3)}" text-anchor="end" '
                              f'font-family="sans-serif" font-size="10">{yv:.4g}</text>')

    def px(self, x: float) -> float:
        x0, x1 = self.xlim
        return ML + (x - x0) / (x1 - x0) * (W - ML - MR)

    def py(self, y: float) -> float:
        y0, y1 = self.ylim
        return H - MB - (y - y0) / (y1 - y0) * (H - MT - MB)

    def polyline(self, xs, ys, color: str, width: float = 1.2, dash: str | None = None):
        pts = " ".join(f"{_n(self.px(x))},{_n(self.py(y))}" for x, y in zip(xs, ys))
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="{width}"{extra}/>')

    def line(self, x0, y0, x1, y1, color="black", width=1.0):
        self.parts.append(f'<line x1="{_n(self.px(x0))}" y1="{_n(self.py(y0))}" x2="{_n(self.px(x1))}" '
                          f'y2="{_n(self.py(y1))}" stroke="{color}" stroke-width="{width}"/>')

    def rect(self, x0, y0, x1, y1, fill="#9ecae1"):
        left, right = sorted((self.px(x0), self.px(x1)))
        top, bottom = sorted((self.py(y0), self.py(y1)))
        self.parts.append(f'<rect x="{_n(left)}" y="{_n(top)}" width="{_n(right - left)}" '
                          f'height="{_n(bottom - top)}" fill="{fill}" stroke="black" stroke-width="0.8"/>')

    def circle(self, x, y, r=3.0, color="black"):
        self.parts.append(f'<circle cx="{_n(self.px(x))}" cy="{_n(self.py(y))}" r="{r}" fill="none" stroke="{color}"/>')

    def legend(self, labels: Sequence[str], colors: Sequence[str]):
        for i, (lab, col) in enumerate(zip(labels, colors)):
            y = MT + 14 + 14 * i
            self.parts.append(f'<line x1="{W - MR - 120}" y1="{y}" x2="{W - MR - 100}" y2="{y}" stroke="{col}" stroke-width="2"/>')
            self.parts.append(f'<text x="{W - MR - 95}" y="{y + 4}" font-family="sans-serif" font-size="10">{escape(lab)}</text>')

    def save(self, path: Path):
        Path(path).write_text("\n".join(self.parts + ["</svg>"]) + "\n", encoding="utf-8")


def line_chart(path: Path, title: str, xlabel: str, ylabel: str,
               series: Sequence[tuple[str, np.ndarray, np.ndarray]], dashed: Sequence[bool] | None = None):
    """One polyline per ``(label, x, y)``; non-finite points are dropped."""
    xs = np.concatenate([np.asarray(s[1], float) for s in series])
    ys = np.concatenate([np.asarray(s[2], float) for s in series])
    ok = np.isfinite(xs) & np.isfinite(ys)
    c = _Canvas(title, xlabel, ylabel, (xs[ok].min(), xs[ok].max()), (ys[ok].min(), ys[ok].max()))
    colors = []
    for i, (label, x, y) in enumerate(series):
        x, y = np.asarray(x, float), np.asarray(y, float)
        keep = np.isfinite(x) & np.isfinite(y)
        col = PALETTE[i % len(PALETTE)]
        colors.append(col)
        c.polyline(x[keep], y[keep], col, dash="5,3" if dashed and dashed[i] else None)
    c.legend([s[0] for s in series], colors)
    c.save(path)


def box_plot(path: Path, title: str, ylabel: str, summaries: Sequence[tuple[str, FiveNumberSummary]]):
    lo = min(min([s.q0] + list(s.outliers)) for _, s in summaries)
    hi = max(max([s.q4] + list(s.outliers)) for _, s in summaries)
    pad = 0.05 * (hi - lo) if hi > lo else 0.5
    c = _Canvas(title, "", ylabel, (0.0, float(len(summaries))), (lo - pad, hi + pad))
    for i, (label, s) in enumerate(summaries):
        mid = i + 0.5
        c.line(mid, s.q0, mid, s.q1)
        c.line(mid, s.q3, mid, s.q4)
        c.line(mid - 0.15, s.q0, mid + 0.15, s.q0)
        c.line(mid - 0.15, s.q4, mid + 0.15, s.q4)
        c.rect(mid - 0.25, s.q1, mid + 0.25, s.q3)
        c.line(mid - 0.25, s.q2, mid + 0.25, s.q2, color="#d62728", width=2.0)
        for o in s.outliers:
            c.circle(mid, o)
        c.parts.append(f'<text x="{_n(c.px(mid))}" y="{MT - 4}" text-anchor="middle" '
                       f'font-family="sans-serif" font-size="11">{escape(label)}</text>')
    c.save(path)


def histogram_chart(path: Path, title: str, xlabel: str, hist: HistogramSummary):
    edges, counts = hist.edges, hist.counts
    c = _Canvas(title, xlabel, "count", (float(edges[0]), float(edges[-1])), (0.0, float(max(counts.max(), 1))))
    for left, right, n in zip(edges[:-1], edges[1:], counts):
        if n > 0:
            c.rect(left, 0.0, right, float(n))
    c.save(path)
