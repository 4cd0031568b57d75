"""Minimal standalone SVG plots; no external rendering dependencies.

Output is deterministic for identical inputs: floats are formatted with a
fixed precision and elements are emitted in input order.
"""

from __future__ import annotations

import math

__all__ = ["SvgCanvas", "loglog_plot", "series_plot", "partition_scatter"]

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _fmt(x: float) -> str:
    return f"{x:.3f}"


class SvgCanvas:
    def __init__(self, width=640, height=480):
        self.width = width
        self.height = height
        self.parts = []

    def line(self, x1, y1, x2, y2, color="#000000", width=1.0, dash=None):
        d = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
            f'stroke="{color}" stroke-width="{_fmt(width)}"{d}/>'
        )

    def circle(self, x, y, r, color="#000000", fill=True):
        style = f'fill="{color}"' if fill else f'fill="none" stroke="{color}"'
        self.parts.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(r)}" {style}/>')

    def text(self, x, y, s, size=12, anchor="start", color="#000000"):
        self.parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-size="{size}" font-family="sans-serif" '
            f'text-anchor="{anchor}" fill="{color}">{s}</text>'
        )

    def polyline(self, pts, color="#000000", width=1.0, dash=None):
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
        d = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="{_fmt(width)}"{d}/>'
        )

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(
                f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" '
                f'height="{self.height}" viewBox="0 0 {self.width} {self.height}">\n'
            )
            fh.write(f'<rect width="{self.width}" height="{self.height}" fill="#ffffff"/>\n')
            for p in self.parts:
                fh.write(p + "\n")
            fh.write("</svg>\n")


class _Axes:
    """Maps data coordinates to pixels inside fixed margins."""

    def __init__(self, canvas, xlim, ylim, logx=False, logy=False,
                 xlabel="", ylabel="", title=""):
        self.canvas = canvas
        self.logx, self.logy = logx, logy
        tx = (lambda v: math.log10(v)) if logx else (lambda v: v)
        ty = (lambda v: math.log10(v)) if logy else (lambda v: v)
        self.tx, self.ty = tx, ty
        x0, x1 = tx(xlim[0]), tx(xlim[1])
        y0, y1 = ty(ylim[0]), ty(ylim[1])
        if x1 == x0:
            x0, x1 = x0 - 0.5, x1 + 0.5
        if y1 == y0:
            y0, y1 = y0 - 0.5, y1 + 0.5
        self.xr = (x0, x1)
        self.yr = (y0, y1)
        self.left, self.right = 70, canvas.width - 20
        self.top, self.bottom = 40, canvas.height - 50
        canvas.line(self.left, self.bottom, self.right, self.bottom)
        canvas.line(self.left, self.top, self.left, self.bottom)
        if title:
            canvas.text(canvas.width / 2, 22, title, size=14, anchor="middle")
        if xlabel:
            canvas.text((self.left + self.right) / 2, canvas.height - 12, xlabel, anchor="middle")
        if ylabel:
            canvas.text(16, self.top - 12, ylabel)
        self._ticks(xlim, ylim)

    def px(self, x):
        x0, x1 = self.xr
        return self.left + (self.tx(x) - x0) / (x1 - x0) * (self.right - self.left)

    def py(self, y):
        y0, y1 = self.yr
        return self.bottom - (self.ty(y) - y0) / (y1 - y0) * (self.bottom - self.top)

    def _log_ticks(self, lo, hi):
        ticks = []
        k = math.floor(math.log10(lo))
        while 10.0**k <= hi * 1.0001:
            if 10.0**k >= lo * 0.9999:
                ticks.append(10.0**k)
            k += 1
        if not ticks:
            ticks = [lo, hi]
        return ticks

    def _lin_ticks(self, lo, hi):
        span = hi - lo
        if span <= 0:
            return [lo]
        step = 10.0 ** math.floor(math.log10(span / 4))
        for mult in (1, 2, 5, 10):
            if span / (step * mult) <= 6:
                step *= mult
                break
        first = math.ceil(lo / step) * step
        ticks = []
        t = first
        while t <= hi + 1e-12 * span:
            ticks.append(t)
            t += step
        return ticks

    def _ticks(self, xlim, ylim):
        c = self.canvas
        xt = self._log_ticks(*xlim) if self.logx else self._lin_ticks(*xlim)
        yt = self._log_ticks(*ylim) if self.logy else self._lin_ticks(*ylim)
        for t in xt:
            x = self.px(t)
            c.line(x, self.bottom, x, self.bottom + 5)
            label = f"{t:g}"
            c.text(x, self.bottom + 18, label, size=10, anchor="middle")
        for t in yt:
            y = self.py(t)
            c.line(self.left - 5, y, self.left, y)
            c.text(self.left - 8, y + 3, f"{t:g}", size=10, anchor="end")


def loglog_plot(path, xs, ys, xlabel="n", ylabel="mean error", title="",
                fit: tuple | None = None):
    """Log-log scatter of (xs, ys) with an optional least-squares fit line.

    fit = (slope, intercept) for log10 y = slope * log10 x + intercept.
    """
    pos = [(x, y) for x, y in zip(xs, ys) if x > 0 and y > 0]
    if not pos:
        raise ValueError("log-log plot needs positive data")
    xs2, ys2 = zip(*pos)
    canvas = SvgCanvas()
    pad = 1.3
    axes = _Axes(canvas, (min(xs2) / pad, max(xs2) * pad), (min(ys2) / pad, max(ys2) * pad),
                 logx=True, logy=True, xlabel=xlabel, ylabel=ylabel, title=title)
    if fit is not None:
        slope, intercept = fit
        x_lo, x_hi = min(xs2), max(xs2)
        y_lo = 10 ** (slope * math.log10(x_lo) + intercept)
        y_hi = 10 ** (slope * math.log10(x_hi) + intercept)
        canvas.polyline([(axes.px(x_lo), axes.py(y_lo)), (axes.px(x_hi), axes.py(y_hi))],
                        color=_COLORS[1], width=1.5, dash="5,3")
    for x, y in pos:
        canvas.circle(axes.px(x), axes.py(y), 4, color=_COLORS[0])
    canvas.save(path)


def series_plot(path, xs, series, labels, xlabel="n", ylabel="", title="", logx=True):
    """One or more y-series over a shared x grid (linear y axis)."""
    ally = [v for ys in series for v in ys if math.isfinite(v)]
    if not ally:
        raise ValueError("no finite data to plot")
    lo, hi = min(ally), max(ally)
    margin = 0.1 * (hi - lo if hi > lo else abs(hi) or 1.0)
    canvas = SvgCanvas()
    axes = _Axes(canvas, (min(xs), max(xs)), (lo - margin, hi + margin),
                 logx=logx, xlabel=xlabel, ylabel=ylabel, title=title)
    for idx, (ys, label) in enumerate(zip(series, labels)):
        color = _COLORS[idx % len(_COLORS)]
        pts = [(axes.px(x), axes.py(y)) for x, y in zip(xs, ys) if math.isfinite(y)]
        canvas.polyline(pts, color=color, width=1.5)
        for x, y in pts:
            canvas.circle(x, y, 3, color=color)
        canvas.text(axes.right - 8, axes.top + 14 + 14 * idx, label, size=11,
                    anchor="end", color=color)
    canvas.save(path)


def partition_scatter(path, points, labels, cut_line=None, title=""):
    """Scatter of a partitioned 2-d cloud with the continuum cut overlaid.

    cut_line = (orientation, position): "horizontal" draws y = position,
    "vertical" draws x = position, in a distinct stroke.
    """
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    canvas = SvgCanvas(520, 640)
    axes = _Axes(canvas, (min(xs), max(xs)), (min(ys), max(ys)),
                 xlabel="x", ylabel="y", title=title)
    for (x, y), lab in zip(points, labels):
        canvas.circle(axes.px(x), axes.py(y), 2.2, color=_COLORS[int(lab) % len(_COLORS)])
    if cut_line is not None:
        orientation, position = cut_line
        if orientation == "horizontal":
            y = axes.py(position)
            canvas.line(axes.left, y, axes.right, y, color="#d62728", width=2.0)
        else:
            x = axes.px(position)
            canvas.line(x, axes.top, x, axes.bottom, color="#d62728", width=2.0)
    canvas.save(path)
