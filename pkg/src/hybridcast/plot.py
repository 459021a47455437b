"""Dependency-free SVG line charts with byte-stable output."""

from __future__ import annotations

from typing import Mapping, Optional, Sequence
from xml.sax.saxutils import escape

import numpy as np

from .errors import InvalidArgumentError

WIDTH, HEIGHT = 900, 420
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 160, 40, 50
COLORS = ("#222222", "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b")


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _polyline(xs, ys, color, width):
    pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in zip(xs, ys))
    return (f'<polyline fill="none" stroke="{color}" stroke-width="{width}" '
            f'points="{pts}"/>')


def render_svg(observed: Sequence[float], forecasts: Optional[Mapping[str, Sequence[float]]] = None,
               title: str = "Forecast comparison", x_label: str = "index",
               y_label: str = "value", x_offset: int = 0) -> str:
    """Observed series plus one polyline per forecast, with legend and axis labels."""
    obs = np.asarray(observed, dtype=float).reshape(-1)
    if obs.size == 0:
        raise InvalidArgumentError("nothing to plot")
    series = [("observed", obs)]
    for name, values in (forecasts or {}).items():
        arr = np.asarray(values, dtype=float).reshape(-1)
        if arr.size != obs.size:
            raise InvalidArgumentError(
                f"forecast {name!r} has {arr.size} points, observed has {obs.size}"
            )
        series.append((str(name), arr))

    finite = np.concatenate([s[np.isfinite(s)] for _, s in series])
    lo, hi = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
    if hi == lo:
        lo, hi = lo - 1.0, hi + 1.0
    pad = 0.05 * (hi - lo)
    lo, hi = lo - pad, hi + pad

    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B
    n = obs.size
    xs = MARGIN_L + (np.arange(n) / max(n - 1, 1)) * plot_w

    def ymap(v):
        return MARGIN_T + (hi - v) / (hi - lo) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<rect x="0" y="0" width="100%" height="100%" fill="white"/>',
        f'<text x="{WIDTH // 2}" y="24" text-anchor="middle" font-family="sans-serif" '
        f'font-size="15">{escape(title)}</text>',
        f'<line x1="{MARGIN_L}" y1="{MARGIN_T + plot_h}" x2="{MARGIN_L + plot_w}" '
        f'y2="{MARGIN_T + plot_h}" stroke="black"/>',
        f'<line x1="{MARGIN_L}" y1="{MARGIN_T}" x2="{MARGIN_L}" y2="{MARGIN_T + plot_h}" stroke="black"/>',
    ]
    for k in range(5):
        v = lo + (hi - lo) * k / 4
        y = ymap(v)
        out.append(f'<text x="{MARGIN_L - 6}" y="{_fmt(y + 4)}" text-anchor="end" '
                   f'font-family="sans-serif" font-size="11">{v:.4g}</text>')
    for k in range(5):
        i = round((n - 1) * k / 4)
        x = MARGIN_L + (i / max(n - 1, 1)) * plot_w
        out.append(f'<text x="{_fmt(x)}" y="{MARGIN_T + plot_h + 16}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="11">{i + x_offset}</text>')
    out.append(f'<text x="{MARGIN_L + plot_w // 2}" y="{HEIGHT - 10}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="12">{escape(x_label)}</text>')
    out.append(f'<text x="16" y="{MARGIN_T + plot_h // 2}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="12" '
               f'transform="rotate(-90 16 {MARGIN_T + plot_h // 2})">{escape(y_label)}</text>')

    for idx, (name, values) in enumerate(series):
        color = COLORS[idx % len(COLORS)]
        ok = np.isfinite(values)
        width = "1.6" if idx == 0 else "1.2"
        out.append(_polyline(xs[ok], ymap(values[ok]), color, width))
        ly = MARGIN_T + 10 + 18 * idx
        lx = WIDTH - MARGIN_R + 12
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 22}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 28}" y="{ly + 4}" font-family="sans-serif" '
                   f'font-size="12">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_plot(observed, forecasts, path, **kwargs) -> str:
    """Write :func:`render_svg` output to ``path`` and return the path."""
    svg = render_svg(observed, forecasts, **kwargs)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(svg)
    return str(path)
