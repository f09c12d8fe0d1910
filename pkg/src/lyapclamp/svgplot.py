"""Self-contained SVG time-series plots, no plotting dependencies.

Three stacked panels: output vs reference, tracking error, and control.
The document embeds everything (no external references) so it renders
anywhere.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

_W = 860
_PANEL_H = 220
_MARGIN_L = 70
_MARGIN_R = 20
_MARGIN_T = 34
_GAP = 36

_COLORS = ("#1f6fb5", "#d97706", "#b23b3b", "#3b8b5a")


def _fmt(v: float) -> str:
    return format(float(v), ".6g")


def _polyline(t, y, x0, y0, w, h, t_lo, t_hi, y_lo, y_hi, color: str) -> str:
    n = len(t)
    stride = max(1, n // 2000)
    idx = np.arange(0, n, stride)
    if idx[-1] != n - 1:
        idx = np.append(idx, n - 1)
    span_t = t_hi - t_lo or 1.0
    span_y = y_hi - y_lo or 1.0
    px = x0 + (t[idx] - t_lo) / span_t * w
    py = y0 + h - (y[idx] - y_lo) / span_y * h
    pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
    return (
        f'<polyline fill="none" stroke="{color}" stroke-width="1.2" '
        f'points="{pts}"/>'
    )


def _panel(out, t, series, title: str, x0, y0, w, h):
    t_lo, t_hi = float(t[0]), float(t[-1])
    all_y = np.concatenate([y for _, y in series])
    y_lo, y_hi = float(all_y.min()), float(all_y.max())
    if y_lo == y_hi:
        y_lo -= 1.0
        y_hi += 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo -= pad
    y_hi += pad
    out.append(
        f'<rect x="{x0}" y="{y0}" width="{w}" height="{h}" fill="#fdfdfd" '
        f'stroke="#444" stroke-width="1"/>'
    )
    out.append(
        f'<text x="{x0}" y="{y0 - 8}" font-size="13" fill="#222">{escape(title)}</text>'
    )
    # y ticks: min, 0 (if inside), max
    ticks = [y_lo, y_hi]
    if y_lo < 0.0 < y_hi:
        ticks.append(0.0)
    for tv in ticks:
        py = y0 + h - (tv - y_lo) / (y_hi - y_lo) * h
        out.append(
            f'<line x1="{x0 - 4}" y1="{py:.2f}" x2="{x0}" y2="{py:.2f}" stroke="#444"/>'
        )
        out.append(
            f'<text x="{x0 - 8}" y="{py + 4:.2f}" font-size="11" fill="#222" '
            f'text-anchor="end">{_fmt(tv)}</text>'
        )
    for tv in (t_lo, t_hi):
        px = x0 + (tv - t_lo) / ((t_hi - t_lo) or 1.0) * w
        out.append(
            f'<line x1="{px:.2f}" y1="{y0 + h}" x2="{px:.2f}" y2="{y0 + h + 4}" stroke="#444"/>'
        )
        out.append(
            f'<text x="{px:.2f}" y="{y0 + h + 16}" font-size="11" fill="#222" '
            f'text-anchor="middle">{_fmt(tv)}</text>'
        )
    lx = x0 + w - 10
    for j, (label, y) in enumerate(series):
        color = _COLORS[j % len(_COLORS)]
        out.append(_polyline(t, y, x0, y0, w, h, t_lo, t_hi, y_lo, y_hi, color))
        out.append(
            f'<text x="{lx}" y="{y0 + 16 + 14 * j}" font-size="11" fill="{color}" '
            f'text-anchor="end">{escape(label)}</text>'
        )


def render_trace_svg(trace, title: str = "closed-loop run") -> str:
    """Render a trace as a standalone SVG document string."""
    if len(trace) == 0:
        raise ValueError("cannot plot an empty trace")
    w = _W - _MARGIN_L - _MARGIN_R
    panels = [
        ("output y vs reference y_r", [("y_r", trace.y_r), ("y", trace.x1)]),
        ("tracking error e", [("e", trace.e)]),
        ("control u", [("u", trace.u)]),
    ]
    total_h = _MARGIN_T + len(panels) * (_PANEL_H + _GAP)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" '
        f'height="{total_h}" viewBox="0 0 {_W} {total_h}">',
        f'<text x="{_MARGIN_L}" y="18" font-size="15" fill="#111">{escape(title)}</text>',
    ]
    y0 = _MARGIN_T + 14
    for name, series in panels:
        _panel(out, trace.t, series, name, _MARGIN_L, y0, w, _PANEL_H)
        y0 += _PANEL_H + _GAP
    out.append("</svg>")
    return "\n".join(out)
