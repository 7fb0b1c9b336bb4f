"""Standalone SVG scatter plots of OOD vs ID accuracy on transformed axes.

Points sit at their transformed coordinates while tick labels show raw
accuracy, so a probit-scaled axis reads like the usual accuracy plot.
Output bytes depend only on the inputs (fixed number formatting, fixed
element order).
"""
from __future__ import annotations

import math
from pathlib import Path
from typing import Iterable
from xml.sax.saxutils import escape

from ..numerics import TransformKind, apply_transform, clamp_probability
from ..stats import EvalRecord, TrendLine

WIDTH = HEIGHT = 560
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 150, 30, 60
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")
_TICKS_NONLINEAR = (
    0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9,
    0.95, 0.98, 0.99, 0.995, 0.998, 0.999, 0.9995, 0.9999,
)
_TICKS_LINEAR = tuple(i / 10 for i in range(11))


def _n(x: float) -> str:
    s = f"{x:.2f}"
    return "0.00" if s == "-0.00" else s


def _t(p: float, n: int | None, kind: TransformKind) -> float:
    if kind is TransformKind.LINEAR:
        return float(p)
    return float(apply_transform(clamp_probability(p, n) if n is not None else p, kind))


def _points(records, kind):
    pts = []
    for r in records:
        if not r.ok:
            continue
        mi, mo = r.metric_id, r.metric_ood
        if kind is not TransformKind.LINEAR and any(
            m.n is None and m.value in (0.0, 1.0) for m in (mi, mo)
        ):
            continue
        pts.append(
            (
                r,
                _t(mi.value, mi.n, kind),
                _t(mo.value, mo.n, kind),
                (_t(mi.ci_lo, mi.n, kind), _t(mi.ci_hi, mi.n, kind)),
                (_t(mo.ci_lo, mo.n, kind), _t(mo.ci_hi, mo.n, kind)),
            )
        )
    return pts


def _tick_label(p: float) -> str:
    return f"{100 * p:.4g}"


def render_svg(
    records: Iterable[EvalRecord],
    fits: dict | None = None,
    theoretical_line: TrendLine | None = None,
    axis_transform: TransformKind | str = TransformKind.PROBIT,
    title: str | None = None,
) -> str:
    kind = TransformKind.parse(axis_transform)
    records = sorted(records, key=lambda r: r.model_id)
    pts = _points(records, kind)
    if not pts:
        raise ValueError("nothing to plot: need at least one record with plottable metrics")
    fits = dict(fits or {})

    lo = min(min(p[3][0], p[4][0], p[1], p[2]) for p in pts)
    hi = max(max(p[3][1], p[4][1], p[1], p[2]) for p in pts)
    if hi - lo < 1e-9:
        lo, hi = lo - 0.5, hi + 0.5
    pad = 0.05 * (hi - lo)
    lo, hi = lo - pad, hi + pad
    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B

    def sx(v):
        return MARGIN_L + (v - lo) / (hi - lo) * pw

    def sy(v):
        return MARGIN_T + ph - (v - lo) / (hi - lo) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
        '<defs><clipPath id="plot"><rect x="{}" y="{}" width="{}" height="{}"/></clipPath></defs>'.format(
            MARGIN_L, MARGIN_T, pw, ph
        ),
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="white" stroke="black"/>',
    ]
    if title:
        out.append(f'<text x="{_n(MARGIN_L + pw / 2)}" y="18" text-anchor="middle">{escape(title)}</text>')

    ticks = _TICKS_LINEAR if kind is TransformKind.LINEAR else _TICKS_NONLINEAR
    out.append('<g class="ticks" stroke="#dddddd">')
    labels = []
    for p in ticks:
        v = _t(p, None, kind)
        if not lo <= v <= hi:
            continue
        x, y = sx(v), sy(v)
        out.append(f'<line x1="{_n(x)}" y1="{MARGIN_T}" x2="{_n(x)}" y2="{MARGIN_T + ph}"/>')
        out.append(f'<line x1="{MARGIN_L}" y1="{_n(y)}" x2="{MARGIN_L + pw}" y2="{_n(y)}"/>')
        labels.append(f'<text x="{_n(x)}" y="{MARGIN_T + ph + 15}" text-anchor="middle">{_tick_label(p)}</text>')
        labels.append(f'<text x="{MARGIN_L - 5}" y="{_n(y + 4)}" text-anchor="end">{_tick_label(p)}</text>')
    out.append("</g>")
    out += labels
    axis_name = {"linear": "linear", "probit": "probit", "logit": "logit"}[kind.value]
    out.append(
        f'<text x="{_n(MARGIN_L + pw / 2)}" y="{HEIGHT - 15}" text-anchor="middle">'
        f"ID accuracy (%, {axis_name} scale)</text>"
    )
    out.append(
        f'<text x="15" y="{_n(MARGIN_T + ph / 2)}" text-anchor="middle" '
        f'transform="rotate(-90 15 {_n(MARGIN_T + ph / 2)})">OOD accuracy (%, {axis_name} scale)</text>'
    )

    out.append('<g clip-path="url(#plot)">')
    out.append(
        f'<line class="identity" x1="{_n(sx(lo))}" y1="{_n(sy(lo))}" x2="{_n(sx(hi))}" y2="{_n(sy(hi))}" '
        'stroke="#777777" stroke-dasharray="6,4"/>'
    )
    legend = [("y = x", "#777777", "6,4")]
    if theoretical_line is not None:
        out.append(_line(theoretical_line, lo, hi, sx, sy, "theory", "black", "2,3", 2))
        legend.append(("theory", "black", "2,3"))
    for i, (name, fit) in enumerate(fits.items()):
        color = PALETTE[i % len(PALETTE)]
        out.append(_line(fit, lo, hi, sx, sy, "fit", color, None, 1.5))
        legend.append((f"fit {name}", color, None))

    families = sorted({p[0].family for p in pts})
    fam_color = {f: PALETTE[(i + 3) % len(PALETTE)] for i, f in enumerate(families)}
    for r, x, y, (xl, xh), (yl, yh) in pts:
        c = fam_color[r.family]
        out.append(f'<g class="record" stroke="{c}"><title>{escape(r.model_id)}</title>')
        out.append(f'<line x1="{_n(sx(xl))}" y1="{_n(sy(y))}" x2="{_n(sx(xh))}" y2="{_n(sy(y))}"/>')
        out.append(f'<line x1="{_n(sx(x))}" y1="{_n(sy(yl))}" x2="{_n(sx(x))}" y2="{_n(sy(yh))}"/>')
        out.append(f'<circle cx="{_n(sx(x))}" cy="{_n(sy(y))}" r="2.5" fill="{c}" fill-opacity="0.6"/>')
        out.append("</g>")
    out.append("</g>")

    lx, ly = MARGIN_L + pw + 12, MARGIN_T + 10
    for label, color, dash in legend:
        d = f' stroke-dasharray="{dash}"' if dash else ""
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" stroke-width="2"{d}/>')
        out.append(f'<text x="{lx + 26}" y="{ly + 4}">{escape(label)}</text>')
        ly += 16
    for f in families:
        out.append(f'<circle cx="{lx + 10}" cy="{ly}" r="3" fill="{fam_color[f]}"/>')
        out.append(f'<text x="{lx + 26}" y="{ly + 4}">{escape(f or "(unnamed)")}</text>')
        ly += 16
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _line(line: TrendLine, lo, hi, sx, sy, cls, color, dash, width) -> str:
    d = f' stroke-dasharray="{dash}"' if dash else ""
    y0 = line.slope * lo + line.intercept
    y1 = line.slope * hi + line.intercept
    if not (math.isfinite(y0) and math.isfinite(y1)):
        return ""
    return (
        f'<line class="{cls}" x1="{_n(sx(lo))}" y1="{_n(sy(y0))}" x2="{_n(sx(hi))}" y2="{_n(sy(y1))}" '
        f'stroke="{color}" stroke-width="{width}"{d}/>'
    )


def emit_svg(records, fits, theoretical_line, axis_transform, path, title: str | None = None) -> None:
    text = render_svg(records, fits, theoretical_line, axis_transform, title)
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as err:
        raise OSError(f"cannot write {path}: {err.strerror}") from err
