"""CSV and static SVG writers shared by the half-plane tools and the CLI."""

from __future__ import annotations

import csv
import io
import math
from typing import Iterable, Sequence

import numpy as np


def csv_text(header: Sequence[str], rows: Iterable[Sequence[float]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    return repr(float(v))


_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def svg_text(curves: Sequence[tuple[str, np.ndarray, np.ndarray]], xlabel: str = "x",
             ylabel: str = "y", width: int = 640, height: int = 480) -> str:
    """Polylines for ``(label, xs, ys)`` curves with a bounding box and axis labels."""
    finite = [(lab, np.asarray(x, float), np.asarray(y, float)) for lab, x, y in curves]
    finite = [(lab, x[np.isfinite(x) & np.isfinite(y)], y[np.isfinite(x) & np.isfinite(y)])
              for lab, x, y in finite]
    allx = np.concatenate([c[1] for c in finite]) if finite else np.zeros(1)
    ally = np.concatenate([c[2] for c in finite]) if finite else np.zeros(1)
    if allx.size == 0:
        allx = ally = np.zeros(1)
    x0, x1 = float(allx.min()), float(allx.max())
    y0, y1 = float(ally.min()), float(ally.max())
    if x1 - x0 < 1e-300:
        x0, x1 = x0 - 1, x1 + 1
    if y1 - y0 < 1e-300:
        y0, y1 = y0 - 1, y1 + 1
    pad = 50

    def px(v):
        return pad + (v - x0) / (x1 - x0) * (width - 2 * pad)

    def py(v):
        return height - pad - (v - y0) / (y1 - y0) * (height - 2 * pad)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}">',
        f'<rect x="{pad}" y="{pad}" width="{width - 2 * pad}" height="{height - 2 * pad}" '
        'fill="none" stroke="#888"/>',
        f'<text x="{width / 2:.1f}" y="{height - 12}" text-anchor="middle">{xlabel}</text>',
        f'<text x="14" y="{height / 2:.1f}" transform="rotate(-90 14 {height / 2:.1f})" '
        f'text-anchor="middle">{ylabel}</text>',
        f'<text x="{pad}" y="{height - pad + 16}" font-size="10">{x0:.4g}</text>',
        f'<text x="{width - pad}" y="{height - pad + 16}" font-size="10" '
        f'text-anchor="end">{x1:.4g}</text>',
        f'<text x="{pad - 4}" y="{height - pad}" font-size="10" text-anchor="end">{y0:.4g}</text>',
        f'<text x="{pad - 4}" y="{pad + 8}" font-size="10" text-anchor="end">{y1:.4g}</text>',
    ]
    for i, (label, xs, ys) in enumerate(finite):
        color = _COLORS[i % len(_COLORS)]
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(xs, ys))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        out.append(f'<text x="{width - pad - 4}" y="{pad + 14 * (i + 1)}" font-size="11" '
                   f'text-anchor="end" fill="{color}">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def json_safe(v):
    """Replace non-finite floats so the output is strict JSON."""
    if isinstance(v, dict):
        return {k: json_safe(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [json_safe(x) for x in v]
    if isinstance(v, (np.floating, float)):
        f = float(v)
        if math.isnan(f):
            return None
        if math.isinf(f):
            return "inf" if f > 0 else "-inf"
        return f
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, np.ndarray):
        return json_safe(v.tolist())
    return v
