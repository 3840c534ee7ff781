"""Minimal self-contained SVG log-log line plots (no plotting library needed)."""

from __future__ import annotations

import math
from html import escape

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf")


def _decades(lo, hi):
    return list(range(math.floor(math.log10(lo)), math.ceil(math.log10(hi)) + 1))


def loglog_svg(curves, xlabel="d (m)", ylabel="|F| (N)", title="", width=640, height=420):
    """Render ``{label: (xs, ys)}`` as an SVG string; non-positive points are skipped."""
    pts = {k: [(x, y) for x, y in zip(xs, ys) if x > 0 and y > 0] for k, (xs, ys) in curves.items()}
    allx = [x for p in pts.values() for x, _ in p]
    ally = [y for p in pts.values() for _, y in p]
    left, right, top, bottom = 80, 20, 30, 50
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'font-family="sans-serif" font-size="12">',
           f'<rect width="{width}" height="{height}" fill="white"/>']
    if title:
        out.append(f'<text x="{width / 2}" y="18" text-anchor="middle">{escape(title)}</text>')
    if not allx:
        out.append(f'<text x="{width / 2}" y="{height / 2}" text-anchor="middle">no positive data</text>')
        out.append("</svg>")
        return "\n".join(out)

    lx0, lx1 = math.log10(min(allx)), math.log10(max(allx))
    ly0, ly1 = math.log10(min(ally)), math.log10(max(ally))
    if lx1 == lx0:
        lx0, lx1 = lx0 - 0.5, lx1 + 0.5
    if ly1 == ly0:
        ly0, ly1 = ly0 - 0.5, ly1 + 0.5
    pw, ph = width - left - right, height - top - bottom

    def sx(x):
        return left + (math.log10(x) - lx0) / (lx1 - lx0) * pw

    def sy(y):
        return top + (ly1 - math.log10(y)) / (ly1 - ly0) * ph

    out.append(f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    for k in _decades(10 ** lx0, 10 ** lx1):
        if lx0 <= k <= lx1:
            X = sx(10.0 ** k)
            out.append(f'<line x1="{X:.2f}" y1="{top}" x2="{X:.2f}" y2="{top + ph}" stroke="#ddd"/>')
            out.append(f'<text x="{X:.2f}" y="{top + ph + 16}" text-anchor="middle">1e{k}</text>')
    for k in _decades(10 ** ly0, 10 ** ly1):
        if ly0 <= k <= ly1:
            Y = sy(10.0 ** k)
            out.append(f'<line x1="{left}" y1="{Y:.2f}" x2="{left + pw}" y2="{Y:.2f}" stroke="#ddd"/>')
            out.append(f'<text x="{left - 6}" y="{Y + 4:.2f}" text-anchor="end">1e{k}</text>')
    out.append(f'<text x="{left + pw / 2}" y="{height - 10}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{top + ph / 2}" text-anchor="middle" '
               f'transform="rotate(-90 16 {top + ph / 2})">{escape(ylabel)}</text>')
    for i, (label, p) in enumerate(pts.items()):
        color = _COLORS[i % len(_COLORS)]
        path = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in p)
        out.append(f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        out.append(f'<text x="{left + pw - 8}" y="{top + 16 + 14 * i}" text-anchor="end" '
                   f'fill="{color}">{escape(str(label))}</text>')
    out.append("</svg>")
    return "\n".join(out)
