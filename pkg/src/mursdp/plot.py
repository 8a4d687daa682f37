"""
Minimal SVG output for tradeoff curves.

Two observables give one panel with the boundary points joined in order of
their weight angle; three observables give the three pairwise projections.
"""

import math
from xml.sax.saxutils import escape

import numpy as np

PANEL = 320
MARGIN = 48


def _ticks(hi, count=5):
    if hi <= 0:
        return [0.0]
    raw = hi / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((s * mag for s in (1, 2, 2.5, 5, 10) if s * mag >= raw), default=raw)
    return [k * step for k in range(int(hi / step + 1e-9) + 1)]


def _panel(points, i, j, cap_i, cap_j, ox, label_x, label_y):
    span = PANEL - 2 * MARGIN
    hi_x, hi_y = max(cap_i, 1e-12), max(cap_j, 1e-12)

    def px(v):
        return ox + MARGIN + span * v / hi_x

    def py(v):
        return PANEL - MARGIN - span * v / hi_y

    out = [
        f'<rect x="{ox + MARGIN}" y="{MARGIN}" width="{span}" height="{span}" fill="none" stroke="#999"/>',
    ]
    for t in _ticks(hi_x):
        out.append(f'<line x1="{px(t):.2f}" y1="{py(0):.2f}" x2="{px(t):.2f}" y2="{py(0) + 4:.2f}" stroke="#000"/>')
        out.append(f'<text x="{px(t):.2f}" y="{py(0) + 16:.2f}" font-size="10" text-anchor="middle">{t:g}</text>')
    for t in _ticks(hi_y):
        out.append(f'<line x1="{px(0) - 4:.2f}" y1="{py(t):.2f}" x2="{px(0):.2f}" y2="{py(t):.2f}" stroke="#000"/>')
        out.append(f'<text x="{px(0) - 6:.2f}" y="{py(t) + 3:.2f}" font-size="10" text-anchor="end">{t:g}</text>')
    out.append(
        f'<text x="{ox + PANEL / 2:.2f}" y="{PANEL - 10}" font-size="12" text-anchor="middle">{escape(label_x)}</text>'
    )
    out.append(
        f'<text x="{ox + 14}" y="{PANEL / 2:.2f}" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 {ox + 14} {PANEL / 2:.2f})">{escape(label_y)}</text>'
    )
    good = [p for p in points if p.status == "optimal" and np.all(np.isfinite(p.epsilon))]
    good.sort(key=lambda p: math.atan2(p.w[j], p.w[i]))
    if len(points[0].w) == 2 and len(good) > 1:
        path = " ".join(
            f"{'M' if k == 0 else 'L'}{px(p.epsilon[i]):.2f},{py(p.epsilon[j]):.2f}" for k, p in enumerate(good)
        )
        out.append(f'<path d="{path}" fill="none" stroke="#1f4e9c" stroke-width="1.5"/>')
    for p in good:
        out.append(f'<circle cx="{px(p.epsilon[i]):.2f}" cy="{py(p.epsilon[j]):.2f}" r="2.2" fill="#c0392b"/>')
    return out


def region_svg(sample, names=None, title=None):
    """SVG document for a :class:`~mursdp.region.RegionSample`."""
    n = len(sample.caps)
    names = names or [f"eps_{k + 1}" for k in range(n)]
    if n < 2:
        raise ValueError("plotting needs at least two observables")
    pairs = [(0, 1)] if n == 2 else [(a, b) for a in range(n) for b in range(a + 1, n)]
    width = PANEL * len(pairs)
    body = []
    for k, (i, j) in enumerate(pairs):
        body += _panel(sample.points, i, j, sample.caps[i], sample.caps[j], k * PANEL, names[i], names[j])
    head = title or f"error measure {sample.measure}"
    return "\n".join(
        [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{PANEL + 24}" '
            f'viewBox="0 -24 {width} {PANEL + 24}" font-family="sans-serif">',
            f'<text x="{width / 2:.1f}" y="-6" font-size="13" text-anchor="middle">{escape(head)}</text>',
            *body,
            "</svg>",
            "",
        ]
    )
