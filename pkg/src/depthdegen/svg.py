"""Minimal deterministic SVG charts (lines, bands, scatter with error bars, bars)."""

import math
from xml.sax.saxutils import escape

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")
W, H = 640, 420
ML, MR, MT, MB = 70, 20, 40, 50


def _n(v):
    return f"{v:.2f}"


def _finite(vals):
    return [v for v in vals if v is not None and math.isfinite(v)]


class Plot:
    def __init__(self, title, xlabel, ylabel):
        self.title, self.xlabel, self.ylabel = title, xlabel, ylabel
        self.items = []

    def line(self, xs, ys, label, band=None):
        self.items.append(("line", list(xs), list(ys), label, band))

    def scatter(self, xs, ys, label, yerr=None):
        self.items.append(("scatter", list(xs), list(ys), label, yerr))

    def bars(self, edges, heights, label):
        self.items.append(("bars", list(edges), list(heights), label, None))

    def _extent(self):
        xs, ys = [], []
        for kind, x, y, _, extra in self.items:
            xs += _finite(x)
            ys += _finite(y)
            if kind == "line" and extra:
                ys += _finite(extra[0]) + _finite(extra[1])
            if kind == "scatter" and extra:
                ys += _finite([a + e for a, e in zip(y, extra)])
                ys += _finite([a - e for a, e in zip(y, extra)])
            if kind == "bars":
                ys.append(0.0)
        if not xs or not ys:
            return 0.0, 1.0, 0.0, 1.0
        x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
        if x0 == x1:
            x0, x1 = x0 - 1, x1 + 1
        if y0 == y1:
            y0, y1 = y0 - 1, y1 + 1
        pad = 0.05 * (y1 - y0)
        return x0, x1, y0 - pad, y1 + pad

    def render(self) -> str:
        x0, x1, y0, y1 = self._extent()

        def px(v):
            return ML + (v - x0) / (x1 - x0) * (W - ML - MR)

        def py(v):
            return H - MB - (v - y0) / (y1 - y0) * (H - MT - MB)

        out = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
            f'viewBox="0 0 {W} {H}">',
            f'<rect width="{W}" height="{H}" fill="white"/>',
            f'<text x="{W / 2}" y="22" text-anchor="middle" font-size="15">{escape(self.title)}</text>',
            f'<line x1="{ML}" y1="{H - MB}" x2="{W - MR}" y2="{H - MB}" stroke="black"/>',
            f'<line x1="{ML}" y1="{MT}" x2="{ML}" y2="{H - MB}" stroke="black"/>',
            f'<text x="{W / 2}" y="{H - 12}" text-anchor="middle" font-size="12">{escape(self.xlabel)}</text>',
            f'<text x="16" y="{H / 2}" text-anchor="middle" font-size="12" '
            f'transform="rotate(-90 16 {H / 2})">{escape(self.ylabel)}</text>',
        ]
        for i in range(5):
            xv = x0 + i * (x1 - x0) / 4
            yv = y0 + i * (y1 - y0) / 4
            out.append(f'<text x="{_n(px(xv))}" y="{H - MB + 16}" text-anchor="middle" '
                       f'font-size="10">{xv:.4g}</text>')
            out.append(f'<text x="{ML - 6}" y="{_n(py(yv) + 3)}" text-anchor="end" '
                       f'font-size="10">{yv:.4g}</text>')
        for k, (kind, xs, ys, label, extra) in enumerate(self.items):
            color = COLORS[k % len(COLORS)]
            if kind == "line":
                if extra:
                    lo, hi = extra
                    pts = [(x, h) for x, h in zip(xs, hi) if math.isfinite(h)]
                    pts += [(x, l) for x, l in reversed(list(zip(xs, lo))) if math.isfinite(l)]
                    if pts:
                        poly = " ".join(f"{_n(px(a))},{_n(py(b))}" for a, b in pts)
                        out.append(f'<polygon points="{poly}" fill="{color}" fill-opacity="0.2" stroke="none"/>')
                pts = [(a, b) for a, b in zip(xs, ys) if math.isfinite(b)]
                if pts:
                    path = " ".join(f"{_n(px(a))},{_n(py(b))}" for a, b in pts)
                    out.append(f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="1.8"/>')
            elif kind == "scatter":
                for j, (a, b) in enumerate(zip(xs, ys)):
                    if not (math.isfinite(a) and math.isfinite(b)):
                        continue
                    if extra:
                        e = extra[j]
                        out.append(f'<line x1="{_n(px(a))}" y1="{_n(py(b - e))}" x2="{_n(px(a))}" '
                                   f'y2="{_n(py(b + e))}" stroke="{color}" stroke-opacity="0.6"/>')
                    out.append(f'<circle cx="{_n(px(a))}" cy="{_n(py(b))}" r="3" fill="{color}"/>')
            else:
                for left, right, h in zip(xs, xs[1:], ys):
                    out.append(f'<rect x="{_n(px(left))}" y="{_n(py(h))}" width="{_n(px(right) - px(left))}" '
                               f'height="{_n(py(0) - py(h))}" fill="{color}" fill-opacity="0.35"/>')
            ly = MT + 14 * k + 6
            out.append(f'<rect x="{W - MR - 150}" y="{ly - 8}" width="10" height="10" fill="{color}"/>')
            out.append(f'<text x="{W - MR - 135}" y="{ly + 1}" font-size="11">{escape(label)}</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"
