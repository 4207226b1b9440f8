"""Contour plots as CSV, SVG and (optionally) PNG.

The CSV and SVG share one number formatter, so every SVG vertex appears
verbatim in the CSV.  PNG output goes through matplotlib and is imported only
when asked for.
"""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .coords import from_characteristic, to_characteristic
from .errors import EmptyWindow, ValidationError
from .lcmap import Contour, LCMap, contour

CSV_HEADER = "family,level,X,Y,x,y"
SVG_SIZE = 600

STYLE = """
polyline { fill: none; stroke-width: 1.2; vector-effect: non-scaling-stroke; }
polyline.u { stroke: #1f4e9c; }
polyline.v { stroke: #c0392b; stroke-dasharray: 4 2; }
polyline.highlight { stroke: #000000; stroke-width: 2.6; stroke-dasharray: none; }
circle.origin { fill: #000000; }
rect.frame { fill: none; stroke: #888888; stroke-width: 0.8; vector-effect: non-scaling-stroke; }
"""


def num(v: float) -> str:
    """12 significant digits, no negative zero."""
    return f"{float(v) + 0.0:.12g}"


@dataclass
class ContourSet:
    contours: list

    def rows(self):
        for c in self.contours:
            for seg in c.segments:
                x, y = from_characteristic(seg[:, 0], seg[:, 1])
                for X, Y, xx, yy in zip(seg[:, 0], seg[:, 1], x, y):
                    yield c.family, num(c.level), num(X), num(Y), num(xx), num(yy)

    def csv(self) -> str:
        lines = [CSV_HEADER]
        lines.extend(",".join(r) for r in self.rows())
        return "\n".join(lines) + "\n"


def _clip(seg: np.ndarray, window) -> list:
    """Split an (X, Y) polyline into the runs that lie inside the xy window."""
    x0, x1, y0, y1 = window
    x, y = from_characteristic(seg[:, 0], seg[:, 1])
    tol = 1e-12 * max(1.0, abs(x0), abs(x1), abs(y0), abs(y1))
    inside = (x >= x0 - tol) & (x <= x1 + tol) & (y >= y0 - tol) & (y <= y1 + tol)
    idx = np.nonzero(inside)[0]
    if idx.size == 0:
        return []
    runs = np.split(idx, np.nonzero(np.diff(idx) > 1)[0] + 1)
    return [seg[r] for r in runs if r.size >= 2]


def _merge_monotone(a: Contour, b: Contour) -> list:
    """For an invertible map each contour is a monotone relation between X and
    Y, so X-sampled and Y-sampled points interleave into one polyline."""
    pts = [p for p in (a.points, b.points) if p.size]
    if not pts:
        return []
    allp = np.vstack(pts)
    order = np.lexsort((allp[:, 1], allp[:, 0]))
    allp = allp[order]
    keep = np.ones(len(allp), dtype=bool)
    keep[1:] = np.any(np.diff(allp, axis=0) != 0, axis=1)
    return [allp[keep]]


def contour_set(m: LCMap, window, levels_u=(), levels_v=(), resolution: int = 201) -> ContourSet:
    x0, x1, y0, y1 = (float(v) for v in window)
    if not (x0 < x1 and y0 < y1):
        raise EmptyWindow(f"window {window} has no interior")
    if resolution < 2:
        raise ValidationError("resolution must be at least 2")
    # characteristic ranges covering the window
    Xs = np.linspace(x0 + y0, x1 + y1, resolution)
    Ys = np.linspace(y0 - x1, y1 - x0, resolution)
    Xwin = (float(Xs[0]), float(Xs[-1]))
    Ywin = (float(Ys[0]), float(Ys[-1]))
    out = []
    for family, levels in (("u", levels_u), ("v", levels_v)):
        for level in levels:
            by_x = contour(m, family, level, Xs, window=Ywin, by="X")
            by_y = contour(m, family, level, Ys, window=Xwin, by="Y")
            if m.invertible:
                segs = _merge_monotone(by_x, by_y)
            else:
                segs = by_x.segments + by_y.segments
            clipped = [c for s in segs for c in _clip(s, (x0, x1, y0, y1))]
            out.append(Contour(family, float(level), clipped))
    return ContourSet(out)


@dataclass
class Rendering:
    svg: str
    csv: str
    contours: ContourSet


def render_contours(m: LCMap, window=(-2.0, 2.0, -2.0, 2.0), levels_u=(), levels_v=(),
                    resolution: int = 201, highlights=()) -> Rendering:
    """Contour plot of the u and v families over an xy window.

    ``highlights`` is a collection of (family, level) pairs drawn in the
    highlight style.
    """
    cs = contour_set(m, window, levels_u, levels_v, resolution)
    hl = {(f, float(lv)) for f, lv in highlights}
    x0, x1, y0, y1 = (float(v) for v in window)
    s = SVG_SIZE / max(x1 - x0, y1 - y0)
    w, h = s * (x1 - x0), s * (y1 - y0)
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{num(w)}" height="{num(h)}" '
        f'viewBox="0 0 {num(w)} {num(h)}">',
        f"<style>{escape(STYLE)}</style>",
        f'<g transform="matrix({num(s)} 0 0 {num(-s)} {num(-s * x0)} {num(s * y1)})">',
        f'<rect class="frame" x="{num(x0)}" y="{num(y0)}" width="{num(x1 - x0)}" height="{num(y1 - y0)}"/>',
    ]
    for c in cs.contours:
        cls = c.family + (" highlight" if (c.family, c.level) in hl else "")
        for seg in c.segments:
            x, y = from_characteristic(seg[:, 0], seg[:, 1])
            pts = " ".join(f"{num(a)},{num(b)}" for a, b in zip(x, y))
            parts.append(f'<polyline class="{cls}" data-level="{num(c.level)}" points="{pts}"/>')
    if x0 <= 0 <= x1 and y0 <= 0 <= y1:
        parts.append(f'<circle class="origin" cx="0" cy="0" r="{num(3 / s)}"/>')
    parts.append("</g>")
    parts.append("</svg>")
    return Rendering("\n".join(parts) + "\n", cs.csv(), cs)


def render_figure(rendering: Rendering, path: str, window, highlights=(), dpi: int = 150) -> None:
    """Write the contour plot as a raster image with matplotlib."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    hl = {(f, float(lv)) for f, lv in highlights}
    x0, x1, y0, y1 = window
    fig, ax = plt.subplots(figsize=(6, 6 * (y1 - y0) / (x1 - x0)))
    colors = {"u": "#1f4e9c", "v": "#c0392b"}
    for c in rendering.contours.contours:
        strong = (c.family, c.level) in hl
        for seg in c.segments:
            x, y = from_characteristic(seg[:, 0], seg[:, 1])
            ax.plot(x, y, color="black" if strong else colors[c.family],
                    lw=2.2 if strong else 0.9, ls="-" if c.family == "u" or strong else "--")
    if x0 <= 0 <= x1 and y0 <= 0 <= y1:
        ax.plot([0], [0], "ko", ms=3)
    ax.set_xlim(x0, x1)
    ax.set_ylim(y0, y1)
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)


def window_characteristic(window):
    """Bounding ranges of X and Y over an xy window."""
    x0, x1, y0, y1 = window
    X = to_characteristic(np.array([x0, x0, x1, x1]), np.array([y0, y1, y0, y1]))
    return (float(X[0].min()), float(X[0].max())), (float(X[1].min()), float(X[1].max()))
