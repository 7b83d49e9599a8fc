"""SVG pictures of one-dimensional sampled maps.

Layers, bottom to top: grid lines, the graph of F as a union of boxes
``tau x F(tau)`` over the coarse cells and vertices, optional highlights of
N, S and F(S) on the axes, the sample points, and a legend.  Higher
dimensional maps are drawn as per-axis projections.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from xml.sax.saxutils import escape

from .dyadic import format_fraction
from .grid import CubicalSet, GridSpec
from .literals import components_1d
from .sampling import MvMap, SampleSet, build_mv_map


class UnsupportedDimension(ValueError):
    pass


DEFAULT_COLORS = {
    "graph": "#3b6fd4",
    "graph_edge": "#1f3f8f",
    "samples": "#000000",
    "grid": "#c8c8c8",
    "N": "#2e9e44",
    "S": "#d62728",
    "F(S)": "#ff7f0e",
    "background": "#ffffff",
}

SIZE = 480
MARGIN = 56
LEGEND_W = 150


@dataclass
class Overlays:
    n: CubicalSet | None = None
    s: CubicalSet | None = None
    fs: CubicalSet | None = None


@dataclass
class _Panel:
    """One square plot; coordinates are exact fractions until rendering."""

    x0: float
    y0: float
    xwin: tuple
    ywin: tuple
    xper: Fraction | None
    yper: Fraction | None
    parts: list = field(default_factory=list)

    def sx(self, x) -> float:
        lo, hi = self.xwin
        return self.x0 + float((Fraction(x) - lo) / (hi - lo)) * SIZE

    def sy(self, y) -> float:
        lo, hi = self.ywin
        return self.y0 + SIZE - float((Fraction(y) - lo) / (hi - lo)) * SIZE

    def shifts(self, per, a, b, win):
        """Period shifts that bring ``[a, b]`` into the window."""
        if per is None:
            return [0]
        out = []
        k = -2
        while k <= 2:
            if a + k * per <= win[1] and b + k * per >= win[0]:
                out.append(k * per)
            k += 1
        return out


def _f(v: float) -> str:
    return f"{v:.2f}"


def _window(grid: GridSpec, axis: int) -> tuple:
    ax = grid.axes[axis]
    if ax.periodic:
        return (Fraction(0), ax.period)
    return (ax.lo, ax.hi)


def _rep_coord(grid: GridSpec, k: int) -> Fraction:
    return grid.base + k * grid.rep_width


def _graph_boxes(f: MvMap, axis: int = 0):
    """``(x-interval, y-interval, degenerate)`` per coarse cube of F, projected to ``axis``."""
    g = f.grid
    coarse = build_mv_map(f.combo, g.refined(1)) if f.combo is not None else f
    cg = coarse.grid
    out = []
    seen = set()
    for cube, box in sorted(coarse.table.items()):
        if box is None:
            continue
        k, e = cube[axis]
        a, b = box[axis]
        key = (k, e, a, b)
        if key in seen:
            continue
        seen.add(key)
        xi = (_rep_coord(cg, k), _rep_coord(cg, k + e))
        yi = (_rep_coord(cg, a), _rep_coord(cg, b))
        out.append((xi, yi, e == 0))
    return out


def _grid_lines(grid: GridSpec, axis: int, win):
    w = grid.cell_width
    v = grid.base + ((win[0] - grid.base) // w) * w
    lines = []
    while v <= win[1]:
        if v >= win[0]:
            lines.append(v)
        v += w
    return lines


def _arcs(s: CubicalSet):
    g = s.grid
    return [(_rep_coord(g, a), _rep_coord(g, b)) for a, b in components_1d(s)]


def _ticks(win, grid: GridSpec):
    """Roughly five exact tick values on a window."""
    lo, hi = win
    w = grid.cell_width
    n = int((hi - lo) / w)
    step = max(1, n // 4)
    out = []
    v = lo
    while v <= hi:
        out.append(v)
        v += step * w
    if out[-1] != hi:
        out.append(hi)
    return out


def _draw_panel(p: _Panel, grid: GridSpec, axis: int, boxes, points, overlays: Overlays, colors, title):
    parts = p.parts
    cid = f"clip{axis}"
    parts.append(f'<clipPath id="{cid}"><rect x="{_f(p.x0)}" y="{_f(p.y0)}" '
                 f'width="{SIZE}" height="{SIZE}"/></clipPath>')
    parts.append(f'<rect x="{_f(p.x0)}" y="{_f(p.y0)}" width="{SIZE}" height="{SIZE}" '
                 f'fill="{colors["background"]}" stroke="#000000" stroke-width="1"/>')
    parts.append(f'<g id="grid-{axis}" stroke="{colors["grid"]}" stroke-width="0.6">')
    for v in _grid_lines(grid, axis, p.xwin):
        parts.append(f'<line x1="{_f(p.sx(v))}" y1="{_f(p.y0)}" x2="{_f(p.sx(v))}" y2="{_f(p.y0 + SIZE)}"/>')
    for v in _grid_lines(grid, axis, p.ywin):
        parts.append(f'<line x1="{_f(p.x0)}" y1="{_f(p.sy(v))}" x2="{_f(p.x0 + SIZE)}" y2="{_f(p.sy(v))}"/>')
    parts.append("</g>")

    parts.append(f'<g id="graph-{axis}" clip-path="url(#{cid})" fill="{colors["graph"]}" '
                 f'fill-opacity="0.55" stroke="{colors["graph_edge"]}" stroke-width="0.8">')
    for (xa, xb), (ya, yb), degenerate in boxes:
        for dx in p.shifts(p.xper, xa, xb, p.xwin):
            for dy in p.shifts(p.yper, ya, yb, p.ywin):
                x1, x2 = p.sx(xa + dx), p.sx(xb + dx)
                y1, y2 = p.sy(yb + dy), p.sy(ya + dy)
                if degenerate:
                    parts.append(f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x1)}" y2="{_f(y2)}" '
                                 f'stroke-width="2"/>')
                else:
                    parts.append(f'<rect x="{_f(x1)}" y="{_f(y1)}" width="{_f(x2 - x1)}" '
                                 f'height="{_f(y2 - y1)}"/>')
    parts.append("</g>")

    marks = (("N", overlays.n, "x", 10), ("S", overlays.s, "x", 4), ("F(S)", overlays.fs, "y", 6))
    for name, s, where, off in marks:
        if s is None or not s.cells:
            continue
        parts.append(f'<g id="overlay-{name}-{axis}" stroke="{colors[name]}" stroke-width="5" '
                     f'stroke-linecap="butt" fill="none">')
        for a, b in _arcs(s):
            per = p.xper if where == "x" else p.yper
            win = p.xwin if where == "x" else p.ywin
            for d in p.shifts(per, a, b, win):
                lo, hi = max(a + d, win[0]), min(b + d, win[1])
                if where == "x":
                    y = p.y0 + SIZE + off
                    parts.append(f'<line x1="{_f(p.sx(lo))}" y1="{_f(y)}" x2="{_f(p.sx(hi))}" y2="{_f(y)}"/>')
                else:
                    x = p.x0 - off
                    parts.append(f'<line x1="{_f(x)}" y1="{_f(p.sy(lo))}" x2="{_f(x)}" y2="{_f(p.sy(hi))}"/>')
        parts.append("</g>")

    parts.append(f'<g id="samples-{axis}" fill="{colors["samples"]}">')
    for x, y in points:
        parts.append(f'<circle cx="{_f(p.sx(x))}" cy="{_f(p.sy(y))}" r="2.5"/>')
    parts.append("</g>")

    parts.append('<g font-family="sans-serif" font-size="11" fill="#000000">')
    for v in _ticks(p.xwin, grid):
        parts.append(f'<text x="{_f(p.sx(v))}" y="{_f(p.y0 + SIZE + 30)}" text-anchor="middle">'
                     f'{format_fraction(v)}</text>')
    for v in _ticks(p.ywin, grid):
        parts.append(f'<text x="{_f(p.x0 - 14)}" y="{_f(p.sy(v) + 4)}" text-anchor="end">'
                     f'{format_fraction(v)}</text>')
    parts.append(f'<text x="{_f(p.x0 + SIZE / 2)}" y="{_f(p.y0 - 10)}" text-anchor="middle" '
                 f'font-size="13">{escape(title)}</text>')
    parts.append("</g>")


def _legend(x, y, colors, overlays: Overlays, has_samples: bool, has_graph: bool = True) -> list:
    entries = [("graph", "graph of F", "box")] if has_graph else []
    if has_samples:
        entries.append(("samples", "sample points", "dot"))
    for key, s, label in (("N", overlays.n, "N"), ("S", overlays.s, "S = Inv N"), ("F(S)", overlays.fs, "F(S)")):
        if s is not None:
            entries.append((key, label, "line"))
    out = ['<g id="legend" font-family="sans-serif" font-size="12">',
           f'<rect x="{_f(x)}" y="{_f(y)}" width="{LEGEND_W - 16}" height="{18 * len(entries) + 10}" '
           f'fill="#ffffff" stroke="#888888"/>']
    for i, (key, label, kind) in enumerate(entries):
        cy = y + 16 + 18 * i
        c = colors[key]
        if kind == "box":
            out.append(f'<rect x="{_f(x + 8)}" y="{_f(cy - 6)}" width="14" height="10" fill="{c}" fill-opacity="0.55"/>')
        elif kind == "dot":
            out.append(f'<circle cx="{_f(x + 15)}" cy="{_f(cy - 1)}" r="3" fill="{c}"/>')
        else:
            out.append(f'<line x1="{_f(x + 8)}" y1="{_f(cy - 1)}" x2="{_f(x + 22)}" y2="{_f(cy - 1)}" '
                       f'stroke="{c}" stroke-width="4"/>')
        out.append(f'<text x="{_f(x + 30)}" y="{_f(cy + 3)}">{escape(label)}</text>')
    out.append("</g>")
    return out


def _document(width, height, body) -> str:
    head = ('<?xml version="1.0" encoding="UTF-8" standalone="no"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}">\n')
    return head + "\n".join(body) + "\n</svg>\n"


def render_figure(grid: GridSpec, f: MvMap | None, samples: SampleSet | None,
                  overlays: Overlays | None = None, colors: dict | None = None,
                  title: str = "graph of F and its sampling") -> str:
    """SVG 1.1 document for a one-dimensional map; ``f`` may be None (grid only)."""
    if grid.dimension != 1:
        raise UnsupportedDimension(f"figures are drawn for d = 1 only (got d = {grid.dimension}); "
                                   "use render_projection")
    return _render(grid, f, samples, overlays, colors, [0], title)


def render_projection(grid: GridSpec, f: MvMap | None, samples: SampleSet | None,
                      overlays: Overlays | None = None, colors: dict | None = None) -> str:
    """One panel per axis j: ``x_j`` against ``y_j`` (boxes and samples projected)."""
    return _render(grid, f, samples, overlays, colors, list(range(grid.dimension)), None)


def _render(grid, f, samples, overlays, colors, axes, title) -> str:
    overlays = overlays or Overlays()
    if grid.dimension != 1:
        overlays = Overlays()  # highlights are one-dimensional arcs
    cols = dict(DEFAULT_COLORS)
    cols.update(colors or {})
    body = [f'<rect x="0" y="0" width="100%" height="100%" fill="{cols["background"]}"/>']
    pts = samples.points if samples is not None else ()
    for i, j in enumerate(axes):
        p = _Panel(MARGIN + i * (SIZE + MARGIN), MARGIN, _window(grid, j), _window(grid, j),
                   grid.axes[j].period, grid.axes[j].period)
        boxes = _graph_boxes(f, j) if f is not None else []
        name = title if title is not None else f"axis {j}: x{j} against y{j}"
        _draw_panel(p, grid, j, boxes, [(x[j], y[j]) for x, y in pts], overlays, cols, name)
        body.extend(p.parts)
    width = MARGIN + len(axes) * (SIZE + MARGIN) + LEGEND_W
    body.extend(_legend(width - LEGEND_W, MARGIN, cols, overlays, bool(pts), f is not None))
    return _document(width, SIZE + 2 * MARGIN, body)


__all__ = ["DEFAULT_COLORS", "Overlays", "UnsupportedDimension", "render_figure", "render_projection"]
