"""Textual cubical-set literals.

Grammar (whitespace is free)::

    set     := "empty" | "whole" | term ( ("u" | "U" | "∪") term )*
    term    := factor ( ("x" | "×") factor )*
    factor  := "[" num "," num "]" | "{" num "}"

On a periodic axis ``[a, b]`` with ``b < a`` is the arc running through the
period boundary, e.g. ``[15/16, 1/16]`` on R/Z.
"""

from __future__ import annotations

import re

from .dyadic import NonDyadicError, as_dyadic, format_fraction
from .grid import CubicalSet, GridError, GridSpec, box_cells, cube_dim


class LiteralError(ValueError):
    pass


_UNION = re.compile(r"\s+[uU]\s+|∪")
_PRODUCT = re.compile(r"(?<=[\]\}])\s*[x×]\s*(?=[\[\{])")


def _factor(tok: str, grid: GridSpec, axis: int):
    tok = tok.strip()
    try:
        if tok.startswith("{") and tok.endswith("}"):
            v = as_dyadic(tok[1:-1])
            k = grid.to_rep(v, axis)
            return (k, k)
        if tok.startswith("[") and tok.endswith("]"):
            parts = tok[1:-1].split(",")
            if len(parts) != 2:
                raise LiteralError(f"interval needs two endpoints: {tok!r}")
            lo, hi = (as_dyadic(p) for p in parts)
            ax = grid.axes[axis]
            a = grid.to_rep(lo, axis)
            if ax.periodic:
                length = hi - lo if hi >= lo else hi - lo + ax.period
                if length >= ax.period:
                    return (a, a + grid.periods[axis])
                span = length / grid.rep_width
                if span.denominator != 1:
                    raise GridError(f"{tok} is not a grid interval")
                grid.to_rep(hi, axis)
                return (a, a + int(span))
            b = grid.to_rep(hi, axis)
            if b < a:
                raise LiteralError(f"empty interval {tok!r}")
            return (a, b)
    except (GridError, NonDyadicError) as exc:
        raise LiteralError(str(exc)) from exc
    raise LiteralError(f"cannot parse factor {tok!r}")


def parse_set(text: str, grid: GridSpec) -> CubicalSet:
    s = text.strip()
    if s in ("empty", "{}", ""):
        return CubicalSet.empty(grid)
    if s == "whole":
        return CubicalSet.whole(grid)
    cells = set()
    for term in _UNION.split(s):
        factors = _PRODUCT.split(term.strip())
        if len(factors) != grid.dimension:
            raise LiteralError(f"{term!r} has {len(factors)} factors, grid dimension is {grid.dimension}")
        box = tuple(_factor(t, grid, j) for j, t in enumerate(factors))
        cells.update(box_cells(grid, box))
    return CubicalSet(grid, frozenset(cells))


def _fmt_interval(grid: GridSpec, axis: int, a: int, b: int) -> str:
    lo, hi = grid.from_rep(a, axis), grid.from_rep(b, axis)
    if a == b:
        return "{" + format_fraction(lo) + "}"
    return f"[{format_fraction(lo)}, {format_fraction(hi)}]"


def components_1d(s: CubicalSet) -> list:
    """Maximal arcs/intervals ``(a, b)`` (rep units) of a one-dimensional set.

    A full circle is reported as ``(0, period)``.
    """
    g = s.grid
    per = g.periods[0]
    occ = sorted({2 * c[0][0] + c[0][1] for c in s.cells})
    if not occ:
        return []
    if per is not None and len(occ) == 2 * per:
        return [(0, per)]
    runs = []
    start = prev = occ[0]
    for p in occ[1:]:
        if p == prev + 1:
            prev = p
            continue
        runs.append((start, prev))
        start = prev = p
    runs.append((start, prev))
    if per is not None and len(runs) > 1 and runs[0][0] == 0 and runs[-1][1] == 2 * per - 1:
        first = runs.pop(0)
        last = runs.pop()
        runs.append((last[0], first[1] + 2 * per))
    return sorted((a // 2, (b + 1) // 2) for a, b in runs)


def format_set(s: CubicalSet) -> str:
    """Readable literal for a cubical set; round-trips through :func:`parse_set`."""
    g = s.grid
    if not s.cells:
        return "empty"
    if g.dimension == 1:
        parts = []
        for a, b in components_1d(s):
            if g.periods[0] is not None and b - a == g.periods[0]:
                parts.append(f"[{format_fraction(g.from_rep(a, 0))}, "
                             f"{format_fraction(g.from_rep(a, 0) + g.axes[0].period)}]")
            else:
                parts.append(_fmt_interval(g, 0, a, b))
        return " u ".join(parts)
    terms = []
    for c in s.maximal_cells():
        terms.append(" x ".join(_fmt_interval(g, j, k, k + e) for j, (k, e) in enumerate(c)))
    return " u ".join(terms)


def cube_to_json(grid: GridSpec, cube) -> list:
    return [[format_fraction(v) for v in (grid.from_rep(k, j), grid.from_rep(k, j) + e * grid.rep_width)]
            for j, (k, e) in enumerate(cube)]


def set_to_json(s: CubicalSet) -> dict:
    return {
        "literal": format_set(s),
        "maximal_cubes": [cube_to_json(s.grid, c) for c in s.maximal_cells()],
        "cells": len(s.cells),
        "top_cells": sum(1 for c in s.cells if cube_dim(c) == s.grid.dimension),
    }
