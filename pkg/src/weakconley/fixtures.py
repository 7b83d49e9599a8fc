"""Reference systems used by the tests, the audit command and the README."""

from __future__ import annotations

from fractions import Fraction

from .grid import Axis, CubicalSet, GridSpec
from .literals import parse_set
from .sampling import SampleSet, build_combo_map, build_mv_map


def doubling_grid(refinement: int = 4) -> GridSpec:
    """16 intervals ``[i/16 - 1/32, i/16 + 1/32]`` on the circle R/Z."""
    return GridSpec((Axis.circle(1),), Fraction(1, 16), Fraction(0), refinement)


def doubling_samples() -> SampleSet:
    pts = tuple(((Fraction(i, 16),), (Fraction(2 * i % 16, 16),)) for i in range(16))
    return SampleSet(1, pts)


def doubling_map(refinement: int = 4):
    grid = doubling_grid(refinement)
    return build_mv_map(build_combo_map(doubling_samples(), grid), grid)


# isolating neighbourhoods and invariant sets of the two worked examples
EXAMPLE1_N = "[15/16, 1/16]"
EXAMPLE1_S = "[31/32, 1/32]"
EXAMPLE1_P2 = "{15/16} u {1/16}"
EXAMPLE2_N = "[17/64, 27/64] u [37/64, 47/64]"
EXAMPLE2_S = "[9/32, 13/32] u [19/32, 23/32]"
EXAMPLE2_P2 = "{17/64} u {27/64} u {37/64} u {47/64}"


def example_set(grid: GridSpec, text: str) -> CubicalSet:
    return parse_set(text, grid)


def contracting_grid(refinement: int = 4) -> GridSpec:
    """Interval ``[-1, 1]`` cut into cells of width 1/4 aligned at 0."""
    return GridSpec((Axis.interval(-1, 1),), Fraction(1, 4), Fraction(1, 8), refinement)


def contracting_samples(per_cell: int = 4) -> SampleSet:
    """``g(x) = x/2`` sampled at ``per_cell`` interior points of each cell."""
    pts = []
    step = Fraction(1, 4 * per_cell)
    x = Fraction(-1) + step / 2
    while x < 1:
        pts.append(((x,), (x / 2,)))
        x += step
    return SampleSet(1, tuple(pts))


def contracting_map(refinement: int = 4):
    grid = contracting_grid(refinement)
    return build_mv_map(build_combo_map(contracting_samples(), grid), grid)


CONTRACTING_N = "[-3/8, 3/8]"


def identity_map(cells: int = 16, refinement: int = 4):
    grid = GridSpec((Axis.circle(1),), Fraction(1, cells), Fraction(0), refinement)
    pts = tuple(((Fraction(i, cells),), (Fraction(i, cells),)) for i in range(cells))
    return build_mv_map(build_combo_map(SampleSet(1, pts), grid), grid)
