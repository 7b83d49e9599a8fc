"""Uniform cubical grids, elementary cubes and face-closed cubical sets.

All combinatorics happens at the *representation* scale: the coarse sampling
cell width ``w`` divided by the refinement factor ``r``.  An integer ``k`` on an
axis stands for the coordinate ``offset - w/2 + k*w/r``.  An elementary cube is
a tuple with one ``(k, e)`` pair per axis, ``e`` being 0 for a degenerate
interval ``[k, k]`` and 1 for a unit interval ``[k, k+1]``.  On periodic axes
``k`` is always reduced modulo the period (in representation units).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Iterator

from .dyadic import as_dyadic, format_fraction

Cube = tuple  # tuple[tuple[int, int], ...]
Box = tuple  # tuple[tuple[int, int], ...], per-axis rep interval [a, b]


class HullAmbiguous(ValueError):
    """No canonical minimal arc exists on some periodic axis."""


class GridMismatch(ValueError):
    pass


class GridError(ValueError):
    """Inconsistent grid description or unrepresentable coordinate."""


@dataclass(frozen=True)
class Axis:
    periodic: bool
    period: Fraction | None = None
    lo: Fraction | None = None
    hi: Fraction | None = None

    @classmethod
    def circle(cls, period=1) -> Axis:
        return cls(True, period=as_dyadic(period))

    @classmethod
    def interval(cls, lo, hi) -> Axis:
        return cls(False, lo=as_dyadic(lo), hi=as_dyadic(hi))

    def to_json(self) -> dict:
        if self.periodic:
            return {"periodic": True, "period": format_fraction(self.period)}
        return {"periodic": False, "lo": format_fraction(self.lo), "hi": format_fraction(self.hi)}

    @classmethod
    def from_json(cls, obj: dict) -> Axis:
        if obj.get("periodic"):
            return cls.circle(obj["period"])
        return cls.interval(obj["lo"], obj["hi"])


@dataclass(frozen=True)
class GridSpec:
    """A uniform grid on a product of circles and intervals.

    Coarse cell ``i`` on an axis spans ``[offset + i*w - w/2, offset + i*w + w/2]``.
    """

    axes: tuple
    cell_width: Fraction
    offset: Fraction = Fraction(0)
    refinement: int = 4

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        object.__setattr__(self, "cell_width", as_dyadic(self.cell_width))
        object.__setattr__(self, "offset", as_dyadic(self.offset))
        if not self.axes:
            raise GridError("grid needs at least one axis")
        if self.cell_width <= 0:
            raise GridError("cell width must be positive")
        r = self.refinement
        if r < 1 or r & (r - 1):
            raise GridError(f"refinement must be a power of two, got {r}")
        w = self.cell_width
        for ax in self.axes:
            if ax.periodic:
                m = ax.period / w
                if m.denominator != 1 or m < 1:
                    raise GridError(f"period {ax.period} is not a multiple of cell width {w}")
                if m * r < 3:
                    raise GridError("a periodic axis needs at least 3 representation cells")
            else:
                if ax.hi <= ax.lo:
                    raise GridError("empty interval axis")
                for end in (ax.lo, ax.hi):
                    i = (end - self.base) / w
                    if i.denominator != 1:
                        raise GridError(f"bound {end} is not on a coarse cell boundary")

    def __hash__(self):
        # grids key several lru caches; avoid rehashing the Fractions every call
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.axes, self.cell_width, self.offset, self.refinement))
            self.__dict__["_hash"] = h
        return h

    # -- derived geometry ---------------------------------------------------
    @property
    def dimension(self) -> int:
        return len(self.axes)

    @property
    def rep_width(self) -> Fraction:
        return self.cell_width / self.refinement

    @property
    def base(self) -> Fraction:
        return self.offset - self.cell_width / 2

    @cached_property
    def periods(self) -> tuple:
        """Period in representation units per axis (None on interval axes)."""
        return tuple(
            int(ax.period / self.rep_width) if ax.periodic else None for ax in self.axes
        )

    @cached_property
    def rep_bounds(self) -> tuple:
        """Vertex range ``(k_lo, k_hi)`` per interval axis (None on periodic axes)."""
        out = []
        for ax in self.axes:
            if ax.periodic:
                out.append(None)
            else:
                out.append((int((ax.lo - self.base) / self.rep_width),
                            int((ax.hi - self.base) / self.rep_width)))
        return tuple(out)

    @cached_property
    def coarse_shape(self) -> tuple:
        """Per axis: number of coarse cells (periodic) or the index range (interval)."""
        out = []
        for ax, b in zip(self.axes, self.rep_bounds):
            if ax.periodic:
                out.append(int(ax.period / self.cell_width))
            else:
                out.append((b[0] // self.refinement, b[1] // self.refinement))
        return tuple(out)

    def refined(self, refinement: int) -> GridSpec:
        return GridSpec(self.axes, self.cell_width, self.offset, refinement)

    def product(self) -> GridSpec:
        """The grid on X x X used for graphs of multivalued maps."""
        return GridSpec(self.axes + self.axes, self.cell_width, self.offset, self.refinement)

    # -- coordinates ----------------------------------------------------------
    def to_rep(self, x, axis: int) -> int:
        k = (as_dyadic(x) - self.base) / self.rep_width
        if k.denominator != 1:
            raise GridError(
                f"coordinate {format_fraction(x)} is not a grid point at refinement {self.refinement}"
            )
        k = int(k)
        per = self.periods[axis]
        if per is not None:
            return k % per
        lo, hi = self.rep_bounds[axis]
        if not lo <= k <= hi:
            raise GridError(f"coordinate {format_fraction(x)} lies outside the domain")
        return k

    def from_rep(self, k: int, axis: int) -> Fraction:
        x = self.base + k * self.rep_width
        ax = self.axes[axis]
        if ax.periodic:
            x %= ax.period
        return x

    def reduce_point(self, x: Iterable) -> tuple:
        """Reduce periodic coordinates into ``[0, period)`` and validate bounds."""
        out = []
        for j, (v, ax) in enumerate(zip(x, self.axes)):
            v = as_dyadic(v)
            if ax.periodic:
                v %= ax.period
            elif not ax.lo <= v <= ax.hi:
                raise GridError(f"coordinate {format_fraction(v)} outside [{ax.lo}, {ax.hi}] on axis {j}")
            out.append(v)
        return tuple(out)

    def coarse_cells_of_point(self, x) -> list:
        """All closed coarse cells containing the point ``x``."""
        per_axis = []
        w = self.cell_width
        for j, (v, ax) in enumerate(zip(x, self.axes)):
            t = (as_dyadic(v) - self.base) / w  # cell i covers t in [i, i+1]
            cands = {t.numerator // t.denominator}
            if t.denominator == 1:
                cands.add(int(t) - 1)
            shape = self.coarse_shape[j]
            if ax.periodic:
                cands = {i % shape for i in cands}
            else:
                cands = {i for i in cands if shape[0] <= i < shape[1]}
            per_axis.append(sorted(cands))
        return [tuple(c) for c in itertools.product(*per_axis)]

    def coarse_box(self, index) -> Box:
        r = self.refinement
        box = []
        for j, i in enumerate(index):
            per = self.periods[j]
            a = i * r
            if per is not None:
                a %= per
            box.append((a, a + r))
        return tuple(box)

    def coarse_cells_containing(self, cube: Cube) -> list:
        """Coarse index vectors whose closed cell contains the elementary cube."""
        r = self.refinement
        per_axis = []
        for j, (k, e) in enumerate(cube):
            if e == 0 and k % r == 0:
                cands = [k // r - 1, k // r]
            else:
                cands = [k // r]
            shape = self.coarse_shape[j]
            if self.axes[j].periodic:
                cands = sorted({i % shape for i in cands})
            else:
                cands = [i for i in cands if shape[0] <= i < shape[1]]
            per_axis.append(cands)
        return [tuple(c) for c in itertools.product(*per_axis)]

    # -- enumeration ----------------------------------------------------------
    def axis_cells(self, axis: int) -> list:
        per = self.periods[axis]
        if per is not None:
            return [(k, e) for k in range(per) for e in (0, 1)]
        lo, hi = self.rep_bounds[axis]
        return [(k, 0) for k in range(lo, hi + 1)] + [(k, 1) for k in range(lo, hi)]

    def all_cells(self) -> Iterator[Cube]:
        return itertools.product(*(self.axis_cells(j) for j in range(self.dimension)))

    def top_cells(self) -> Iterator[Cube]:
        return itertools.product(
            *([c for c in self.axis_cells(j) if c[1] == 1] for j in range(self.dimension))
        )

    def in_domain(self, cube: Cube) -> bool:
        for (k, e), per, b in zip(cube, self.periods, self.rep_bounds):
            if per is None and not (b[0] <= k and k + e <= b[1]):
                return False
        return True

    # -- serialization --------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "axes": [ax.to_json() for ax in self.axes],
            "cell_width": format_fraction(self.cell_width),
            "offset": format_fraction(self.offset),
            "refinement": self.refinement,
        }

    @classmethod
    def from_json(cls, obj: dict) -> GridSpec:
        axes = tuple(Axis.from_json(a) for a in obj["axes"])
        if "dimension" in obj and obj["dimension"] != len(axes):
            raise GridError("dimension does not match the number of axes")
        return cls(axes, as_dyadic(obj["cell_width"]), as_dyadic(obj.get("offset", 0)),
                   int(obj.get("refinement", 4)))


# ---------------------------------------------------------------------------
# elementary cubes
# ---------------------------------------------------------------------------

def cube_dim(cube: Cube) -> int:
    return sum(e for _, e in cube)


def _norm(k: int, per) -> int:
    return k % per if per is not None else k


@lru_cache(maxsize=None)
def faces(grid: GridSpec, cube: Cube) -> frozenset:
    """All faces of ``cube``, itself included."""
    per_axis = []
    for (k, e), per in zip(cube, grid.periods):
        if e:
            per_axis.append(((k, 1), (k, 0), (_norm(k + 1, per), 0)))
        else:
            per_axis.append(((k, 0),))
    return frozenset(itertools.product(*per_axis))


@lru_cache(maxsize=None)
def signed_boundary(grid: GridSpec, cube: Cube) -> tuple:
    """Cubical boundary as ``((face, sign), ...)``.

    The face obtained by collapsing the i-th non-degenerate axis carries the
    sign ``(-1)**(number of non-degenerate axes before it)``; upper face +,
    lower face -.
    """
    out = []
    seen = 0
    for j, ((k, e), per) in enumerate(zip(cube, grid.periods)):
        if not e:
            continue
        sign = -1 if seen % 2 else 1
        upper = cube[:j] + ((_norm(k + 1, per), 0),) + cube[j + 1:]
        lower = cube[:j] + ((k, 0),) + cube[j + 1:]
        out.append((upper, sign))
        out.append((lower, -sign))
        seen += 1
    return tuple(out)


@lru_cache(maxsize=None)
def star(grid: GridSpec, cube: Cube) -> frozenset:
    """All cells of the grid having ``cube`` as a face (the open star)."""
    per_axis = []
    for j, ((k, e), per) in enumerate(zip(cube, grid.periods)):
        if e:
            per_axis.append(((k, 1),))
            continue
        opts = [(k, 0), (_norm(k - 1, per), 1), (k, 1)]
        if per is None:
            lo, hi = grid.rep_bounds[j]
            opts = [c for c in opts if lo <= c[0] and c[0] + c[1] <= hi]
        per_axis.append(tuple(dict.fromkeys(opts)))
    return frozenset(itertools.product(*per_axis))


@lru_cache(maxsize=None)
def top_star(grid: GridSpec, cube: Cube) -> frozenset:
    d = grid.dimension
    return frozenset(c for c in star(grid, cube) if cube_dim(c) == d)


def closure_cells(grid: GridSpec, cells: Iterable[Cube]) -> frozenset:
    out = set()
    for c in cells:
        if c not in out:
            out.update(faces(grid, c))
    return frozenset(out)


# ---------------------------------------------------------------------------
# boxes (products of intervals, the values of hulls)
# ---------------------------------------------------------------------------

def _interval_cells(a: int, b: int, per) -> tuple:
    cells = [(_norm(k, per), 0) for k in range(a, b + 1)]
    cells += [(_norm(k, per), 1) for k in range(a, b)]
    return tuple(dict.fromkeys(cells))


@lru_cache(maxsize=4096)
def box_cells(grid: GridSpec, box: Box) -> frozenset:
    """All elementary cubes of the closed box (already face-closed)."""
    return frozenset(itertools.product(
        *(_interval_cells(a, b, per) for (a, b), per in zip(box, grid.periods))
    ))


def box_contains(grid: GridSpec, box: Box, cube: Cube) -> bool:
    for (a, b), (k, e), per in zip(box, cube, grid.periods):
        if per is not None:
            k = a + (k - a) % per
        if not (a <= k and k + e <= b):
            return False
    return True


def box_diameter(grid: GridSpec, box: Box) -> Fraction:
    """Sup-metric diameter in coordinate units."""
    return max(b - a for a, b in box) * grid.rep_width


def _arc(positions: Iterable[int], n: int) -> tuple:
    """Smallest arc ``[a, b]`` (``0 <= a < n``, ``b`` possibly ``>= n``) covering
    ``positions`` on ``Z/n``: the complement of the largest gap.

    Arcs reaching half the period are refused.  Below that bound the largest
    gap is unique and contains the largest gap of any superset, so the hull is
    monotone (and sampled maps come out antitone)."""
    ps = sorted({p % n for p in positions})
    if not ps:
        raise ValueError("empty input")
    if len(ps) == n:
        raise HullAmbiguous("input covers the whole period")
    gaps = []
    for i, p in enumerate(ps):
        nxt = ps[(i + 1) % len(ps)] + (n if i == len(ps) - 1 else 0)
        gaps.append(nxt - p - 1)
    best = max(gaps)
    if 2 * (n - best) >= n:
        raise HullAmbiguous(f"input spreads over {n - best} of {n} cells: no short arc covers it")
    i = gaps.index(best)
    a = ps[(i + 1) % len(ps)]
    b = ps[i]
    if b < a:
        b += n
    return a, b


def coarse_hull_box(grid: GridSpec, indices: Iterable) -> Box:
    """Rep-level box of the smallest hypercuboid containing the coarse cells."""
    indices = list(indices)
    if not indices:
        raise ValueError("hull of an empty family")
    r = grid.refinement
    box = []
    for j in range(grid.dimension):
        col = [idx[j] for idx in indices]
        if grid.axes[j].periodic:
            a, b = _arc(col, grid.coarse_shape[j])
        else:
            a, b = min(col), max(col)
        per = grid.periods[j]
        lo = a * r
        box.append((lo % per if per else lo, (lo % per if per else lo) + (b - a + 1) * r))
    return tuple(box)


def cells_hull_box(grid: GridSpec, cells: Iterable[Cube]) -> Box:
    cells = list(cells)
    if not cells:
        raise ValueError("hull of an empty set")
    box = []
    for j in range(grid.dimension):
        per = grid.periods[j]
        if per is not None:
            # half-unit positions: vertex k -> 2k, open edge (k, k+1) -> 2k+1
            a, b = _arc((2 * c[j][0] + c[j][1] for c in cells), 2 * per)
            box.append((a // 2, (b + 1) // 2))
        else:
            box.append((min(c[j][0] for c in cells), max(c[j][0] + c[j][1] for c in cells)))
    return tuple(box)


# ---------------------------------------------------------------------------
# cubical sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CubicalSet:
    """A finite face-closed set of elementary cubes.

    Use :meth:`closure_of` to build one from arbitrary cells; the plain
    constructor trusts that ``cells`` is already face-closed.
    """

    grid: GridSpec
    cells: frozenset = field(default_factory=frozenset)

    @classmethod
    def closure_of(cls, grid: GridSpec, cells: Iterable[Cube]) -> CubicalSet:
        return cls(grid, closure_cells(grid, cells))

    @classmethod
    def empty(cls, grid: GridSpec) -> CubicalSet:
        return cls(grid, frozenset())

    @classmethod
    def whole(cls, grid: GridSpec) -> CubicalSet:
        return cls(grid, frozenset(grid.all_cells()))

    @classmethod
    def from_box(cls, grid: GridSpec, box: Box) -> CubicalSet:
        return cls(grid, box_cells(grid, box))

    def __len__(self):
        return len(self.cells)

    def __iter__(self):
        return iter(sorted(self.cells))

    def __contains__(self, cube):
        return cube in self.cells

    def __bool__(self):
        return bool(self.cells)

    def __le__(self, other: CubicalSet) -> bool:
        return self.cells <= other.cells

    def __or__(self, other):
        return union(self, other)

    def __and__(self, other):
        return intersection(self, other)

    def is_face_closed(self) -> bool:
        return all(faces(self.grid, c) <= self.cells for c in self.cells)

    def top_cells(self) -> frozenset:
        d = self.grid.dimension
        return frozenset(c for c in self.cells if cube_dim(c) == d)

    def maximal_cells(self) -> list:
        """Cells that are not proper faces of another member, sorted."""
        covered = set()
        for c in self.cells:
            covered.update(f for f in faces(self.grid, c) if f != c)
        return sorted(self.cells - covered)

    def cells_of_dim(self, k: int) -> list:
        return sorted(c for c in self.cells if cube_dim(c) == k)


def _same_grid(a: CubicalSet, b: CubicalSet):
    if a.grid != b.grid:
        raise GridMismatch("cubical sets live on different grids")


def union(a: CubicalSet, b: CubicalSet) -> CubicalSet:
    _same_grid(a, b)
    return CubicalSet(a.grid, a.cells | b.cells)


def intersection(a: CubicalSet, b: CubicalSet) -> CubicalSet:
    _same_grid(a, b)
    return CubicalSet(a.grid, a.cells & b.cells)


def closed_difference(a: CubicalSet, b: CubicalSet) -> CubicalSet:
    """``cl(|A| minus |B|)``: closure of the cells of A that are not in B."""
    _same_grid(a, b)
    return CubicalSet.closure_of(a.grid, a.cells - b.cells)


def interior_cells(grid: GridSpec, cells: Iterable[Cube]) -> frozenset:
    """Cells whose relative interior lies in the topological interior of the
    union of the (open) cells given.  Works for any cell collection."""
    cells = frozenset(cells)
    return frozenset(c for c in cells if star(grid, c) <= cells)


def interior(s: CubicalSet) -> frozenset:
    """Open cells making up ``int |S|`` (not face-closed in general)."""
    g = s.grid
    return frozenset(c for c in s.cells if top_star(g, c) <= s.cells)


def boundary(s: CubicalSet) -> CubicalSet:
    """``bd |S|`` as a cubical set: cells of S not in its interior."""
    return CubicalSet(s.grid, s.cells - interior(s))


def collar(s: CubicalSet, k: int) -> CubicalSet:
    """Face-closure of all top cells within combinatorial distance ``k`` of S."""
    if k < 0:
        raise ValueError("collar width must be non-negative")
    g = s.grid
    cells = set(s.cells)
    for _ in range(k):
        tops = set()
        for c in cells:
            tops.update(top_star(g, c))
        cells |= closure_cells(g, tops)
    return CubicalSet(g, frozenset(cells))


def hull(obj, grid: GridSpec | None = None) -> CubicalSet:
    """Smallest hypercuboid containing a cubical set or a family of coarse cells.

    ``obj`` is either a :class:`CubicalSet` or an iterable of coarse index
    vectors (then ``grid`` is required).
    """
    if isinstance(obj, CubicalSet):
        return CubicalSet.from_box(obj.grid, cells_hull_box(obj.grid, obj.cells))
    if grid is None:
        raise TypeError("hull of coarse cells needs a grid")
    return CubicalSet.from_box(grid, coarse_hull_box(grid, obj))


def refine_set(s: CubicalSet, grid: GridSpec) -> CubicalSet:
    """Re-express S on a grid with a larger refinement factor."""
    old = s.grid
    if grid.refined(old.refinement) != old or grid.refinement % old.refinement:
        raise GridMismatch("target grid is not a refinement of the source grid")
    f = grid.refinement // old.refinement
    out = set()
    for c in s.cells:
        box = tuple((k * f, (k + e) * f) for k, e in c)
        out.update(box_cells(grid, box))
    return CubicalSet(grid, frozenset(out))


def cube_interval(grid: GridSpec, cube: Cube, axis: int) -> tuple:
    """Coordinates ``(lo, hi)`` of the cube on ``axis`` (hi may exceed the period)."""
    k, e = cube[axis]
    lo = grid.from_rep(k, axis)
    return lo, lo + e * grid.rep_width
