"""From sample pairs ``(x, g(x))`` to the combinatorial map and the multivalued map F.

The coarse combinatorial map sends a grid cell Q to every sampled cell P hit
by a sample lying in Q.  The multivalued map is stored per elementary cube of
the representation grid: a cube tau carries the hull box of the union of the
combinatorial values of all sampled coarse cells containing tau.  For a point
x in the relative interior of tau, F(x) is exactly that box.
"""

from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from .dyadic import NonDyadicError, as_dyadic, format_fraction
from .grid import (
    CubicalSet,
    GridError,
    GridSpec,
    HullAmbiguous,
    box_cells,
    closure_cells,
    coarse_hull_box,
)


class ParseError(ValueError):
    pass


class EmptyCover(ValueError):
    pass


@dataclass(frozen=True)
class SampleSet:
    dimension: int
    points: tuple = ()

    def __len__(self):
        return len(self.points)


def _num(tok, where):
    try:
        return as_dyadic(tok)
    except (NonDyadicError, ValueError, TypeError) as exc:
        raise ParseError(f"{where}: {exc}") from exc


def _make(rows, dimension, grid, where):
    pts = []
    for n, row in rows:
        if dimension is None:
            if len(row) % 2:
                raise ParseError(f"{where} row {n}: odd number of columns")
            dimension = len(row) // 2
        if len(row) != 2 * dimension:
            raise ParseError(f"{where} row {n}: expected {2 * dimension} columns, got {len(row)}")
        vals = [_num(t, f"{where} row {n}") for t in row]
        x, y = tuple(vals[:dimension]), tuple(vals[dimension:])
        if grid is not None:
            try:
                x, y = grid.reduce_point(x), grid.reduce_point(y)
            except GridError as exc:
                raise ParseError(f"{where} row {n}: {exc}") from exc
        pts.append((x, y))
    if dimension is None:
        dimension = grid.dimension if grid is not None else 0
    if grid is not None and dimension != grid.dimension and pts:
        raise ParseError(f"{where}: samples have dimension {dimension}, grid has {grid.dimension}")
    return SampleSet(dimension, tuple(pts))


def parse_csv(text: str, grid: GridSpec | None = None, where="<csv>") -> SampleSet:
    rows = []
    first = True
    for n, row in enumerate(csv.reader(io.StringIO(text)), 1):
        row = [c.strip() for c in row]
        if not row or not any(row) or row[0].startswith("#"):
            continue
        if first:
            first = False
            try:
                [as_dyadic(c) for c in row]
            except (NonDyadicError, ValueError):
                if any(ch.isalpha() for c in row for ch in c):
                    continue  # header line
        rows.append((n, row))
    dim = grid.dimension if grid is not None else None
    return _make(rows, dim, grid, where)


def parse_json(obj, grid: GridSpec | None = None, where="<json>") -> SampleSet:
    if not isinstance(obj, dict) or "samples" not in obj:
        raise ParseError(f"{where}: expected an object with a 'samples' list")
    dim = obj.get("dimension", grid.dimension if grid is not None else None)
    rows = []
    for n, s in enumerate(obj["samples"], 1):
        if isinstance(s, list) and len(s) == 2 and all(isinstance(p, list) for p in s):
            s = list(s[0]) + list(s[1])
        if not isinstance(s, list):
            raise ParseError(f"{where} sample {n}: expected a list")
        rows.append((n, s))
    return _make(rows, dim, grid, where)


def read_samples(path, format: str | None = None, grid: GridSpec | None = None) -> SampleSet:
    """Read a CSV or JSON sample file; see the README for both layouts."""
    path = Path(path)
    fmt = format or ("json" if path.suffix.lower() == ".json" else "csv")
    text = path.read_text()
    if fmt == "json":
        if not text.strip():
            return SampleSet(grid.dimension if grid else 0, ())
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from exc
        return parse_json(obj, grid, str(path))
    if fmt != "csv":
        raise ValueError(f"unknown sample format {fmt!r}")
    return parse_csv(text, grid, str(path))


def samples_to_csv(samples: SampleSet) -> str:
    d = samples.dimension
    head = ",".join([f"x{i}" for i in range(d)] + [f"y{i}" for i in range(d)])
    lines = [head]
    for x, y in samples.points:
        lines.append(",".join(format_fraction(v) for v in x + y))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ComboMap:
    """Coarse cell -> set of coarse cells; the domain is the set of sampled cells."""

    grid: GridSpec
    entries: dict

    @property
    def domain(self) -> frozenset:
        return frozenset(self.entries)

    def to_json(self) -> dict:
        return {
            "domain_size": len(self.entries),
            "entries": [
                {"cell": list(q), "image": [list(p) for p in sorted(v)]}
                for q, v in sorted(self.entries.items())
            ],
        }


def build_combo_map(samples: SampleSet, grid: GridSpec) -> ComboMap:
    if not samples.points:
        raise EmptyCover("no samples: the sampled cover is empty")
    hits = {}
    for x, y in samples.points:
        for q in grid.coarse_cells_of_point(x):
            hits.setdefault(q, []).append(y)
    if not hits:
        raise EmptyCover("no sample lies in a grid cell")
    cover = frozenset(hits)
    entries = {}
    for q, ys in hits.items():
        img = set()
        for y in ys:
            img.update(p for p in grid.coarse_cells_of_point(y) if p in cover)
        entries[q] = frozenset(img)
    return ComboMap(grid, entries)


@dataclass
class MvMap:
    """Cube-level table of the multivalued map.

    ``table[cube]`` is a rep-level box (or None if no sampled value exists),
    ``preimage[cube]`` the cubes whose box contains ``cube``.  Keep both in
    sync; :func:`verify_dmds_axioms` checks that they are.
    """

    grid: GridSpec
    table: dict
    preimage: dict = field(default_factory=dict)
    combo: ComboMap | None = None

    def value(self, cube):
        return self.table.get(cube)

    def value_cells(self, cube) -> frozenset:
        box = self.table.get(cube)
        return box_cells(self.grid, box) if box is not None else frozenset()

    @property
    def domain(self) -> CubicalSet:
        return CubicalSet(self.grid, frozenset(c for c, b in self.table.items() if b is not None))

    def refined(self, refinement: int) -> MvMap:
        if self.combo is None:
            raise ValueError("map was not built from a combinatorial map")
        return build_mv_map(self.combo, self.grid.refined(refinement))

    def rebuild_preimage(self) -> None:
        pre = {}
        for c, box in self.table.items():
            if box is None:
                continue
            for t in box_cells(self.grid, box):
                pre.setdefault(t, set()).add(c)
        self.preimage = {t: frozenset(v) for t, v in pre.items()}


def build_mv_map(cmap: ComboMap, grid: GridSpec | None = None) -> MvMap:
    grid = grid or cmap.grid
    if grid.refined(cmap.grid.refinement) != cmap.grid:
        raise GridError("combinatorial map was built on a different coarse grid")
    cells = closure_cells(grid, (t for q in cmap.entries for t in box_cells(grid, grid.coarse_box(q))))
    table = {}
    for cube in cells:
        img = set()
        for q in grid.coarse_cells_containing(cube):
            img.update(cmap.entries.get(q, ()))
        if not img:
            table[cube] = None
            continue
        try:
            table[cube] = coarse_hull_box(grid, img)
        except HullAmbiguous as exc:
            raise HullAmbiguous(f"value at cube {cube}: {exc}") from exc
    f = MvMap(grid, table, combo=cmap)
    f.rebuild_preimage()
    return f


def mv_map_from_samples(samples: SampleSet, grid: GridSpec) -> MvMap:
    return build_mv_map(build_combo_map(samples, grid), grid)


# ---------------------------------------------------------------------------
# dmds axioms
# ---------------------------------------------------------------------------

def _step(f: MvMap, cells, n: int) -> frozenset:
    """Cells of F(cells, n) using the forward table (n > 0) or preimage table (n < 0)."""
    cur = frozenset(cells)
    for _ in range(abs(n)):
        nxt = set()
        if n > 0:
            for c in cur:
                nxt.update(f.value_cells(c))
        else:
            for c in cur:
                nxt.update(f.preimage.get(c, ()))
        cur = frozenset(nxt)
    return cur


@dataclass
class DmdsReport:
    identity: bool = True
    semigroup: bool = True
    inverse_symmetry: bool = True
    trials: int = 0
    witnesses: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.identity and self.semigroup and self.inverse_symmetry

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "identity": self.identity,
            "semigroup": self.semigroup,
            "inverse_symmetry": self.inverse_symmetry,
            "trials": self.trials,
            "witnesses": self.witnesses[:10],
        }


def verify_dmds_axioms(f: MvMap, trials: int = 100, seed: int = 0, max_time: int = 2) -> DmdsReport:
    """Spot-check the three dmds axioms on randomly drawn cubes."""
    rep = DmdsReport(trials=trials)
    cells = sorted(f.table)
    if not cells or trials <= 0:
        return rep
    rng = random.Random(seed)
    times = range(-max_time, max_time + 1)
    for _ in range(trials):
        x = rng.choice(cells)
        if _step(f, [x], 0) != frozenset([x]):
            rep.identity = False
            rep.witnesses.append({"axiom": "identity", "cube": x})
        n, m = rng.choice(times), rng.choice(times)
        if n * m < 0:
            m = -m
        lhs = _step(f, _step(f, [x], n), m)
        rhs = _step(f, [x], n + m)
        if lhs != rhs:
            rep.semigroup = False
            rep.witnesses.append({"axiom": "semigroup", "cube": x, "n": n, "m": m})
        for y in _step(f, [x], -1):
            if x not in f.value_cells(y):
                rep.inverse_symmetry = False
                rep.witnesses.append({"axiom": "inverse_symmetry", "x": x, "y": y})
        for y in f.value_cells(x):
            if x not in f.preimage.get(y, ()):
                rep.inverse_symmetry = False
                rep.witnesses.append({"axiom": "inverse_symmetry", "x": y, "y": x})
    return rep


def is_antitone(f: MvMap) -> bool:
    """F-hat(tau') is contained in F-hat(tau) whenever tau is a face of tau'."""
    from .grid import faces

    for c, box in f.table.items():
        if box is None:
            continue
        mine = box_cells(f.grid, box)
        for fc in faces(f.grid, c):
            if fc == c:
                continue
            other = f.table.get(fc)
            if other is None or not mine <= box_cells(f.grid, other):
                return False
    return True


def samples_respected(f: MvMap, samples: SampleSet) -> bool:
    """Every sampled image lies in F of the cube carrying the sample point."""
    g = f.grid
    for x, y in samples.points:
        cube = point_cube(g, x)
        cells = f.value_cells(cube)
        target = point_cube(g, y)
        if target not in cells:
            return False
    return True


def point_cube(grid: GridSpec, x) -> tuple:
    """The elementary cube whose relative interior contains the point ``x``."""
    cube = []
    for j, v in enumerate(x):
        t = (as_dyadic(v) - grid.base) / grid.rep_width
        per = grid.periods[j]
        if t.denominator == 1:
            k, e = int(t), 0
        else:
            k, e = t.numerator // t.denominator, 1
        cube.append((k % per if per else k, e))
    return tuple(cube)


__all__ = [
    "ComboMap",
    "DmdsReport",
    "EmptyCover",
    "MvMap",
    "ParseError",
    "SampleSet",
    "build_combo_map",
    "build_mv_map",
    "mv_map_from_samples",
    "read_samples",
    "verify_dmds_axioms",
]
