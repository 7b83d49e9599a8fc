"""Relative cubical homology over fields (and over Z for reporting), maps
induced by inclusions, and maps induced by a multivalued map through its graph.

For a multivalued map with acyclic values the projection ``p`` from the graph
onto the domain induces an isomorphism in homology (Vietoris-Begle), so the
map ``F_* = q_* p_*^{-1}`` is computed from the two cellular projections.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .fields import Field, SingularMatrix, inverse, matmul, rank
from .grid import GridSpec, box_cells, cube_dim, signed_boundary
from .sampling import MvMap, SampleSet, point_cube
from .snf import integer_homology


DENSE_LIMIT = 3000


class ProjectionNotIso(ArithmeticError):
    """The graph projection does not induce an isomorphism in some degree."""


class FiberMismatch(AssertionError):
    pass


# ---------------------------------------------------------------------------
# chain complexes
# ---------------------------------------------------------------------------

@dataclass
class ChainComplex:
    """Relative cellular chain complex on an explicit basis of open cells.

    Faces of basis cells that are not themselves basis cells are treated as
    belonging to the subcomplex that is divided out.
    """

    grid: GridSpec
    basis: dict  # degree -> list of cells
    top: int  # homology is reliable in degrees <= top

    @classmethod
    def from_cells(cls, grid: GridSpec, cells, top: int | None = None, rng=None) -> ChainComplex:
        top = grid.dimension if top is None else top
        by_deg = {}
        for c in cells:
            k = cube_dim(c)
            if k <= top + 1:
                by_deg.setdefault(k, []).append(c)
        for k in by_deg:
            by_deg[k].sort()
            if rng is not None:
                rng.shuffle(by_deg[k])
        return cls(grid, by_deg, top)

    @classmethod
    def of_pair(cls, pair, top: int | None = None, rng=None) -> ChainComplex:
        return cls.from_cells(pair.grid, pair.p1.cells - pair.p2.cells, top, rng)

    def cells(self, k: int) -> list:
        return self.basis.get(k, [])

    def boundary_column(self, cell, index: dict) -> dict:
        col = {}
        for face, sign in signed_boundary(self.grid, cell):
            i = index.get(face)
            if i is not None:
                col[i] = col.get(i, 0) + sign
        return {i: v for i, v in col.items() if v}

    def boundary_matrix(self, k: int) -> list:
        """Integer matrix of ``d_k`` (rows: (k-1)-cells, columns: k-cells)."""
        rows = {c: i for i, c in enumerate(self.cells(k - 1))}
        mat = [[0] * len(self.cells(k)) for _ in rows]
        for j, c in enumerate(self.cells(k)):
            for i, v in self.boundary_column(c, rows).items():
                mat[i][j] = v
        return mat

    def triplets(self) -> str:
        """Sparse dump ``degree row col value`` of all boundary matrices."""
        lines = []
        for k in sorted(self.basis):
            if k == 0:
                continue
            rows = {c: i for i, c in enumerate(self.cells(k - 1))}
            for j, c in enumerate(self.cells(k)):
                for i, v in sorted(self.boundary_column(c, rows).items()):
                    lines.append(f"{k} {i} {j} {v}")
        return "\n".join(lines) + ("\n" if lines else "")

    def check_d_squared(self) -> bool:
        for k in sorted(self.basis):
            if k < 2 or not self.cells(k - 2):
                continue
            a = np.array(self.boundary_matrix(k - 1), dtype=np.int64).reshape(len(self.cells(k - 2)), -1)
            b = np.array(self.boundary_matrix(k), dtype=np.int64).reshape(len(self.cells(k - 1)), -1)
            if np.any(a @ b):
                return False
        return True


# ---------------------------------------------------------------------------
# homology over a field
# ---------------------------------------------------------------------------

class Homology:
    """Homology of a chain complex over a field, with a fixed generator basis.

    Built by column reduction ``R = D V`` of the full boundary matrix with the
    cells ordered by degree.  Unpaired cells carry the generators; ``coords``
    expresses any cycle in that basis.
    """

    def __init__(self, cx: ChainComplex, k: Field):
        self.complex = cx
        self.field = k
        order = [c for d in sorted(cx.basis) for c in cx.cells(d)]
        self.order = order
        self.pos = {c: i for i, c in enumerate(order)}
        self.deg = [cube_dim(c) for c in order]
        # dense kernel: bounded memory, and p**2 must fit in int64
        if k.p is not None and 0 < len(order) <= DENSE_LIMIT and k.p < 2 ** 31:
            R, V, low = self._reduce_dense(k.p)
        else:
            R, V, low = self._reduce_sparse()
        self.R, self.V = R, V
        self.pivot = {l: j for j, l in enumerate(low) if l >= 0}
        self.gens = {}
        for j, c in enumerate(order):
            d = self.deg[j]
            if d <= cx.top and not R[j] and j not in self.pivot:
                self.gens.setdefault(d, []).append(j)
        self.gen_index = {j: (d, i) for d, lst in self.gens.items() for i, j in enumerate(lst)}

    def _reduce_sparse(self):
        k = self.field
        R, V, low = [], [], []
        pivot = {}
        for j, c in enumerate(self.order):
            col = {i: k(v) for i, v in self.complex.boundary_column(c, self.pos).items()}
            v = {j: k(1)}
            while col:
                l = max(col)
                i = pivot.get(l)
                if i is None:
                    pivot[l] = j
                    break
                s = k.norm(col[l] * k.inv(R[i][l]))
                for r, x in R[i].items():
                    y = k.norm(col.get(r, 0) - s * x)
                    if y:
                        col[r] = y
                    else:
                        col.pop(r, None)
                for r, x in V[i].items():
                    y = k.norm(v.get(r, 0) - s * x)
                    if y:
                        v[r] = y
                    else:
                        v.pop(r, None)
            R.append(col)
            V.append(v)
            low.append(max(col) if col else -1)
        return R, V, low

    def _reduce_dense(self, p: int):
        n = len(self.order)
        Rt = np.zeros((n, n), dtype=np.int64)
        for j, c in enumerate(self.order):
            for i, v in self.complex.boundary_column(c, self.pos).items():
                Rt[j, i] = v % p
        Vt = np.eye(n, dtype=np.int64)
        low = _kernels.reduce_mod_p(Rt, Vt, p)
        R = [{int(i): int(Rt[j, i]) for i in np.flatnonzero(Rt[j])} for j in range(n)]
        V = [{int(i): int(Vt[j, i]) for i in np.flatnonzero(Vt[j])} for j in range(n)]
        return R, V, [int(x) for x in low]

    # -- queries ----------------------------------------------------------
    def dim(self, d: int) -> int:
        return len(self.gens.get(d, ()))

    @property
    def dims(self) -> dict:
        return {d: self.dim(d) for d in range(self.complex.top + 1)}

    def generator(self, d: int, i: int) -> dict:
        """Generator cycle as ``{cell: coefficient}``."""
        j = self.gens[d][i]
        return {self.order[r]: x for r, x in self.V[j].items()}

    def coords(self, d: int, chain: dict) -> list:
        """Coordinates of the homology class of a cycle ``{cell: coef}``."""
        k = self.field
        c = {}
        for cell, x in chain.items():
            r = self.pos.get(cell)
            if r is None:
                continue  # cell lies in the subcomplex
            x = k(x)
            if x:
                c[r] = k.norm(c.get(r, 0) + x)
        c = {r: x for r, x in c.items() if x}
        out = [k(0)] * self.dim(d)
        while c:
            l = max(c)
            if self.deg[l] != d:
                raise ValueError("chain has cells of the wrong degree")
            i = self.pivot.get(l)
            if i is not None:
                vec = self.R[i]
            elif l in self.gen_index:
                vec = self.V[l]
            else:
                raise ValueError("chain is not a cycle")
            s = k.norm(c[l] * k.inv(vec[l]))
            if i is None:
                out[self.gen_index[l][1]] = s
            for r, x in vec.items():
                y = k.norm(c.get(r, 0) - s * x)
                if y:
                    c[r] = y
                else:
                    c.pop(r, None)
        return out


# ---------------------------------------------------------------------------
# graded modules and maps
# ---------------------------------------------------------------------------

@dataclass
class GradedModule:
    field: object  # Field, or "z"
    dims: dict
    torsion: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"coefficients": self.field if isinstance(self.field, str) else self.field.spec,
               "degrees": {str(d): n for d, n in sorted(self.dims.items())}}
        if self.torsion:
            out["torsion"] = {str(d): t for d, t in sorted(self.torsion.items()) if t}
        return out


@dataclass
class GradedMap:
    field: Field
    matrices: dict  # degree -> matrix (rows: target generators)
    shapes: dict  # degree -> (rows, cols)

    def compose(self, other: GradedMap) -> GradedMap:
        """``self o other``."""
        mats, shapes = {}, {}
        for d in self.matrices:
            r, c = self.shapes[d][0], other.shapes[d][1]
            shapes[d] = (r, c)
            mats[d] = matmul(self.matrices[d], other.matrices[d], self.field) if r and c else _zero(r, c, self.field)
        return GradedMap(self.field, mats, shapes)

    def transpose(self) -> GradedMap:
        mats = {d: [list(r) for r in zip(*m)] if self.shapes[d][0] else _zero(self.shapes[d][1], 0, self.field)
                for d, m in self.matrices.items()}
        return GradedMap(self.field, mats, {d: (c, r) for d, (r, c) in self.shapes.items()})

    def is_iso(self) -> bool:
        for d, m in self.matrices.items():
            r, c = self.shapes[d]
            if r != c or (r and rank(m, self.field) != r):
                return False
        return True

    def to_json(self) -> dict:
        k = self.field
        return {str(d): [[k.to_json(x) for x in r] for r in m] for d, m in sorted(self.matrices.items())}


def _zero(r: int, c: int, k: Field) -> list:
    return [[k(0)] * c for _ in range(r)]


def from_columns(cols: list, rows: int, k: Field) -> list:
    m = _zero(rows, len(cols), k)
    for j, col in enumerate(cols):
        for i, x in enumerate(col):
            m[i][j] = x
    return m


def module_of(h: Homology) -> GradedModule:
    return GradedModule(h.field, h.dims)


def relative_homology(pair, coeffs="q", top: int | None = None):
    """Homology of a cubical pair.  ``coeffs`` is a :class:`Field` or ``"z"``.

    Over a field a :class:`Homology` object is returned (dimensions,
    generators, coordinates); over Z a :class:`GradedModule` with Betti
    numbers and torsion coefficients.
    """
    cx = ChainComplex.of_pair(pair, top)
    if coeffs == "z":
        sizes = {d: len(cx.cells(d)) for d in range(cx.top + 1)}
        bnd = {d: cx.boundary_matrix(d) for d in range(1, cx.top + 2) if cx.cells(d) and cx.cells(d - 1)}
        info = integer_homology(bnd, sizes)
        return GradedModule("z", {d: v["betti"] for d, v in info.items()},
                            {d: v["torsion"] for d, v in info.items()})
    k = Field() if coeffs == "q" else coeffs
    return Homology(cx, k)


def induced_map(src: Homology, dst: Homology, chain_map) -> GradedMap:
    """Matrix of the map induced by ``chain_map(cell) -> [(cell, coef), ...]``."""
    k = src.field
    mats, shapes = {}, {}
    for d in range(src.complex.top + 1):
        cols = []
        for i in range(src.dim(d)):
            img = {}
            for cell, x in src.generator(d, i).items():
                for t, c in chain_map(cell):
                    img[t] = k.norm(img.get(t, 0) + x * k(c))
            cols.append(dst.coords(d, img))
        mats[d] = from_columns(cols, dst.dim(d), k)
        shapes[d] = (dst.dim(d), src.dim(d))
    return GradedMap(k, mats, shapes)


def inclusion_induced(src: Homology, dst: Homology) -> GradedMap:
    return induced_map(src, dst, lambda c: [(c, 1)])


# ---------------------------------------------------------------------------
# graph of a multivalued map
# ---------------------------------------------------------------------------

@dataclass
class GraphSet:
    """Relative cells of the graph pair ``(Gamma1, Gamma2)`` over ``(P1, P2)``.

    ``Gamma_i`` is the union of ``tau x F(tau)`` over cells tau of ``P_i``;
    only cells of ``Gamma1 minus Gamma2`` up to degree ``d + 1`` are stored.
    """

    grid: GridSpec  # product grid
    base: GridSpec
    cells: frozenset
    fibers: dict

    def fiber(self, cube) -> frozenset:
        return self.fibers.get(cube, frozenset())


def build_graph(f: MvMap, pair, t=None) -> GraphSet:
    g = f.grid
    d = g.dimension
    fibers = {}
    cells = set()
    for tau in pair.p1.cells:
        box = f.table.get(tau)
        fib = box_cells(g, box) if box is not None else frozenset()
        fibers[tau] = fib
        if tau in pair.p2.cells:
            continue
        if t is not None and not fib <= t.t1.cells:
            raise FiberMismatch(f"F({tau}) is not contained in T1")
        dt = cube_dim(tau)
        for rho in fib:
            if dt + cube_dim(rho) <= d + 1:
                cells.add(tau + rho)
    if t is not None:
        for tau in pair.p2.cells:
            if not fibers[tau] <= t.t2.cells:
                raise FiberMismatch(f"F({tau}) is not contained in T2")
    return GraphSet(g.product(), g, frozenset(cells), fibers)


def check_fibers(graph: GraphSet, f: MvMap, samples: SampleSet) -> bool:
    """Every sample ``(x, y)`` with x over P1 has y in the graph fibre over x."""
    for x, y in samples.points:
        tau = point_cube(graph.base, x)
        if tau not in graph.fibers:
            continue
        if graph.fibers[tau] != f.value_cells(tau):
            raise FiberMismatch(f"fibre over {tau} differs from F")
        if point_cube(graph.base, y) not in graph.fibers[tau]:
            raise FiberMismatch(f"sample image {y} missing from the fibre over {x}")
    return True


@dataclass
class MvInduced:
    graph: GraphSet
    graph_homology: Homology
    p_star: GradedMap
    q_star: GradedMap
    f_star: GradedMap


def mv_induced(f: MvMap, pair, t, hp: Homology, ht: Homology, rng=None) -> MvInduced:
    """``F_* = q_* o p_*^{-1} : H(P) -> H(T)`` via the graph projections."""
    d = f.grid.dimension
    graph = build_graph(f, pair, t)
    hg = Homology(ChainComplex.from_cells(graph.grid, graph.cells, d, rng), hp.field)

    def p_map(c):
        tau, rho = c[:d], c[d:]
        return [(tau, 1)] if cube_dim(rho) == 0 else []

    def q_map(c):
        tau, rho = c[:d], c[d:]
        return [(rho, 1)] if cube_dim(tau) == 0 else []

    p_star = induced_map(hg, hp, p_map)
    q_star = induced_map(hg, ht, q_map)
    k = hp.field
    f_star, shapes = {}, {}
    for deg, m in p_star.matrices.items():
        shapes[deg] = (ht.dim(deg), hp.dim(deg))
        n_src, n_dst = hg.dim(deg), hp.dim(deg)
        if n_src != n_dst:
            raise ProjectionNotIso(f"degree {deg}: H(graph) has dim {n_src}, H(P) has dim {n_dst}")
        if n_src == 0:
            f_star[deg] = _zero(ht.dim(deg), 0, k)
            continue
        try:
            p_inv = inverse(m, k)
        except SingularMatrix as exc:
            raise ProjectionNotIso(f"degree {deg}: projection is singular") from exc
        f_star[deg] = matmul(q_star.matrices[deg], p_inv, k)
    return MvInduced(graph, hg, p_star, q_star, GradedMap(k, f_star, shapes))


__all__ = [
    "ChainComplex",
    "FiberMismatch",
    "GradedMap",
    "GradedModule",
    "GraphSet",
    "Homology",
    "MvInduced",
    "ProjectionNotIso",
    "build_graph",
    "check_fibers",
    "inclusion_induced",
    "induced_map",
    "module_of",
    "mv_induced",
    "relative_homology",
]
