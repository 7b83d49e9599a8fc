"""Combinatorial dynamics of a cube-level multivalued map.

F is constant on the relative interior of every elementary cube and its
values are unions of open cubes, so the point dynamics of F restricted to a
cubical set N is reproduced *exactly* by the digraph on the cells of N with an
edge sigma -> sigma' whenever sigma' lies in the box F-hat(sigma).  A cell
carries a point solution of length n iff it carries a path of length n.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .grid import CubicalSet, box_cells
from .sampling import MvMap


class HorizonTooSmall(UserWarning):
    """The oracle horizon is below the bound that makes it exact."""


def image(f: MvMap, s: CubicalSet) -> CubicalSet:
    """F(S) as a cubical set (boxes are face-closed, so no closure is needed)."""
    out = set()
    for c in s.cells:
        box = f.table.get(c)
        if box is not None:
            out.update(box_cells(f.grid, box))
    return CubicalSet(f.grid, frozenset(out))


def image_of_cells(f: MvMap, cells) -> CubicalSet:
    """F of a union of *open* cells (not necessarily face-closed)."""
    return image(f, CubicalSet(f.grid, frozenset(cells)))


def preimage(f: MvMap, s: CubicalSet) -> CubicalSet:
    """Large counter image: cells whose value meets S."""
    out = set()
    for c in s.cells:
        out.update(f.preimage.get(c, ()))
    return CubicalSet(f.grid, frozenset(out))


@dataclass
class TransitionGraph:
    """Cell digraph of F restricted to N.  ``succ[i]`` lists node indices."""

    nodes: list
    index: dict
    succ: list

    @property
    def pred(self) -> list:
        p = [[] for _ in self.nodes]
        for i, out in enumerate(self.succ):
            for j in out:
                p[j].append(i)
        return p

    def csr(self, reverse=False):
        lists = self.pred if reverse else self.succ
        indptr = np.zeros(len(lists) + 1, dtype=np.int64)
        for i, lst in enumerate(lists):
            indptr[i + 1] = indptr[i] + len(lst)
        indices = np.fromiter((j for lst in lists for j in lst), dtype=np.int64,
                              count=int(indptr[-1]))
        return indptr, indices

    def adjacency(self) -> np.ndarray:
        n = len(self.nodes)
        a = np.zeros((n, n), dtype=np.int64)
        for i, out in enumerate(self.succ):
            a[i, out] = 1
        return a


def transition_graph(f: MvMap, n: CubicalSet) -> TransitionGraph:
    nodes = sorted(n.cells)
    index = {c: i for i, c in enumerate(nodes)}
    cells = n.cells
    succ = []
    for c in nodes:
        box = f.table.get(c)
        if box is None:
            succ.append([])
            continue
        bc = box_cells(f.grid, box)
        if len(bc) <= len(cells):
            out = sorted(index[t] for t in bc if t in cells)
        else:
            out = sorted(index[t] for t in cells if t in bc)
        succ.append(out)
    return TransitionGraph(nodes, index, succ)


def forward_closure(f: MvMap, n: CubicalSet, a: CubicalSet, graph: TransitionGraph | None = None) -> CubicalSet:
    """F_N^+(A): cells of N reachable from A by in-N paths of length >= 0."""
    g = graph or transition_graph(f, n)
    seen = {g.index[c] for c in a.cells if c in g.index}
    stack = list(seen)
    while stack:
        i = stack.pop()
        for j in g.succ[i]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return CubicalSet(f.grid, frozenset(g.nodes[i] for i in seen))


def constrained_reach(f: MvMap, n: CubicalSet, steps: int, graph: TransitionGraph | None = None) -> CubicalSet:
    """Effective domain of F_{N,steps}: cells with an in-N solution segment of
    length ``|steps|`` (forward for steps > 0, backward for steps < 0)."""
    if steps == 0:
        return n
    g = graph or transition_graph(f, n)
    nbrs = g.succ if steps > 0 else g.pred
    alive = set(range(len(g.nodes)))
    for _ in range(abs(steps)):
        alive = {i for i in alive if any(j in alive for j in nbrs[i])}
    return CubicalSet(f.grid, frozenset(g.nodes[i] for i in alive))


@dataclass(frozen=True)
class InvariantDecomposition:
    inv_plus: CubicalSet
    inv_minus: CubicalSet
    inv: CubicalSet


def invariant_parts(f: MvMap, n: CubicalSet, graph: TransitionGraph | None = None) -> InvariantDecomposition:
    """Inv+, Inv- and Inv of N by fixed-point trimming of the transition graph."""
    g = graph or transition_graph(f, n)
    size = len(g.nodes)
    if size == 0:
        e = CubicalSet.empty(f.grid)
        return InvariantDecomposition(e, e, e)
    fwd = _kernels.trim_forward(*g.csr(), size)
    bwd = _kernels.trim_forward(*g.csr(reverse=True), size)
    plus = frozenset(g.nodes[i] for i in range(size) if fwd[i])
    minus = frozenset(g.nodes[i] for i in range(size) if bwd[i])
    return InvariantDecomposition(
        CubicalSet(f.grid, plus), CubicalSet(f.grid, minus), CubicalSet(f.grid, plus & minus)
    )


def oracle_invariant(f: MvMap, n: CubicalSet, horizon: int | None = None) -> CubicalSet:
    """Independent check of :func:`invariant_parts`.

    A cell is kept iff it starts a forward path of length ``horizon`` and ends
    a backward one, both inside N.  Existence is read off boolean powers of
    the adjacency matrix.  With ``horizon >= #cells`` every such path repeats
    a cell, so the answer is exact.
    """
    g = transition_graph(f, n)
    size = len(g.nodes)
    if horizon is None:
        horizon = size
    if horizon < size:
        warnings.warn(f"horizon {horizon} below the sound bound {size}", HorizonTooSmall, stacklevel=2)
    if size == 0:
        return CubicalSet.empty(f.grid)
    a = g.adjacency()
    fwd = np.ones(size, dtype=np.int64)  # fwd[i]: path of length t from i
    bwd = np.ones(size, dtype=np.int64)
    for _ in range(horizon):
        fwd = (a @ fwd > 0).astype(np.int64)
        bwd = (a.T @ bwd > 0).astype(np.int64)
    keep = np.flatnonzero(fwd & bwd)
    return CubicalSet(f.grid, frozenset(g.nodes[i] for i in keep))
