"""Weak index pairs: construction, axiom checks and the pair algebra.

All sets are face-closed cubical sets.  Open set differences such as
``P1 minus P2`` are handled as collections of open cells, which describe the
point sets exactly because a face-closed set is a union of open cells.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .dynamics import (
    InvariantDecomposition,
    forward_closure,
    image,
    image_of_cells,
    invariant_parts,
    transition_graph,
)
from .grid import (
    CubicalSet,
    closure_cells,
    collar,
    faces,
    interior,
    interior_cells,
    star,
)
from .isolation import check_isolation, f_boundary
from .literals import format_set
from .sampling import MvMap


class PairError(RuntimeError):
    pass


class NotIsolating(PairError):
    """N is not an isolating neighbourhood (``Inv N`` touches ``bd N``)."""


class ResolutionTooCoarse(PairError):
    """No admissible collar at this refinement; refine the representation grid."""


class PairConstructionError(PairError):
    pass


class PreconditionViolated(PairError):
    pass


class NotWeakPair(PairError):
    pass


class ShapeMismatch(PairError):
    pass


class NoTermination(PairError):
    pass


class WindowOverflow(PairError):
    pass


@dataclass(frozen=True)
class CubicalPair:
    p1: CubicalSet
    p2: CubicalSet

    def __post_init__(self):
        if not self.p2.cells <= self.p1.cells:
            raise ValueError("P2 must be contained in P1")

    @property
    def grid(self):
        return self.p1.grid

    @property
    def open_difference(self) -> frozenset:
        """Open cells making up ``P1 minus P2``."""
        return self.p1.cells - self.p2.cells

    def __le__(self, other: CubicalPair) -> bool:
        return self.p1 <= other.p1 and self.p2 <= other.p2

    def to_json(self) -> dict:
        return {"p1": format_set(self.p1), "p2": format_set(self.p2)}


def _lit(grid, cells) -> str:
    return format_set(CubicalSet.closure_of(grid, cells))


@dataclass
class PairAxiomReport:
    a: bool
    b: bool
    c: bool
    d: bool
    b_prime: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def weak(self) -> bool:
        return self.a and self.b and self.c and self.d

    @property
    def strict(self) -> bool:
        """The (older) index pair axioms (a), (b'), (c)."""
        return self.a and self.b_prime and self.c

    def to_json(self) -> dict:
        return {
            "a": self.a, "b": self.b, "c": self.c, "d": self.d, "b_prime": self.b_prime,
            "weak_index_pair": self.weak, "index_pair": self.strict,
            "witnesses": self.witnesses,
        }


def check_pair(f: MvMap, n: CubicalSet, p: CubicalPair, inv: CubicalSet | None = None) -> PairAxiomReport:
    """Evaluate the weak index pair axioms (a)-(d) and the strict axiom (b')."""
    if not p.p1.cells <= n.cells:
        raise PreconditionViolated("P1 is not contained in N")
    g = n.grid
    if inv is None:
        inv = invariant_parts(f, n).inv
    wit = {}
    a = True
    for name, pi in (("P1", p.p1), ("P2", p.p2)):
        extra = (image(f, pi).cells & n.cells) - pi.cells
        if extra:
            a = False
            wit[f"a_{name}"] = _lit(g, extra)
    bd = f_boundary(f, p.p1)
    b = bd.cells <= p.p2.cells
    if not b:
        wit["b"] = _lit(g, bd.cells - p.p2.cells)
    diff = p.open_difference
    int_diff = interior_cells(g, diff)
    c = inv.cells <= int_diff
    if not c:
        wit["c"] = _lit(g, inv.cells - int_diff)
    int_n = interior(n)
    d = diff <= int_n
    if not d:
        wit["d"] = _lit(g, diff - int_n)
    img = image_of_cells(f, diff)
    b_prime = img.cells <= n.cells
    if not b_prime:
        wit["b_prime"] = {"image": format_set(img), "outside_n": _lit(g, img.cells - n.cells)}
    return PairAxiomReport(a, b, c, d, b_prime, wit)


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def _open_star(n: CubicalSet, seed: frozenset, width: int) -> frozenset:
    """Cells of N whose closure meets ``seed``, iterated ``width`` times."""
    g = n.grid
    cur = frozenset(seed)
    for _ in range(width):
        out = set()
        for c in closure_cells(g, cur):
            out.update(star(g, c))
        cur = frozenset(out & n.cells)
    return cur


def _open_core(n: CubicalSet, cand: frozenset) -> frozenset:
    """Largest subset of ``cand`` that is open in N (closed under cofaces in N)."""
    g = n.grid
    return frozenset(c for c in cand if (star(g, c) & n.cells) <= cand)


def construct_weak_index_pair(
    f: MvMap,
    n: CubicalSet,
    w_target: CubicalSet | None = None,
    u_width: int = 1,
    a_width: int = 1,
    parts: InvariantDecomposition | None = None,
) -> CubicalPair:
    """``P1 = F_N^+(A)``, ``P2 = F_N^+(P1 minus U)`` for neighbourhoods
    ``U`` of Inv+ N and ``V`` of Inv- N (open in N, ``U n V`` inside the target
    window) and a compact neighbourhood ``A`` of Inv- N with ``F_N^+(A)`` in V.
    """
    graph = transition_graph(f, n)
    parts = parts or invariant_parts(f, n, graph)
    verdict = check_isolation(f, n, parts)
    if not verdict.weak:
        raise NotIsolating(f"Inv N is not in int N: {verdict.witnesses.get('inv_not_interior')}")
    empty = CubicalSet.empty(n.grid)
    if not parts.inv.cells:
        return CubicalPair(empty, empty)
    if u_width < 1 or a_width < 1:
        raise ValueError("widths must be positive")
    int_n = interior(n)
    window = int_n if w_target is None else interior(w_target) & int_n
    if not parts.inv.cells <= interior_cells(n.grid, window):
        raise PreconditionViolated("target window is not a neighbourhood of Inv N")
    u = _open_star(n, parts.inv_plus.cells, u_width)
    v_max = _open_core(n, frozenset(c for c in n.cells if c not in u or c in window))
    if not parts.inv_minus.cells <= v_max:
        raise ResolutionTooCoarse("no neighbourhood V of Inv- N avoids U outside the window")
    for width in range(a_width, 0, -1):
        a = collar(parts.inv_minus, width) & n
        p1 = forward_closure(f, n, a, graph)
        if p1.cells <= v_max:
            break
    else:
        raise ResolutionTooCoarse("forward closure of every collar of Inv- N leaves V")
    p2 = forward_closure(f, n, CubicalSet(n.grid, p1.cells - u), graph)
    pair = CubicalPair(p1, p2)
    rep = check_pair(f, n, pair, parts.inv)
    if not rep.weak:
        raise PairConstructionError(f"constructed pair violates the axioms: {rep.witnesses}")
    if not pair.open_difference <= window:
        raise PairConstructionError("P1 minus P2 leaves the target window")
    return pair


# ---------------------------------------------------------------------------
# pair algebra
# ---------------------------------------------------------------------------

def _require_weak(f, n, *pairs):
    inv = invariant_parts(f, n).inv
    for p in pairs:
        rep = check_pair(f, n, p, inv)
        if not rep.weak:
            raise NotWeakPair(f"not a weak index pair: {rep.witnesses}")


def restrict_pair(f: MvMap, p: CubicalPair, m: CubicalSet, n: CubicalSet | None = None) -> CubicalPair:
    """``P n M`` as a weak index pair in the smaller neighbourhood M."""
    inv_m = invariant_parts(f, m).inv
    if n is not None:
        if not m.cells <= n.cells:
            raise PreconditionViolated("M is not contained in N")
        inv_n = invariant_parts(f, n).inv
        if inv_n.cells != inv_m.cells:
            raise PreconditionViolated("M and N isolate different invariant sets")
    int_m = interior(m)
    if not inv_m.cells <= int_m:
        raise PreconditionViolated("M is not an isolating neighbourhood")
    outside = p.open_difference - int_m
    if outside:
        raise PreconditionViolated(f"P1 minus P2 not in int M: {_lit(m.grid, outside)}")
    q = CubicalPair(p.p1 & m, p.p2 & m)
    assert q.open_difference == p.open_difference
    rep = check_pair(f, m, q, inv_m)
    if not rep.weak:
        raise NotWeakPair(f"restriction failed the axioms: {rep.witnesses}")
    return q


def intersect(p: CubicalPair, q: CubicalPair) -> CubicalPair:
    return CubicalPair(p.p1 & q.p1, p.p2 & q.p2)


def mixed_lower(p: CubicalPair, q: CubicalPair) -> CubicalPair:
    """``(P1, P1 n Q2)`` for ``P <= Q``."""
    return CubicalPair(p.p1, p.p1 & q.p2)


def mixed_upper(p: CubicalPair, q: CubicalPair) -> CubicalPair:
    """``(P1 u Q2, Q2)`` for ``P <= Q``."""
    return CubicalPair(p.p1 | q.p2, q.p2)


def g_operator(f: MvMap, n: CubicalSet, p: CubicalPair, q: CubicalPair) -> CubicalPair:
    """``G_i(P, Q) = P_i u (F(Q_i) n N)``."""
    if not p <= q:
        raise PreconditionViolated("G(P, Q) needs P <= Q")
    if p.p1 != q.p1 and p.p2 != q.p2:
        raise ShapeMismatch("G(P, Q) needs P1 = Q1 or P2 = Q2")
    return CubicalPair(p.p1 | (image(f, q.p1) & n), p.p2 | (image(f, q.p2) & n))


def squeeze_sequence(f: MvMap, n: CubicalSet, p: CubicalPair, q: CubicalPair) -> list:
    """``Q = Q^0 >= Q^1 >= ... >= Q^n = P`` with ``Q^{k+1} = G(P, Q^k)``."""
    seq = [q]
    cap = len(n.cells) + 1
    while seq[-1] != p:
        if len(seq) > cap:
            raise NoTermination(f"squeeze did not reach P within {cap} steps")
        seq.append(g_operator(f, n, p, seq[-1]))
    return seq


def pair_algebra(f: MvMap, n: CubicalSet, p: CubicalPair, q: CubicalPair) -> dict:
    """All pair operations for weak index pairs ``P <= Q`` in N."""
    _require_weak(f, n, p, q)
    out = {"intersection": intersect(p, q)}
    if p <= q:
        out["mixed_lower"] = mixed_lower(p, q)
        out["mixed_upper"] = mixed_upper(p, q)
        if p.p1 == q.p1 or p.p2 == q.p2:
            out["g_operator"] = g_operator(f, n, p, q)
            out["squeeze_sequence"] = squeeze_sequence(f, n, p, q)
    return out


# ---------------------------------------------------------------------------
# the target pair T(P)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TruncatedT:
    window: CubicalSet
    t1: CubicalSet
    t2: CubicalSet

    @property
    def pair(self) -> CubicalPair:
        return CubicalPair(self.t1, self.t2)


def make_t(p: CubicalPair, n: CubicalSet, f: MvMap) -> TruncatedT:
    """``T_i = P_i u (W minus int N)`` for a finite window W around N and F(P1).

    The complement of ``int N`` is replaced by its part inside W; since
    ``T1 minus T2 = P1 minus P2`` this does not change the relative homology.
    """
    g = n.grid
    img = image(f, p.p1)
    if any(not g.in_domain(c) for c in img.cells):
        raise WindowOverflow("F(P1) leaves the grid domain")
    w = collar(n | img, 1)
    outer = closure_cells(g, w.cells - interior(n))
    t1 = CubicalSet(g, p.p1.cells | outer)
    t2 = CubicalSet(g, p.p2.cells | outer)
    for pi, ti in ((p.p1, t1), (p.p2, t2)):
        if not image(f, pi).cells <= ti.cells:
            raise PairError("F(P) is not contained in T(P)")
    if t1.cells - t2.cells != p.open_difference:
        raise PairError("T1 minus T2 differs from P1 minus P2")
    return TruncatedT(w, t1, t2)


def make_t_strict(p: CubicalPair, f: MvMap) -> TruncatedT:
    """Target of the classical index map of an index pair:
    ``(P1 u F(P2), P2 u F(P2))``."""
    fp2 = image(f, p.p2)
    t1, t2 = p.p1 | fp2, p.p2 | fp2
    if not image(f, p.p1).cells <= t1.cells:
        raise PairError("F(P1) is not contained in P1 u F(P2)")
    if t1.cells - t2.cells != p.open_difference:
        raise PairError("F(P2) meets P1 minus P2")
    return TruncatedT(t1, t1, t2)


# ---------------------------------------------------------------------------
# bounded exhaustive search for (strict) index pairs
# ---------------------------------------------------------------------------

class SearchTooLarge(PairError):
    pass


@dataclass
class StrictSearch:
    found: CubicalPair | None
    examined: int
    weak_examined: int
    witness: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "found": None if self.found is None else self.found.to_json(),
            "pairs_examined": self.examined,
            "weak_pairs_examined": self.weak_examined,
            "witness": self.witness,
        }


def _closed_extensions(grid, base: frozenset, free: list, cap: int):
    """All face-closed sets ``base u X`` with X a subset of ``free``."""
    if 2 ** len(free) > cap:
        raise SearchTooLarge(f"{len(free)} free cells exceed the search cap {cap}")
    for mask in range(2 ** len(free)):
        chosen = base | {c for i, c in enumerate(free) if mask >> i & 1}
        if all(faces(grid, c) <= chosen for c in chosen):
            yield frozenset(chosen)


def search_index_pairs(f: MvMap, n: CubicalSet, cap: int = 2 ** 12, first: bool = True) -> StrictSearch:
    """Enumerate pairs satisfying (a) and (c) and test (b').

    Condition (c) forces the closed star of Inv N into P1 and keeps the open
    star of Inv N out of P2, which prunes the space to subsets of the
    remaining cells.
    """
    g = n.grid
    inv = invariant_parts(f, n).inv
    st = frozenset(s for c in inv.cells for s in star(g, c))
    if not st <= n.cells:
        return StrictSearch(None, 0, 0, {"reason": "Inv N touches bd N"})
    base1 = closure_cells(g, st)
    free1 = sorted(n.cells - base1)
    examined = weak = 0
    found = None
    for p1c in _closed_extensions(g, base1, free1, cap):
        p1 = CubicalSet(g, p1c)
        if not (image(f, p1).cells & n.cells) <= p1c:
            continue
        free2 = sorted(p1c - st)
        for p2c in _closed_extensions(g, frozenset(), free2, cap):
            pair = CubicalPair(p1, CubicalSet(g, p2c))
            rep = check_pair(f, n, pair, inv)
            if not (rep.a and rep.c):
                continue
            examined += 1
            weak += rep.weak
            if rep.b_prime and found is None:
                found = pair
                if first:
                    return StrictSearch(found, examined, weak)
    wit = {}
    if found is None and inv.cells:
        img = image(f, inv)
        wit = {"image_of_inv": format_set(img), "n": format_set(n),
               "contained_in_n": img.cells <= n.cells}
    return StrictSearch(found, examined, weak, wit)


def find_strict_pair(f: MvMap, n: CubicalSet, cap: int = 2 ** 12) -> CubicalPair | None:
    """An index pair with ``P1 minus P2`` inside int N, or None."""
    inv = invariant_parts(f, n).inv
    for uw, aw in itertools.product((1, 2), (1, 2)):
        try:
            p = construct_weak_index_pair(f, n, u_width=uw, a_width=aw)
        except PairError:
            continue
        if check_pair(f, n, p, inv).strict:
            return p
    try:
        res = search_index_pairs(f, n, cap)
    except SearchTooLarge:
        return None
    if res.found is not None and check_pair(f, n, res.found, inv).d:
        return res.found
    return None


__all__ = [
    "CubicalPair",
    "NoTermination",
    "NotIsolating",
    "NotWeakPair",
    "PairAxiomReport",
    "PairConstructionError",
    "PairError",
    "PreconditionViolated",
    "ResolutionTooCoarse",
    "SearchTooLarge",
    "ShapeMismatch",
    "StrictSearch",
    "TruncatedT",
    "WindowOverflow",
    "check_pair",
    "construct_weak_index_pair",
    "find_strict_pair",
    "g_operator",
    "intersect",
    "make_t",
    "make_t_strict",
    "mixed_lower",
    "mixed_upper",
    "pair_algebra",
    "restrict_pair",
    "search_index_pairs",
    "squeeze_sequence",
]
