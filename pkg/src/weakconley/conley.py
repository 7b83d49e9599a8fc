"""Index maps, Leray reduction and the end-to-end Conley index pipeline."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .fields import Field, NotAField, SingularMatrix, charpoly, column_basis, format_poly, inverse, matmul, rank, solve
from .grid import CubicalSet, collar, refine_set
from .homology import ChainComplex, GradedMap, GradedModule, Homology, inclusion_induced, mv_induced
from .isolation import IsolationVerdict, check_isolation
from .literals import format_set
from .pairs import (
    CubicalPair,
    NotIsolating,
    NotWeakPair,
    PairAxiomReport,
    ResolutionTooCoarse,
    check_pair,
    construct_weak_index_pair,
    find_strict_pair,
    make_t,
    make_t_strict,
    search_index_pairs,
)
from .sampling import MvMap
from .dynamics import invariant_parts


class ExcisionFailure(ArithmeticError):
    """``H(P) -> H(T(P))`` is not an isomorphism."""


class NoStrictPairFound(RuntimeError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness or {}


@dataclass
class IndexMapBundle:
    field: Field
    pair: CubicalPair
    t_pair: CubicalPair
    homology: Homology
    excision_map: GradedMap
    f_star: GradedMap
    index_map: GradedMap  # homological convention
    graph_cells: int = 0

    @property
    def module(self) -> GradedModule:
        return GradedModule(self.field, self.homology.dims)

    @property
    def cohomological(self) -> GradedMap:
        return self.index_map.transpose()

    def summary(self) -> dict:
        return {
            "homology": self.module.to_json(),
            "excision_invertible": self.excision_map.is_iso(),
            "index_map": self.cohomological.to_json(),
            "graph_cells": self.graph_cells,
        }


def index_map(f: MvMap, n: CubicalSet, p: CubicalPair, k: Field = None, strict: bool = False, rng=None) -> IndexMapBundle:
    """``I_P = F_* o i_*^{-1}`` on ``H(P)`` (``i : P -> T(P)``)."""
    k = k or Field()
    if not isinstance(k, Field):
        raise NotAField("index maps are computed over a field (use q or zp:P)")
    t = make_t_strict(p, f) if strict else make_t(p, n, f)
    top = n.grid.dimension
    hp = Homology(ChainComplex.of_pair(p, top, rng), k)
    ht = Homology(ChainComplex.of_pair(t.pair, top, rng), k)
    exc = inclusion_induced(hp, ht)
    for d, m in exc.matrices.items():
        r, c = exc.shapes[d]
        if r != c or (r and rank(m, k) != r):
            raise ExcisionFailure(f"degree {d}: H(P) has dim {c}, H(T) has dim {r}, "
                                  f"rank {rank(m, k) if r and c else 0}")
    mv = mv_induced(f, p, t, hp, ht, rng)
    mats = {}
    for d, m in mv.f_star.matrices.items():
        dim = hp.dim(d)
        mats[d] = matmul(inverse(exc.matrices[d], k), m, k) if dim else []
    im = GradedMap(k, mats, {d: (hp.dim(d), hp.dim(d)) for d in mats})
    return IndexMapBundle(k, p, t.pair, hp, exc, mv.f_star, im, len(mv.graph.cells))


# ---------------------------------------------------------------------------
# Leray reduction
# ---------------------------------------------------------------------------

@dataclass
class DegreeIndex:
    dim: int
    matrix: list
    charpoly: list

    def key(self, k: Field) -> tuple:
        return (self.dim, tuple(k.to_json(c) for c in self.charpoly))


@dataclass
class ConleyIndexReport:
    field: Field
    degrees: dict  # degree -> DegreeIndex
    provenance: dict = field(default_factory=dict)

    def key(self) -> tuple:
        return tuple((d, *v.key(self.field)) for d, v in sorted(self.degrees.items()))

    def is_trivial(self) -> bool:
        return all(v.dim == 0 for v in self.degrees.values())

    def to_json(self) -> dict:
        k = self.field
        return {
            "coefficients": k.spec,
            "convention": "cohomological index map (transpose of the homological one); "
                          "classes compared up to conjugacy over the field",
            "degrees": {
                str(d): {
                    "dim": v.dim,
                    "matrix": [[k.to_json(x) for x in r] for r in v.matrix],
                    "charpoly": format_poly(v.charpoly, k),
                    "charpoly_coeffs": [k.to_json(c) for c in v.charpoly],
                }
                for d, v in sorted(self.degrees.items())
            },
            "provenance": self.provenance,
        }


def reduce_endomorphism(a: list, k) -> DegreeIndex:
    """Restrict ``a`` to its eventual image ``im a^n`` (``n = dim``)."""
    if not isinstance(k, Field):
        raise NotAField("Leray reduction needs field coefficients")
    n = len(a)
    if n == 0:
        return DegreeIndex(0, [], [k(1)])
    power = [list(r) for r in a]
    for _ in range(n - 1):
        power = matmul(power, a, k)
    b = column_basis(power, k)
    if not b or not b[0]:
        return DegreeIndex(0, [], [k(1)])
    restricted = solve(b, matmul(a, b, k), k)
    cp = charpoly(restricted, k)
    try:
        inverse(restricted, k)
    except SingularMatrix as exc:  # cannot happen for an eventual image
        raise AssertionError("restriction to the eventual image is not invertible") from exc
    assert cp[0] != 0
    return DegreeIndex(len(restricted), restricted, cp)


def leray_reduce(bundle: IndexMapBundle, provenance: dict | None = None) -> ConleyIndexReport:
    k = bundle.field
    coh = bundle.cohomological
    degrees = {d: reduce_endomorphism(m, k) for d, m in sorted(coh.matrices.items())}
    return ConleyIndexReport(k, degrees, provenance or {})


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------

@dataclass
class Analysis:
    f: MvMap
    n: CubicalSet
    verdict: IsolationVerdict
    pair: CubicalPair
    axioms: PairAxiomReport
    bundle: IndexMapBundle
    report: ConleyIndexReport
    refinement: int
    options: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "refinement": self.refinement,
            "neighbourhood": format_set(self.n),
            "isolation": self.verdict.to_json(),
            "pair": self.pair.to_json(),
            "pair_axioms": self.axioms.to_json(),
            "index_map": self.bundle.summary(),
            "conley_index": self.report.to_json(),
        }


def analyze(
    f: MvMap,
    n: CubicalSet,
    k: Field | None = None,
    w_target: CubicalSet | None = None,
    u_width: int = 1,
    a_width: int = 1,
    max_refinement: int = 32,
    pair: CubicalPair | None = None,
    rng=None,
) -> Analysis:
    """Isolation check, weak index pair, index map and Leray reduction.

    If the pair construction needs a finer representation grid the map and
    the sets are re-expressed at twice the refinement (the map itself does
    not change) until ``max_refinement``.
    """
    k = k or Field()
    if not isinstance(k, Field):
        raise NotAField("the Conley index is reduced over a field (use q or zp:P)")
    parts = invariant_parts(f, n)
    verdict = check_isolation(f, n, parts)
    if not verdict.weak:
        raise NotIsolating(f"Inv N is not contained in int N: {verdict.witnesses.get('inv_not_interior')}")
    while pair is None:
        try:
            pair = construct_weak_index_pair(f, n, w_target, u_width, a_width, parts)
        except ResolutionTooCoarse:
            r = f.grid.refinement * 2
            if r > max_refinement:
                raise
            g = f.grid.refined(r)
            f = f.refined(r)
            n = refine_set(n, g)
            w_target = None if w_target is None else refine_set(w_target, g)
            parts = invariant_parts(f, n)
            verdict = check_isolation(f, n, parts)
    axioms = check_pair(f, n, pair, parts.inv)
    if not axioms.weak:
        failed = [c for c in "abcd" if not getattr(axioms, c)]
        raise NotWeakPair(f"given pair fails axiom(s) {', '.join(failed)}: {axioms.witnesses}")
    bundle = index_map(f, n, pair, k, rng=rng)
    prov = {"neighbourhood": format_set(n), "pair": pair.to_json(), "refinement": f.grid.refinement}
    report = leray_reduce(bundle, prov)
    return Analysis(f, n, verdict, pair, axioms, bundle, report, f.grid.refinement,
                    {"u_width": u_width, "a_width": a_width,
                     "w_target": None if w_target is None else format_set(w_target)})


# ---------------------------------------------------------------------------
# audits
# ---------------------------------------------------------------------------

@dataclass
class AuditResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "details": self.details}


def independence_runs(f: MvMap, neighbourhoods: list, k: Field | None = None,
                      options: list | None = None) -> list:
    """Analyses for every neighbourhood and every pair-construction option."""
    options = options or [{"u_width": u, "a_width": a} for u, a in itertools.product((1, 2), (1, 2))]
    runs = []
    for n in neighbourhoods:
        for opt in options:
            runs.append(analyze(f, n, k, **opt))
    return runs


def audit_independence(f: MvMap, neighbourhoods: list, k: Field | None = None,
                       options: list | None = None, inv_spec: CubicalSet | None = None,
                       extra_pairs: list = ()) -> AuditResult:
    """All (N, P) combinations must give the same (dim, charpoly) per degree.

    ``extra_pairs`` holds ``(N, P)`` tuples with a given pair (e.g. a
    hand-made one) that join the comparison.
    """
    k = k or Field()
    runs = independence_runs(f, neighbourhoods, k, options)
    for n, p in extra_pairs:
        runs.append(analyze(f, n, k, pair=p))
    invs = set()
    for r in runs:
        inv = r.verdict.inv
        top = max(x.f.grid.refinement for x in runs)
        invs.add(refine_set(inv, inv.grid.refined(top)).cells if inv.grid.refinement != top else inv.cells)
    same_inv = len(invs) <= 1
    if inv_spec is not None and runs:
        same_inv = same_inv and runs[0].verdict.inv.cells == inv_spec.cells
    keys = {r.report.key() for r in runs}
    combos = {(format_set(r.n), r.refinement, r.pair.to_json()["p1"], r.pair.to_json()["p2"]) for r in runs}
    details = {
        "runs": len(runs),
        "distinct_combinations": len(combos),
        "same_invariant_set": same_inv,
        "reports": [
            {"neighbourhood": format_set(r.n), "refinement": r.refinement, "pair": r.pair.to_json(),
             "options": r.options, "index": r.report.to_json()["degrees"]}
            for r in runs
        ],
    }
    return AuditResult("independence", same_inv and len(keys) <= 1, details)


def audit_strong_consistency(f: MvMap, n: CubicalSet, k: Field | None = None, cap: int = 2 ** 12) -> AuditResult:
    """Index from a classical index pair vs. index from a weak index pair."""
    k = k or Field()
    verdict = check_isolation(f, n)
    strict = find_strict_pair(f, n, cap)
    if strict is None:
        res = search_index_pairs(f, n, cap)
        raise NoStrictPairFound("no index pair with P1 minus P2 in int N exists in N", res.to_json())
    inv = verdict.inv
    ax = check_pair(f, n, strict, inv)
    strict_report = leray_reduce(index_map(f, n, strict, k, strict=True))
    weak = analyze(f, n, k)
    details = {
        "strongly_isolating_setwise": verdict.strong_setwise,
        "strict_pair": strict.to_json(),
        "strict_pair_axioms": ax.to_json(),
        "weak_pair": weak.pair.to_json(),
        "strict_index": strict_report.to_json()["degrees"],
        "weak_index": weak.report.to_json()["degrees"],
    }
    passed = ax.strict and ax.weak and strict_report.key() == weak.report.key()
    return AuditResult("strong_consistency", passed, details)


def neighbourhood_variants(n: CubicalSet, inv: CubicalSet) -> list:
    """N and its one-cell collar, as used by the independence audit."""
    return [n, collar(n, 1)]


__all__ = [
    "Analysis",
    "AuditResult",
    "ConleyIndexReport",
    "DegreeIndex",
    "ExcisionFailure",
    "IndexMapBundle",
    "NoStrictPairFound",
    "analyze",
    "audit_independence",
    "audit_strong_consistency",
    "index_map",
    "leray_reduce",
    "reduce_endomorphism",
]
