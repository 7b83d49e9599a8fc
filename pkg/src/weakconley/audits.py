"""Property suites shared by the ``audit`` command and the test-suite.

Each check returns an :class:`AuditResult` whose ``details`` carry a
counterexample payload on failure.
"""

from __future__ import annotations

import itertools

from .conley import AuditResult, ExcisionFailure, analyze
from .dynamics import forward_closure, image, invariant_parts, oracle_invariant, transition_graph
from .fields import Field
from .grid import CubicalSet, boundary, refine_set
from .homology import ProjectionNotIso
from .isolation import check_isolation, f_boundary
from .literals import format_set
from .pairs import (
    CubicalPair,
    PairError,
    check_pair,
    construct_weak_index_pair,
    g_operator,
    intersect,
    mixed_lower,
    mixed_upper,
    squeeze_sequence,
)
from .sampling import MvMap, is_antitone, samples_respected, verify_dmds_axioms

PAIR_OPTIONS = tuple({"u_width": u, "a_width": a} for u, a in itertools.product((1, 2, 3), (1, 2)))


def audit_dmds(f: MvMap, trials: int = 100, seed: int = 0) -> AuditResult:
    rep = verify_dmds_axioms(f, trials, seed)
    details = rep.to_json()
    details["vacuous"] = trials <= 0
    details["witnesses"] = [{k: _plain(v) for k, v in w.items()} for w in details["witnesses"]]
    return AuditResult("dmds_axioms", rep.passed, details)


def corrupted_copy(f: MvMap) -> MvMap:
    """Copy of ``f`` with every value box trimmed by one rep cell along the
    first axis while the preimage table is left stale.  Used to show that the
    dmds audit notices a table that is out of sync with itself."""
    table = {}
    for c, box in f.table.items():
        if box is not None and box[0][1] - box[0][0] >= 2:
            box = ((box[0][0], box[0][1] - 1),) + tuple(box[1:])
        table[c] = box
    return MvMap(f.grid, table, dict(f.preimage), f.combo)


def audit_map(f: MvMap, samples=None) -> AuditResult:
    details = {"antitone": is_antitone(f)}
    if samples is not None:
        details["samples_respected"] = samples_respected(f, samples)
    return AuditResult("map_construction", all(details.values()), details)


def audit_oracle(f: MvMap, n: CubicalSet) -> AuditResult:
    fast = invariant_parts(f, n).inv
    slow = oracle_invariant(f, n)
    details = {"inv": format_set(fast)}
    if fast.cells != slow.cells:
        details["oracle"] = format_set(slow)
        details["only_trimming"] = len(fast.cells - slow.cells)
        details["only_oracle"] = len(slow.cells - fast.cells)
    return AuditResult("invariant_oracle", fast.cells == slow.cells, details)


def audit_isolation_chain(f: MvMap, n: CubicalSet) -> AuditResult:
    """Either strong notion implies the weak one."""
    v = check_isolation(f, n)
    ok = v.weak or not (v.strong_metric or v.strong_setwise)
    return AuditResult("isolation_implications", ok, {"verdict": v.to_json()})


def f_boundary_on_bd(f: MvMap, n: CubicalSet, p: CubicalPair) -> bool:
    """The F-boundary of P1 lies on the boundary of N."""
    return f_boundary(f, p.p1).cells <= boundary(n).cells


def constructed_pairs(f: MvMap, n: CubicalSet, options=PAIR_OPTIONS) -> list:
    """Distinct weak index pairs from the construction with varied widths."""
    parts = invariant_parts(f, n)
    out = []
    for opt in options:
        try:
            p = construct_weak_index_pair(f, n, parts=parts, **opt)
        except PairError:
            continue
        if p not in out:
            out.append(p)
    return out


def perturbed_pairs(f: MvMap, n: CubicalSet, p: CubicalPair, limit: int = 4) -> list:
    """Weak index pairs near ``p``: P2 or P1 grown by the forward closure of one cell.

    Candidates are kept only if they pass the checker.
    """
    g = n.grid
    graph = transition_graph(f, n)
    inv = invariant_parts(f, n, graph).inv
    out = []
    for c in sorted(p.p1.cells - p.p2.cells):
        if len(out) >= limit // 2:
            break
        extra = forward_closure(f, n, CubicalSet.closure_of(g, [c]), graph)
        q = CubicalPair(p.p1, p.p2 | extra)
        if q != p and q not in out and check_pair(f, n, q, inv).weak:
            out.append(q)
    for c in sorted(n.cells - p.p1.cells):
        if len(out) >= limit:
            break
        extra = forward_closure(f, n, CubicalSet.closure_of(g, [c]), graph)
        q = CubicalPair(p.p1 | extra, p.p2 | extra)
        if q not in out and check_pair(f, n, q, inv).weak:
            out.append(q)
    return out


def suite_pairs(f: MvMap, n: CubicalSet, max_refinement: int = 32, extra: int = 4, cap: int = 6):
    """``(f, n, pairs)`` at the first refinement where the construction succeeds,
    at most ``cap`` pairs (the suite is quadratic in their number)."""
    while True:
        pairs = constructed_pairs(f, n)
        if pairs or f.grid.refinement * 2 > max_refinement:
            break
        r = f.grid.refinement * 2
        f, n = f.refined(r), refine_set(n, f.grid.refined(r))
    more = []
    for p in pairs:
        more.extend(q for q in perturbed_pairs(f, n, p, extra) if q not in pairs and q not in more)
    return f, n, (pairs + more)[:cap]


def _check_g(f, n, p, q, inv) -> dict:
    """Properties (i)-(iv) of G(P, Q) and the squeeze sequence from Q down to P."""
    g = g_operator(f, n, p, q)
    fq = [image(f, q.p1) & n, image(f, q.p2) & n]
    res = {
        "i": all(gi == pi for gi, pi, qi in ((g.p1, p.p1, q.p1), (g.p2, p.p2, q.p2)) if pi == qi),
        "ii": p <= g <= q,
        "iii": check_pair(f, n, g, inv).weak,
        "iv": fq[0].cells <= g.p1.cells and fq[1].cells <= g.p2.cells,
    }
    seq = squeeze_sequence(f, n, p, q)
    res["squeeze_length"] = len(seq) - 1
    res["squeeze_within_cap"] = len(seq) - 1 <= len(n.cells)
    res["squeeze_weak"] = all(check_pair(f, n, s, inv).weak for s in seq)
    res["squeeze_fixed"] = all(
        (p.p1 != q.p1 or s.p1 == p.p1) and (p.p2 != q.p2 or s.p2 == p.p2) for s in seq
    )
    res["squeeze_invariance"] = all(
        (image(f, a.p1) & n).cells <= b.p1.cells and (image(f, a.p2) & n).cells <= b.p2.cells
        for a, b in zip(seq, seq[1:])
    )
    return res


def pair_algebra_checks(f: MvMap, n: CubicalSet, pairs: list | None = None) -> dict:
    """Run intersection, mixed pairs, G and squeezing on all pairs of pairs.

    Returns ``{"checks": {...name: bool}, "failures": [...], "pairs": k}``.
    """
    inv = invariant_parts(f, n).inv
    pairs = constructed_pairs(f, n) if pairs is None else pairs
    checks = {"f_boundary_on_bd": True, "intersection": True, "mixed_lower": True, "mixed_upper": True,
              "g_i": True, "g_ii": True, "g_iii": True, "g_iv": True, "squeeze": True}
    failures = []

    def fail(name, p, q=None, extra=None):
        checks[name] = False
        rec = {"check": name, "p": p.to_json()}
        if q is not None:
            rec["q"] = q.to_json()
        if extra:
            rec.update(extra)
        failures.append(rec)

    def g_suite(p, q):
        if p == q or not p <= q or (p.p1 != q.p1 and p.p2 != q.p2):
            return
        r = _check_g(f, n, p, q, inv)
        for key in ("i", "ii", "iii", "iv"):
            if not r[key]:
                fail("g_" + key, p, q)
        if not (r["squeeze_within_cap"] and r["squeeze_weak"] and r["squeeze_fixed"] and r["squeeze_invariance"]):
            fail("squeeze", p, q, {k: v for k, v in r.items() if k.startswith("squeeze")})

    for p in pairs:
        if not f_boundary_on_bd(f, n, p):
            fail("f_boundary_on_bd", p, extra={"bd_F": format_set(f_boundary(f, p.p1))})
    for p, q in itertools.combinations_with_replacement(pairs, 2):
        r = intersect(p, q)
        if not check_pair(f, n, r, inv).weak:
            fail("intersection", p, q)
            continue
        for small, big in ((r, p), (r, q)):
            lo, up = mixed_lower(small, big), mixed_upper(small, big)
            if not check_pair(f, n, lo, inv).weak:
                fail("mixed_lower", small, big)
            if not check_pair(f, n, up, inv).weak:
                fail("mixed_upper", small, big)
            # the chain small <= lo <= big and small <= up <= big splits into
            # comparable pairs sharing one component
            g_suite(small, lo)
            g_suite(up, big)
            g_suite(small, big)
    return {"checks": checks, "failures": failures[:10], "pairs": len(pairs)}


def audit_pair_algebra(f: MvMap, n: CubicalSet, pairs: list | None = None) -> AuditResult:
    res = pair_algebra_checks(f, n, pairs)
    return AuditResult("pair_algebra", all(res["checks"].values()), res)


def audit_constructed_pair(f: MvMap, n: CubicalSet) -> AuditResult:
    try:
        p = construct_weak_index_pair(f, n)
    except PairError as exc:
        return AuditResult("constructed_pair", False, {"error": type(exc).__name__, "message": str(exc)})
    ax = check_pair(f, n, p)
    return AuditResult("constructed_pair", ax.weak and f_boundary_on_bd(f, n, p),
                       {"pair": p.to_json(), "axioms": ax.to_json(), "f_boundary_on_bd": f_boundary_on_bd(f, n, p)})


def audit_excision(f: MvMap, n: CubicalSet, k: Field | None = None) -> AuditResult:
    """The pipeline either completes with an invertible excision map or aborts."""
    try:
        a = analyze(f, n, k)
    except (ExcisionFailure, ProjectionNotIso) as exc:
        return AuditResult("excision", False, {"error": type(exc).__name__, "message": str(exc)})
    iso = a.bundle.excision_map.is_iso()
    return AuditResult("excision", iso, {"excision_invertible": iso, "refinement": a.refinement,
                                         "index": a.report.to_json()["degrees"]})


def _plain(v):
    if isinstance(v, tuple):
        return [_plain(x) for x in v]
    return v


__all__ = [
    "PAIR_OPTIONS",
    "audit_constructed_pair",
    "audit_dmds",
    "audit_excision",
    "audit_isolation_chain",
    "audit_map",
    "audit_oracle",
    "audit_pair_algebra",
    "constructed_pairs",
    "f_boundary_on_bd",
    "pair_algebra_checks",
    "perturbed_pairs",
    "suite_pairs",
]
