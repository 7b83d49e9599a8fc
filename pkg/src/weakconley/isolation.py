"""Isolation predicates: the weak condition ``Inv N in int N``, the metric
condition ``dist(Inv N, bd N) > max diam F(x)`` and the setwise condition
``Inv N u F(Inv N) in int N``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .dyadic import format_fraction
from .dynamics import image, invariant_parts
from .grid import CubicalSet, boundary, box_diameter, closed_difference, collar, interior
from .literals import format_set
from .sampling import MvMap


class NoIsolatingCollar(RuntimeError):
    pass


def f_boundary(f: MvMap, a: CubicalSet) -> CubicalSet:
    """``bd_F(A) = cl A  n  cl(F(A) minus A)``."""
    return a & closed_difference(image(f, a), a)


def _axis_gap(a: int, e: int, b: int, g: int, per) -> int:
    """Distance (rep units) between the intervals [a, a+e] and [b, b+g]."""
    if per is None:
        return max(0, b - (a + e), a - (b + g))
    best = None
    for shift in (-per, 0, per):
        lo, hi = b + shift, b + g + shift
        d = max(0, lo - (a + e), a - hi)
        best = d if best is None else min(best, d)
    return best


def set_distance(x: CubicalSet, y: CubicalSet) -> Fraction | None:
    """Sup-metric distance between the polyhedra (None if either is empty)."""
    if not x.cells or not y.cells:
        return None
    g = x.grid
    xs, ys = x.maximal_cells(), y.maximal_cells()
    best = None
    for c in xs:
        for t in ys:
            d = max(_axis_gap(k, e, l, h, per)
                    for (k, e), (l, h), per in zip(c, t, g.periods))
            if best is None or d < best:
                best = d
                if d == 0:
                    return Fraction(0)
    return best * g.rep_width


def max_value_diameter(f: MvMap, n: CubicalSet) -> Fraction:
    """``max{diam F(x) : x in N}`` in the sup metric."""
    best = Fraction(0)
    for c in n.cells:
        box = f.table.get(c)
        if box is not None:
            best = max(best, box_diameter(f.grid, box))
    return best


@dataclass
class IsolationVerdict:
    weak: bool
    strong_metric: bool
    strong_setwise: bool
    inv: CubicalSet
    distance: Fraction | None = None  # dist(Inv N, bd N); None = +infinity
    max_diameter: Fraction = Fraction(0)
    witnesses: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "weak": self.weak,
            "strong_metric": self.strong_metric,
            "strong_setwise": self.strong_setwise,
            "inv": format_set(self.inv),
            "distance_inv_bd": None if self.distance is None else format_fraction(self.distance),
            "max_value_diameter": format_fraction(self.max_diameter),
            "witnesses": self.witnesses,
        }


def check_isolation(f: MvMap, n: CubicalSet, parts=None) -> IsolationVerdict:
    parts = parts or invariant_parts(f, n)
    inv = parts.inv
    int_n = interior(n)
    wit = {}
    outside = inv.cells - int_n
    weak = not outside
    if not weak:
        wit["inv_not_interior"] = format_set(CubicalSet.closure_of(n.grid, outside))
    f_inv = image(f, inv)
    escaping = (inv.cells | f_inv.cells) - int_n
    setwise = not escaping
    if not setwise:
        wit["image_of_inv"] = format_set(f_inv)
        wit["escaping"] = format_set(CubicalSet.closure_of(n.grid, escaping))
    dist = set_distance(inv, boundary(n))
    diam = max_value_diameter(f, n)
    metric = dist is None or dist > diam
    if not metric:
        wit["metric"] = {"distance": format_fraction(dist), "max_diameter": format_fraction(diam)}
    # a strongly isolating neighbourhood is always isolating
    assert weak or not (metric or setwise), "strong isolation without weak isolation"
    return IsolationVerdict(weak, metric, setwise, inv, dist, diam, wit)


def grow_isolating_neighbourhood(f: MvMap, seed: CubicalSet, max_k: int) -> CubicalSet:
    """Smallest ``collar(seed, k)``, ``k <= max_k``, that isolates its invariant
    part and whose invariant part contains that of the seed."""
    if not seed.cells:
        raise ValueError("seed must be nonempty")
    base = invariant_parts(f, seed).inv
    for k in range(max_k + 1):
        n = collar(seed, k)
        v = check_isolation(f, n)
        if v.weak and base.cells <= v.inv.cells:
            return n
    raise NoIsolatingCollar(f"no collar of width <= {max_k} is an isolating neighbourhood")


__all__ = [
    "IsolationVerdict",
    "NoIsolatingCollar",
    "check_isolation",
    "f_boundary",
    "grow_isolating_neighbourhood",
    "max_value_diameter",
    "set_distance",
]
