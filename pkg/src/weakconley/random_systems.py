"""Small random sampled systems on circles and tori, for property tests and audits."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .grid import Axis, CubicalSet, GridSpec, HullAmbiguous, box_cells, collar
from .isolation import check_isolation
from .sampling import MvMap, SampleSet, build_combo_map, build_mv_map

W = Fraction(1, 16)


@dataclass
class RandomSystem:
    f: MvMap
    samples: SampleSet
    n: CubicalSet
    seed: int


def _coarse_shape(rng, dim):
    if dim == 1:
        return (rng.randint(8, 16),), rng.choice((2, 4))
    return (rng.randint(10, 12), rng.randint(10, 12)), 2


def random_map(rng: random.Random, dim: int = 1, max_tries: int = 200):
    """A random sampled map on a circle of 8..16 cells (d=1) or a
    10..12 x 10..12 torus (d=2).

    The sampled map is an integer affine map of the torus, jittered by a cell
    in dimension one (where it is sometimes a random walk with steps of at
    most 2 cells instead).
    Each coarse cell gets one sample at its centre; about a third of the
    cells get a second sample whose image lands next to the first.  Draws
    whose values would need an arc of half a period or more are rejected.
    """
    for _ in range(max_tries):
        shape, r = _coarse_shape(rng, dim)
        grid = GridSpec(tuple(Axis.circle(m * W) for m in shape), W, Fraction(0), r)
        span = (-2, -1, 0, 1, 2) if dim == 1 else (-1, 0, 1)
        a = [[rng.choice(span) for _ in shape] for _ in shape]
        b = [rng.randrange(m) for m in shape]
        walk = None
        if dim == 1 and rng.random() < 0.3:
            walk = [b[0]]
            for _ in range(shape[0] - 1):
                walk.append(walk[-1] + rng.randint(-2, 2))
        jitter = (-1, 0, 0, 1) if dim == 1 else (0,)
        pts = []
        for idx in _all_indices(shape):
            if walk is not None:
                tgt = (walk[idx[0]] % shape[0],)
            else:
                tgt = tuple((sum(a[j][t] * idx[t] for t in range(dim)) + b[j] + rng.choice(jitter)) % m
                            for j, m in enumerate(shape))
            pts.append((tuple(i * W for i in idx), tuple(j * W for j in tgt)))
            if rng.random() < 0.33:
                near = tuple((j + rng.choice((-1, 0, 1))) % m for j, m in zip(tgt, shape))
                x = tuple(i * W + W / 4 for i in idx)
                pts.append((x, tuple(j * W for j in near)))
        samples = SampleSet(dim, tuple(pts))
        try:
            f = build_mv_map(build_combo_map(samples, grid), grid)
        except HullAmbiguous:
            continue
        return f, samples
    raise RuntimeError("could not draw a map with short hulls")


def _all_indices(shape):
    return list(itertools.product(*(range(m) for m in shape)))


def random_neighbourhood(rng: random.Random, grid: GridSpec, max_top: int = 40) -> CubicalSet:
    """Union of randomly chosen coarse cells, at most ``max_top`` top cells."""
    shape = grid.coarse_shape
    per_cell = grid.refinement ** grid.dimension
    idx = _all_indices(shape)
    rng.shuffle(idx)
    keep = max(1, min(len(idx), max_top // per_cell))
    k = rng.randint(1, keep)
    cells = set()
    for q in idx[:k]:
        cells.update(box_cells(grid, grid.coarse_box(q)))
    return CubicalSet(grid, frozenset(cells))


def random_system(seed: int, dim: int | None = None, max_top: int = 40) -> RandomSystem:
    rng = random.Random(seed)
    if dim is None:
        dim = 1 if rng.random() < 0.7 else 2
    f, samples = random_map(rng, dim)
    return RandomSystem(f, samples, random_neighbourhood(rng, f.grid, max_top), seed)


def random_isolated_system(seed: int, dim: int = 1, max_top: int = 40, tries: int = 200,
                           nonempty: bool = True) -> RandomSystem:
    """A random system with a neighbourhood isolating a (nonempty) invariant set.

    Neighbourhoods are collars of one or two coarse cells, which are far more
    often isolating than arbitrary unions.
    """
    rng = random.Random(seed)
    for _ in range(tries):
        f, samples = random_map(rng, dim)
        g = f.grid
        idx = _all_indices(g.coarse_shape)
        for _ in range(10):
            cells = set()
            for q in rng.sample(idx, rng.choice((1, 1, 2))):
                cells.update(box_cells(g, g.coarse_box(q)))
            base = CubicalSet(g, frozenset(cells))
            for k in range(1, g.refinement + 1):
                n = collar(base, k)
                if len(n.top_cells()) > max_top:
                    break
                v = check_isolation(f, n)
                if v.weak and (v.inv.cells or not nonempty):
                    return RandomSystem(f, samples, n, seed)
    raise RuntimeError(f"no isolated random system found for seed {seed}")


__all__ = ["RandomSystem", "random_isolated_system", "random_map", "random_neighbourhood", "random_system"]
