"""Compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--sizes 500 2000 8000] [--repeat 3]

Both backends are run on the same inputs and their outputs compared before
any timing is reported.
"""

import argparse
import time

import numpy as np

from weakconley._kernels import compiled, python


def random_graph(rng, n, out_degree=3):
    """CSR successor lists; about a tenth of the nodes are sinks."""
    indptr = [0]
    indices = []
    for _ in range(n):
        k = 0 if rng.random() < 0.1 else rng.integers(1, out_degree + 1)
        indices.extend(rng.integers(0, n, size=k).tolist())
        indptr.append(len(indices))
    return np.asarray(indptr, dtype=np.int64), np.asarray(indices, dtype=np.int64)


def random_boundary(rng, n, p, density=3):
    """Column-major sparse-ish square matrix with entries in [0, p)."""
    rt = np.zeros((n, n), dtype=np.int64)
    for j in range(n):
        rows = rng.integers(0, max(1, j), size=density)
        rt[j, rows] = rng.integers(1, p, size=density)
    return rt


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[500, 2000, 8000])
    ap.add_argument("--matrix-sizes", type=int, nargs="+", default=[100, 200, 400])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--prime", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if compiled is None:
        raise SystemExit("compiled kernels are not built; run: pip install -e . --no-build-isolation")
    rng = np.random.default_rng(args.seed)

    print(f"{'kernel':<14}{'size':>8}{'python [s]':>14}{'compiled [s]':>14}{'speedup':>10}")
    for n in args.sizes:
        indptr, indices = random_graph(rng, n)
        tp, a = best_of(lambda: python.trim_forward(indptr, indices, n), args.repeat)
        tc, b = best_of(lambda: compiled.trim_forward(indptr, indices, n), args.repeat)
        assert np.array_equal(np.asarray(a), np.asarray(b)), "trim_forward backends disagree"
        print(f"{'trim_forward':<14}{n:>8}{tp:>14.5f}{tc:>14.5f}{tp / tc:>10.1f}")
    for n in args.matrix_sizes:
        rt = random_boundary(rng, n, args.prime)

        def run(mod):
            r, v = rt.copy(), np.eye(n, dtype=np.int64)
            low = mod.reduce_mod_p(r, v, args.prime)
            return np.asarray(low), r, v

        tp, a = best_of(lambda: run(python), args.repeat)
        tc, b = best_of(lambda: run(compiled), args.repeat)
        assert all(np.array_equal(x, y) for x, y in zip(a, b)), "reduce_mod_p backends disagree"
        print(f"{'reduce_mod_p':<14}{n:>8}{tp:>14.5f}{tc:>14.5f}{tp / tc:>10.1f}")


if __name__ == "__main__":
    main()
