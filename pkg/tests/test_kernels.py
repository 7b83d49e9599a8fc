import json
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weakconley import _kernels
from weakconley._kernels import compiled, python

needs_ext = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")


def csr(succ):
    indptr = np.zeros(len(succ) + 1, dtype=np.int64)
    for i, s in enumerate(succ):
        indptr[i + 1] = indptr[i] + len(s)
    indices = np.asarray([j for s in succ for j in s], dtype=np.int64)
    return indptr, indices


def naive_trim(succ):
    alive = set(range(len(succ)))
    while True:
        keep = {i for i in alive if any(j in alive for j in succ[i])}
        if keep == alive:
            return alive
        alive = keep


graphs = st.integers(0, 30).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, max(n - 1, 0)), max_size=3), min_size=n, max_size=n)
    if n else st.just([]))


@given(graphs)
@settings(max_examples=150, deadline=None)
def test_python_trim_matches_naive_fixpoint(succ):
    alive = python.trim_forward(*csr(succ), len(succ))
    assert {i for i, v in enumerate(alive) if v} == naive_trim(succ)


@needs_ext
@given(graphs)
@settings(max_examples=150, deadline=None)
def test_compiled_trim_matches_python(succ):
    a = python.trim_forward(*csr(succ), len(succ))
    b = compiled.trim_forward(*csr(succ), len(succ))
    assert np.array_equal(np.asarray(a), np.asarray(b))


def boundary_like(rng, n, p):
    rt = np.zeros((n, n), dtype=np.int64)
    for j in range(1, n):
        rows = rng.integers(0, j, size=rng.integers(0, 4))
        rt[j, rows] = rng.integers(1, p, size=rows.size)
    return rt


@pytest.mark.parametrize("p", [2, 3, 7, 65537])
@pytest.mark.parametrize("seed", range(5))
def test_reduction_invariants(p, seed):
    rng = np.random.default_rng(seed)
    n = 25
    d = boundary_like(rng, n, p)
    rt, vt = d.copy(), np.eye(n, dtype=np.int64)
    low = np.asarray(python.reduce_mod_p(rt, vt, p))
    # R = D V over Z/p, with V unit upper triangular
    assert np.array_equal((d.T @ vt.T) % p, rt.T % p)
    assert np.array_equal(np.tril(vt.T, -1) % p, np.zeros((n, n)))
    assert all(vt[j, j] == 1 for j in range(n))
    # pivots are unique and match the lowest nonzero of each column
    piv = [int(x) for x in low if x >= 0]
    assert len(piv) == len(set(piv))
    for j in range(n):
        nz = np.flatnonzero(rt[j])
        assert (nz[-1] if nz.size else -1) == low[j]
    if compiled is not None:
        rc, vc = d.copy(), np.eye(n, dtype=np.int64)
        lc = np.asarray(compiled.reduce_mod_p(rc, vc, p))
        assert np.array_equal(lc, low) and np.array_equal(rc, rt) and np.array_equal(vc, vt)


def test_backend_flag():
    assert _kernels.BACKEND in ("compiled", "python")
    assert (_kernels.BACKEND == "compiled") == (compiled is not None)


def test_pure_python_fallback_gives_same_index():
    code = (
        "import json, weakconley as w\n"
        "from weakconley.fields import Field\n"
        "f = w.doubling_map()\n"
        "n = w.parse_set('[17/64, 27/64] u [37/64, 47/64]', f.grid)\n"
        "r = w.analyze(f, n, Field(3)).report.to_json()['degrees']\n"
        "print(json.dumps([w.BACKEND, r]))\n"
    )
    env = dict(os.environ, WEAKCONLEY_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    backend, degrees = json.loads(out.stdout)
    assert backend == "python"
    import weakconley as w
    from weakconley.fields import Field

    f = w.doubling_map()
    n = w.parse_set("[17/64, 27/64] u [37/64, 47/64]", f.grid)
    assert degrees == w.analyze(f, n, Field(3)).report.to_json()["degrees"]
