"""Pure-Python/numpy versions of the hot kernels (reference and fallback)."""

import numpy as np


def trim_forward(indptr, indices, n):
    """Greatest set of nodes each of which has a successor inside the set.

    ``indptr``/``indices`` describe successor lists in CSR layout.  Returns a
    uint8 array, 1 for surviving nodes.
    """
    indptr = np.asarray(indptr, dtype=np.int64)
    indices = np.asarray(indices, dtype=np.int64)
    alive = np.ones(n, dtype=np.uint8)
    count = np.diff(indptr).astype(np.int64)
    # predecessor lists, to decrement counts when a node dies
    order = np.argsort(indices, kind="stable")
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
    pred_ptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(pred_ptr, indices + 1, 1)
    pred_ptr = np.cumsum(pred_ptr)
    preds = src[order]
    stack = [i for i in range(n) if count[i] == 0]
    for i in stack:
        alive[i] = 0
    while stack:
        v = stack.pop()
        for u in preds[pred_ptr[v]:pred_ptr[v + 1]]:
            if alive[u]:
                count[u] -= 1
                if count[u] == 0:
                    alive[u] = 0
                    stack.append(u)
    return alive


def reduce_mod_p(Rt, Vt, p):
    """In-place column reduction over Z/p.

    ``Rt[j]`` is column j of the boundary matrix (rows = cells), ``Vt[j]`` the
    column of the recording matrix.  Returns ``low`` (-1 for zero columns).
    Entries must already lie in ``[0, p)``.
    """
    ncols, nrows = Rt.shape
    low = np.full(ncols, -1, dtype=np.int64)
    pivot_col = np.full(nrows, -1, dtype=np.int64)
    for j in range(ncols):
        row = Rt[j]
        while True:
            nz = np.flatnonzero(row)
            if nz.size == 0:
                break
            l = nz[-1]
            i = pivot_col[l]
            if i < 0:
                low[j] = l
                pivot_col[l] = j
                break
            c = int(row[l]) * pow(int(Rt[i, l]), p - 2, p) % p
            Rt[j] = (row - c * Rt[i]) % p
            Vt[j] = (Vt[j] - c * Vt[i]) % p
            row = Rt[j]
    return low
