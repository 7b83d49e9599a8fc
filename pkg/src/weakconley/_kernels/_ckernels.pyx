# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels; same contracts as ``_pykernels``."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def trim_forward(cnp.int64_t[::1] indptr, cnp.int64_t[::1] indices, Py_ssize_t n):
    cdef Py_ssize_t i, v, u, k, top = 0, m = indices.shape[0]
    alive_arr = np.ones(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] alive = alive_arr
    cdef cnp.int64_t[::1] count = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] pred_ptr = np.zeros(n + 1, dtype=np.int64)
    cdef cnp.int64_t[::1] fill = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] preds = np.empty(m, dtype=np.int64)
    cdef cnp.int64_t[::1] stack = np.empty(n, dtype=np.int64)
    for i in range(n):
        count[i] = indptr[i + 1] - indptr[i]
        for k in range(indptr[i], indptr[i + 1]):
            pred_ptr[indices[k] + 1] += 1
    for i in range(n):
        pred_ptr[i + 1] += pred_ptr[i]
    for i in range(n):
        for k in range(indptr[i], indptr[i + 1]):
            v = indices[k]
            preds[pred_ptr[v] + fill[v]] = i
            fill[v] += 1
    for i in range(n):
        if count[i] == 0:
            alive[i] = 0
            stack[top] = i
            top += 1
    while top > 0:
        top -= 1
        v = stack[top]
        for k in range(pred_ptr[v], pred_ptr[v + 1]):
            u = preds[k]
            if alive[u]:
                count[u] -= 1
                if count[u] == 0:
                    alive[u] = 0
                    stack[top] = u
                    top += 1
    return alive_arr


cdef inline cnp.int64_t _inv_mod(cnp.int64_t a, cnp.int64_t p) nogil:
    cdef cnp.int64_t result = 1, e = p - 2
    a %= p
    while e > 0:
        if e & 1:
            result = result * a % p
        a = a * a % p
        e >>= 1
    return result


def reduce_mod_p(cnp.int64_t[:, ::1] Rt, cnp.int64_t[:, ::1] Vt, cnp.int64_t p):
    cdef Py_ssize_t ncols = Rt.shape[0], nrows = Rt.shape[1]
    cdef Py_ssize_t j, i, l, t
    cdef cnp.int64_t c
    low_arr = np.full(ncols, -1, dtype=np.int64)
    cdef cnp.int64_t[::1] low = low_arr
    cdef cnp.int64_t[::1] pivot_col = np.full(nrows, -1, dtype=np.int64)
    with nogil:
        for j in range(ncols):
            while True:
                l = nrows - 1
                while l >= 0 and Rt[j, l] == 0:
                    l -= 1
                if l < 0:
                    break
                i = pivot_col[l]
                if i < 0:
                    low[j] = l
                    pivot_col[l] = j
                    break
                c = Rt[j, l] * _inv_mod(Rt[i, l], p) % p
                for t in range(l + 1):
                    if Rt[i, t] != 0:
                        Rt[j, t] = (Rt[j, t] - c * Rt[i, t]) % p
                        if Rt[j, t] < 0:
                            Rt[j, t] += p
                for t in range(ncols):
                    if Vt[i, t] != 0:
                        Vt[j, t] = (Vt[j, t] - c * Vt[i, t]) % p
                        if Vt[j, t] < 0:
                            Vt[j, t] += p
    return low_arr
