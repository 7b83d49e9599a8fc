"""Smith normal form of integer matrices, with unimodular transforms."""

from __future__ import annotations


def _eye(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_form(a: list):
    """Return ``(S, U, V)`` with ``U A V = S`` diagonal, ``U``, ``V`` unimodular
    and ``S[i][i]`` dividing ``S[i+1][i+1]`` (all non-negative)."""
    m = len(a)
    n = len(a[0]) if m else 0
    s = [list(map(int, r)) for r in a]
    u, v = _eye(m), _eye(n)

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in s:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, c):  # row dst += c * row src
        s[dst] = [x + c * y for x, y in zip(s[dst], s[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, c):
        for r in s:
            r[dst] += c * r[src]
        for r in v:
            r[dst] += c * r[src]

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero magnitude in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if s[i][j] and (best is None or abs(s[i][j]) < abs(s[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        done = False
        while not done:
            done = True
            for i in range(t + 1, m):
                if s[i][t]:
                    q = s[i][t] // s[t][t]
                    add_row(i, t, -q)
                    if s[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if s[t][j]:
                    q = s[t][j] // s[t][t]
                    add_col(j, t, -q)
                    if s[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                # divisibility: the pivot must divide the whole remaining block
                for i in range(t + 1, m):
                    bad = next((j for j in range(t + 1, n) if s[i][j] % s[t][t]), None)
                    if bad is not None:
                        add_row(t, i, 1)
                        done = False
                        break
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return s, u, v


def invariant_factors(a: list) -> list:
    s, _, _ = smith_form(a)
    return [s[i][i] for i in range(min(len(s), len(s[0]) if s else 0)) if s[i][i]]


def integer_homology(boundaries: dict, sizes: dict) -> dict:
    """Betti numbers and torsion of a chain complex over Z.

    ``boundaries[k]`` is the matrix of ``d_k : C_k -> C_{k-1}`` (rows index
    (k-1)-cells), ``sizes[k]`` the rank of ``C_k``.
    """
    ranks, tors = {}, {}
    for k, mat in boundaries.items():
        f = invariant_factors(mat) if mat and mat[0] else []
        ranks[k] = len(f)
        tors[k - 1] = [x for x in f if x > 1]
    out = {}
    for k in sorted(sizes):
        betti = sizes[k] - ranks.get(k, 0) - ranks.get(k + 1, 0)
        out[k] = {"betti": betti, "torsion": tors.get(k, [])}
    return out


__all__ = ["integer_homology", "invariant_factors", "smith_form"]
