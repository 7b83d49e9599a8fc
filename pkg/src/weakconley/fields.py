"""Coefficient fields Q and Z/p, and dense linear algebra over them.

Matrices are lists of rows.  Elements of Q are Fractions, elements of Z/p
are ints in ``[0, p)``.
"""

from __future__ import annotations

import re
from fractions import Fraction


class NotAField(ValueError):
    pass


class SingularMatrix(ArithmeticError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Field:
    """Q when ``p`` is None, otherwise the prime field Z/p."""

    def __init__(self, p: int | None = None):
        if p is not None and not _is_prime(p):
            raise NotAField(f"Z/{p} is not a field")
        self.p = p

    @property
    def name(self) -> str:
        return "Q" if self.p is None else f"Z/{self.p}"

    @property
    def spec(self) -> str:
        return "q" if self.p is None else f"zp:{self.p}"

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("field", self.p))

    def __repr__(self):
        return f"Field({self.name})"

    def __call__(self, x):
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return 1 / Fraction(x)
        return pow(int(x), -1, self.p)

    def norm(self, x):
        return x if self.p is None else x % self.p

    def to_json(self, x):
        """Exact rendering: ``"3/4"`` over Q, an int over Z/p."""
        if self.p is None:
            x = Fraction(x)
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return int(x)


def parse_coeffs(text: str) -> Field | str:
    """``q`` -> Q, ``zp:P`` -> Z/P, ``z`` -> the string ``"z"`` (integers)."""
    s = text.strip().lower()
    if s in ("q", "rational", "rationals"):
        return Field()
    if s == "z":
        return "z"
    m = re.fullmatch(r"zp:(\d+)", s)
    if m:
        return Field(int(m.group(1)))
    raise ValueError(f"unknown coefficients {text!r}; use q or zp:P")


# ---------------------------------------------------------------------------
# dense matrices
# ---------------------------------------------------------------------------

def zeros(r: int, c: int, k: Field) -> list:
    z = k(0)
    return [[z] * c for _ in range(r)]


def identity(n: int, k: Field) -> list:
    m = zeros(n, n, k)
    for i in range(n):
        m[i][i] = k(1)
    return m


def matmul(a: list, b: list, k: Field) -> list:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = zeros(len(a), cols, k)
    for i, row in enumerate(a):
        o = out[i]
        for t in range(inner):
            x = row[t]
            if x == 0:
                continue
            bt = b[t]
            for j in range(cols):
                if bt[j] != 0:
                    o[j] = k.norm(o[j] + x * bt[j])
    return out


def transpose(a: list) -> list:
    return [list(r) for r in zip(*a)] if a and a[0] else [[] for _ in range(len(a[0]) if a else 0)]


def _rref(a: list, k: Field):
    """Reduced row echelon form; returns (matrix, pivot columns)."""
    m = [list(r) for r in a]
    rows = len(m)
    cols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        s = k.inv(m[r][c])
        m[r] = [k.norm(x * s) for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                t = m[i][c]
                m[i] = [k.norm(x - t * y) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a: list, k: Field) -> int:
    return len(_rref(a, k)[1])


def inverse(a: list, k: Field) -> list:
    n = len(a)
    if any(len(r) != n for r in a):
        raise SingularMatrix("matrix is not square")
    aug = [list(r) + e for r, e in zip(a, identity(n, k))]
    m, piv = _rref(aug, k)
    if piv[:n] != list(range(n)):
        raise SingularMatrix("matrix is not invertible")
    return [r[n:] for r in m]


def column_basis(a: list, k: Field) -> list:
    """Columns of ``a`` (as a matrix) forming a basis of its column space."""
    if not a:
        return []
    _, piv = _rref(a, k)
    return [[row[j] for j in piv] for row in a]


def solve(b: list, c: list, k: Field) -> list:
    """X with ``B X = C`` for B of full column rank (raises if inconsistent)."""
    n = len(b[0]) if b and b[0] else 0
    m = len(c[0]) if c and c[0] else 0
    aug = [list(rb) + list(rc) for rb, rc in zip(b, c)]
    red, piv = _rref(aug, k)
    if piv[:n] != list(range(n)) or any(p >= n for p in piv):
        raise SingularMatrix("system has no unique solution")
    return [red[i][n:n + m] for i in range(n)]


def charpoly(a: list, k: Field) -> list:
    """Coefficients ``[c0, ..., cn]`` (``cn = 1``) of ``det(x I - A)``.

    Reduces A to upper Hessenberg form by elimination similarities, then runs
    the standard three-term recurrence.  Works over any field.
    """
    n = len(a)
    h = [list(r) for r in a]
    for j in range(n - 2):
        piv = next((i for i in range(j + 1, n) if h[i][j] != 0), None)
        if piv is None:
            continue
        if piv != j + 1:
            h[j + 1], h[piv] = h[piv], h[j + 1]
            for r in h:
                r[j + 1], r[piv] = r[piv], r[j + 1]
        s = k.inv(h[j + 1][j])
        for i in range(j + 2, n):
            t = k.norm(h[i][j] * s)
            if t == 0:
                continue
            h[i] = [k.norm(x - t * y) for x, y in zip(h[i], h[j + 1])]
            for r in h:
                r[j + 1] = k.norm(r[j + 1] + t * r[i])
    # p[m] = charpoly of the leading m x m block, coefficient lists
    p = [[k(1)]]
    for m in range(1, n + 1):
        # x * p[m-1] - h[m-1][m-1] * p[m-1]
        prev = p[m - 1]
        cur = [k(0)] + list(prev)
        for i, c in enumerate(prev):
            cur[i] = k.norm(cur[i] - h[m - 1][m - 1] * c)
        prod = k(1)
        for i in range(1, m):
            prod = k.norm(prod * h[m - i][m - i - 1])
            coef = k.norm(prod * h[m - i - 1][m - 1])
            if coef == 0:
                continue
            for t, c in enumerate(p[m - i - 1]):
                cur[t] = k.norm(cur[t] - coef * c)
        p.append(cur)
    return p[n]


def format_poly(coeffs: list, k: Field, var: str = "λ") -> str:
    """``[-1, 0, 1]`` -> ``"λ^2 - 1"``."""
    terms = []
    n = len(coeffs) - 1
    for deg in range(n, -1, -1):
        c = coeffs[deg]
        if c == 0:
            continue
        if k.p is not None and c > k.p // 2 and k.p != 2:
            c = c - k.p
        neg = c < 0
        mag = -c if neg else c
        body = "" if (mag == 1 and deg > 0) else str(k.to_json(mag) if k.p is None else mag)
        mono = "" if deg == 0 else (var if deg == 1 else f"{var}^{deg}")
        if body and mono:
            body = f"{body}{mono}" if k.p is not None or Fraction(mag).denominator == 1 else f"({body}){mono}"
        else:
            body = body or mono
        terms.append(("-" if neg else "+", body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for s, b in terms[1:]:
        out += f" {s} {b}"
    return out


__all__ = [
    "Field",
    "NotAField",
    "SingularMatrix",
    "charpoly",
    "column_basis",
    "format_poly",
    "identity",
    "inverse",
    "matmul",
    "parse_coeffs",
    "rank",
    "solve",
    "transpose",
    "zeros",
]
