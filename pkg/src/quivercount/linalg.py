"""Exact linear algebra over :mod:`quivercount.fields`.

Over the rationals the reduced row echelon form is computed modulo a large
prime by the kernel, lifted by rational reconstruction and then certified
against the input: if every input row lies in the span of the lifted rows, the
lift is the true rational RREF (rank over Q can only exceed rank mod p).
Failed certification falls back to fraction-exact Gauss-Jordan.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Sequence

from . import kernels
from .fields import FiniteField, RationalField

Matrix = list  # list of rows

_PRIMES = (2147483629, 2147483587, 2147483579)


def _rational_reconstruct(a: int, m: int) -> Fraction | None:
    """Fraction n/d with |n|, d <= sqrt(m/2) and n = a*d mod m, if one exists."""
    bound = isqrt(m // 2)
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 > bound:
        qq = r0 // r1
        r0, r1 = r1, r0 - qq * r1
        s0, s1 = s1, s0 - qq * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if s1 < 0:
        r1, s1 = -r1, -s1
    if gcd(r1, s1) != 1:
        return None
    return Fraction(r1, s1)


def _integral_rows(rows: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    out = []
    for row in rows:
        den = 1
        for x in row:
            if x.denominator != 1:
                den = den * x.denominator // gcd(den, x.denominator)
        out.append([int(x * den) for x in row])
    return out


def _rref_fractions(rows: Sequence[Sequence[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        s = m[r][c]
        if s != 1:
            m[r] = [x / s for x in m[r]]
        row = m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y if y else x for x, y in zip(m[i], row)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def _certify(rows_int: list[list[int]], rref: list[list[Fraction]], pivots: list[int]) -> bool:
    for row in rows_int:
        residual = [Fraction(x) for x in row]
        for i, c in enumerate(pivots):
            f = residual[c]
            if f:
                for j, y in enumerate(rref[i]):
                    if y:
                        residual[j] -= f * y
        if any(residual):
            return False
    return True


def _rref_rational(rows: Sequence[Sequence[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    rows_int = [r for r in _integral_rows(rows) if any(r)]
    if not rows_int:
        return [], []
    for p in _PRIMES:
        red, pivots = kernels.rref_mod_p([[x % p for x in r] for r in rows_int], ncols, p)
        lifted = []
        ok = True
        for row in red:
            out = []
            for x in row:
                if x == 0:
                    out.append(Fraction(0))
                    continue
                f = _rational_reconstruct(x, p)
                if f is None:
                    ok = False
                    break
                out.append(f)
            if not ok:
                break
            lifted.append(out)
        if ok and _certify(rows_int, lifted, pivots):
            return lifted, pivots
    return _rref_fractions([[Fraction(x) for x in r] for r in rows_int], ncols)


def rref(field, rows: Sequence[Sequence], ncols: int) -> tuple[list[list], list[int]]:
    """Reduced row echelon form: (nonzero rows, pivot columns)."""
    if isinstance(field, RationalField):
        return _rref_rational(rows, ncols)
    if field.degree == 1:
        return kernels.rref_mod_p([list(r) for r in rows], ncols, field.characteristic)
    return kernels.rref_table(
        [list(r) for r in rows], ncols, field.order,
        field.add_table, field.mul_table, field.neg_table, field.inv_table,
    )


def rank(field, rows: Sequence[Sequence], ncols: int) -> int:
    return len(rref(field, rows, ncols)[1])


def nullspace(field, rows: Sequence[Sequence], ncols: int) -> list[list]:
    """Basis of {x : A x = 0}, one vector per free column, free entry = 1."""
    red, pivots = rref(field, rows, ncols)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [field.zero] * ncols
        v[free] = field.one
        for i, c in enumerate(pivots):
            x = red[i][free]
            if x:
                v[c] = field.neg(x)
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# small dense matrix helpers (matrices are lists of row lists)


def zeros(field, n: int, m: int) -> Matrix:
    return [[field.zero] * m for _ in range(n)]


def identity(field, n: int) -> Matrix:
    out = zeros(field, n, n)
    for i in range(n):
        out[i][i] = field.one
    return out


def matmul(field, a: Matrix, b: Matrix, inner: int | None = None) -> Matrix:
    n = len(a)
    k = len(b) if inner is None else inner
    m = len(b[0]) if b else 0
    if isinstance(field, RationalField):
        return [[sum((a[i][t] * b[t][j] for t in range(k) if a[i][t]), Fraction(0)) for j in range(m)] for i in range(n)]
    if n == 0 or m == 0:
        return [[field.zero] * m for _ in range(n)]
    if k == 0:
        return zeros(field, n, m)
    if field.degree == 1:
        return kernels.matmul_mod_p(a, b, field.characteristic)
    return kernels.matmul_table(a, b, field.order, field.add_table, field.mul_table)


def matadd(field, a: Matrix, b: Matrix) -> Matrix:
    return [[field.add(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def matsub(field, a: Matrix, b: Matrix) -> Matrix:
    return [[field.sub(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scalar_mul(field, c, a: Matrix) -> Matrix:
    return [[field.mul(c, x) for x in row] for row in a]


def is_zero(a: Matrix) -> bool:
    return not any(x for row in a for x in row)


def trace(field, a: Matrix):
    t = field.zero
    for i in range(len(a)):
        t = field.add(t, a[i][i])
    return t


def is_nilpotent(field, a: Matrix) -> bool:
    n = len(a)
    if n == 0:
        return True
    p = a
    # a^n == 0 iff nilpotent; square repeatedly past n
    k = 1
    while k < n:
        p = matmul(field, p, p)
        k *= 2
    return is_zero(p)


def is_invertible(field, a: Matrix) -> bool:
    n = len(a)
    return n == 0 or rank(field, a, n) == n


def inverse(field, a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(row) + [field.one if i == j else field.zero for j in range(n)] for i, row in enumerate(a)]
    red, pivots = rref(field, aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red[:n]]


def vec_combination(field, coeffs: Sequence, vectors: Sequence[Sequence]) -> list:
    length = len(vectors[0]) if vectors else 0
    out = [field.zero] * length
    for c, v in zip(coeffs, vectors):
        if c:
            for j, x in enumerate(v):
                if x:
                    out[j] = field.add(out[j], field.mul(c, x))
    return out


def in_span(field, vectors: Sequence[Sequence], v: Sequence, ncols: int) -> bool:
    if not vectors:
        return not any(v)
    return rank(field, list(vectors) + [list(v)], ncols) == rank(field, vectors, ncols)


def is_finite(field) -> bool:
    return isinstance(field, FiniteField)
