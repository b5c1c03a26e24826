"""Pure-Python row reduction over small finite fields.

Reference implementation of the routines in ``_kernels.pyx``; selected
automatically when the compiled module is unavailable.
"""

from __future__ import annotations


def rref_mod_p(rows: list[list[int]], ncols: int, p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form over Z/p.  Returns (nonzero rows, pivot columns)."""
    m = [[x % p for x in row] for row in rows]
    pivots: list[int] = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        row = m[r]
        inv = pow(row[c], p - 2, p)
        if inv != 1:
            for j in range(c, ncols):
                row[j] = row[j] * inv % p
        for i in range(nrows):
            if i != r:
                f = m[i][c]
                if f:
                    other = m[i]
                    for j in range(c, ncols):
                        if row[j]:
                            other[j] = (other[j] - f * row[j]) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rref_table(
    rows: list[list[int]],
    ncols: int,
    q: int,
    add: list[int],
    mul: list[int],
    neg: list[int],
    inv: list[int],
) -> tuple[list[list[int]], list[int]]:
    """Same as :func:`rref_mod_p` with field operations given by flat lookup tables.

    Elements are integers in ``range(q)``; ``add[a * q + b]`` is ``a + b``,
    likewise ``mul``; ``neg[a]`` and ``inv[a]`` are unary (``inv[0]`` unused).
    """
    m = [list(row) for row in rows]
    pivots: list[int] = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        row = m[r]
        s = inv[row[c]]
        if s != 1:
            for j in range(c, ncols):
                row[j] = mul[s * q + row[j]]
        for i in range(nrows):
            if i != r:
                f = m[i][c]
                if f:
                    nf = neg[f] * q
                    other = m[i]
                    for j in range(c, ncols):
                        if row[j]:
                            other[j] = add[other[j] * q + mul[nf + row[j]]]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def matmul_mod_p(a: list[list[int]], b: list[list[int]], p: int) -> list[list[int]]:
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    out = []
    for i in range(n):
        ai = a[i]
        row = [0] * m
        for t in range(k):
            x = ai[t]
            if x:
                bt = b[t]
                for j in range(m):
                    row[j] += x * bt[j]
        out.append([v % p for v in row])
    return out


def matmul_table(a: list[list[int]], b: list[list[int]], q: int, add: list[int], mul: list[int]) -> list[list[int]]:
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    out = []
    for i in range(n):
        ai = a[i]
        row = [0] * m
        for t in range(k):
            x = ai[t]
            if x:
                bt = b[t]
                xq = x * q
                for j in range(m):
                    y = bt[j]
                    if y:
                        row[j] = add[row[j] * q + mul[xq + y]]
        out.append(row)
    return out
