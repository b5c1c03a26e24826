# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled row reduction over small finite fields (see _kernels_py.py)."""

from libc.stdlib cimport malloc, free


cdef long long _inv_mod(long long a, long long p):
    cdef long long t = 0, newt = 1, r = p, newr = a, qq, tmp
    while newr != 0:
        qq = r // newr
        tmp = t - qq * newt
        t = newt
        newt = tmp
        tmp = r - qq * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


def rref_mod_p(rows, int ncols, long long p):
    cdef int nrows = len(rows)
    cdef long long *m = <long long *> malloc(max(nrows * ncols, 1) * sizeof(long long))
    cdef int i, j, c, r = 0, piv
    cdef long long x, f, s
    if m == NULL:
        raise MemoryError()
    pivots = []
    try:
        for i in range(nrows):
            row = rows[i]
            for j in range(ncols):
                x = row[j] % p
                m[i * ncols + j] = x
        for c in range(ncols):
            if r == nrows:
                break
            piv = -1
            for i in range(r, nrows):
                if m[i * ncols + c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(ncols):
                    x = m[r * ncols + j]
                    m[r * ncols + j] = m[piv * ncols + j]
                    m[piv * ncols + j] = x
            s = _inv_mod(m[r * ncols + c], p)
            if s != 1:
                for j in range(c, ncols):
                    m[r * ncols + j] = m[r * ncols + j] * s % p
            for i in range(nrows):
                if i != r:
                    f = m[i * ncols + c]
                    if f != 0:
                        for j in range(c, ncols):
                            if m[r * ncols + j] != 0:
                                x = (m[i * ncols + j] - f * m[r * ncols + j]) % p
                                if x < 0:
                                    x += p
                                m[i * ncols + j] = x
            pivots.append(c)
            r += 1
        out = [[m[i * ncols + j] for j in range(ncols)] for i in range(r)]
    finally:
        free(m)
    return out, pivots


def rref_table(rows, int ncols, int q, add, mul, neg, inv):
    cdef int nrows = len(rows)
    cdef int qq = q * q
    cdef int *m = <int *> malloc(max(nrows * ncols, 1) * sizeof(int))
    cdef int *tadd = <int *> malloc(qq * sizeof(int))
    cdef int *tmul = <int *> malloc(qq * sizeof(int))
    cdef int *tneg = <int *> malloc(q * sizeof(int))
    cdef int *tinv = <int *> malloc(q * sizeof(int))
    cdef int i, j, c, r = 0, piv, x, f, s, nf
    if m == NULL or tadd == NULL or tmul == NULL or tneg == NULL or tinv == NULL:
        free(m); free(tadd); free(tmul); free(tneg); free(tinv)
        raise MemoryError()
    pivots = []
    try:
        for i in range(qq):
            tadd[i] = add[i]
            tmul[i] = mul[i]
        for i in range(q):
            tneg[i] = neg[i]
            tinv[i] = inv[i]
        for i in range(nrows):
            row = rows[i]
            for j in range(ncols):
                m[i * ncols + j] = row[j]
        for c in range(ncols):
            if r == nrows:
                break
            piv = -1
            for i in range(r, nrows):
                if m[i * ncols + c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(ncols):
                    x = m[r * ncols + j]
                    m[r * ncols + j] = m[piv * ncols + j]
                    m[piv * ncols + j] = x
            s = tinv[m[r * ncols + c]]
            if s != 1:
                for j in range(c, ncols):
                    m[r * ncols + j] = tmul[s * q + m[r * ncols + j]]
            for i in range(nrows):
                if i != r:
                    f = m[i * ncols + c]
                    if f != 0:
                        nf = tneg[f] * q
                        for j in range(c, ncols):
                            if m[r * ncols + j] != 0:
                                m[i * ncols + j] = tadd[m[i * ncols + j] * q + tmul[nf + m[r * ncols + j]]]
            pivots.append(c)
            r += 1
        out = [[m[i * ncols + j] for j in range(ncols)] for i in range(r)]
    finally:
        free(m); free(tadd); free(tmul); free(tneg); free(tinv)
    return out, pivots


def matmul_mod_p(a, b, long long p):
    cdef int n = len(a), k = len(b), m = len(b[0]) if k else 0
    cdef int i, j, t
    cdef long long x, acc
    cdef long long *A = <long long *> malloc(max(n * k, 1) * sizeof(long long))
    cdef long long *B = <long long *> malloc(max(k * m, 1) * sizeof(long long))
    if A == NULL or B == NULL:
        free(A); free(B)
        raise MemoryError()
    try:
        for i in range(n):
            row = a[i]
            for t in range(k):
                A[i * k + t] = row[t]
        for t in range(k):
            row = b[t]
            for j in range(m):
                B[t * m + j] = row[j]
        out = []
        for i in range(n):
            orow = []
            for j in range(m):
                acc = 0
                for t in range(k):
                    x = A[i * k + t]
                    if x != 0:
                        acc = (acc + x * B[t * m + j]) % p
                orow.append(acc)
            out.append(orow)
    finally:
        free(A); free(B)
    return out


def matmul_table(a, b, int q, add, mul):
    cdef int n = len(a), k = len(b), m = len(b[0]) if k else 0
    cdef int i, j, t, x, y, acc, qq = q * q
    cdef int *A = <int *> malloc(max(n * k, 1) * sizeof(int))
    cdef int *B = <int *> malloc(max(k * m, 1) * sizeof(int))
    cdef int *tadd = <int *> malloc(qq * sizeof(int))
    cdef int *tmul = <int *> malloc(qq * sizeof(int))
    if A == NULL or B == NULL or tadd == NULL or tmul == NULL:
        free(A); free(B); free(tadd); free(tmul)
        raise MemoryError()
    try:
        for i in range(qq):
            tadd[i] = add[i]
            tmul[i] = mul[i]
        for i in range(n):
            row = a[i]
            for t in range(k):
                A[i * k + t] = row[t]
        for t in range(k):
            row = b[t]
            for j in range(m):
                B[t * m + j] = row[j]
        out = []
        for i in range(n):
            orow = []
            for j in range(m):
                acc = 0
                for t in range(k):
                    x = A[i * k + t]
                    y = B[t * m + j]
                    if x != 0 and y != 0:
                        acc = tadd[acc * q + tmul[x * q + y]]
                orow.append(acc)
            out.append(orow)
    finally:
        free(A); free(B); free(tadd); free(tmul)
    return out
