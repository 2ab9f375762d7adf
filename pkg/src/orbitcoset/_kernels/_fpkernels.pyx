# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled F_p kernels: Gauss-Jordan reduction and batched monomial evaluation.

Both functions mirror ``_fallback`` exactly; the test-suite checks the two
backends against each other.
"""
import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef inline long long _inv(long long a, long long p):
    # Fermat inverse; p is prime and a is nonzero mod p.
    cdef long long result = 1, base = a % p, e = p - 2
    while e > 0:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


def rref_modp(a, long long p):
    """Reduced row echelon form of ``a`` over F_p.

    Returns ``(r, pivots)`` where ``r`` is a fresh int64 array and ``pivots``
    the tuple of pivot columns, one per nonzero row of ``r``.
    """
    cdef cnp.ndarray[cnp.int64_t, ndim=2] m = np.mod(np.array(a, dtype=np.int64, ndmin=2), p)
    cdef Py_ssize_t nrows = m.shape[0], ncols = m.shape[1]
    cdef Py_ssize_t row = 0, col, i, k, sel
    cdef long long inv, f, tmp
    pivots = []
    for col in range(ncols):
        if row >= nrows:
            break
        sel = -1
        for i in range(row, nrows):
            if m[i, col] != 0:
                sel = i
                break
        if sel < 0:
            continue
        if sel != row:
            for k in range(col, ncols):
                tmp = m[row, k]
                m[row, k] = m[sel, k]
                m[sel, k] = tmp
        inv = _inv(m[row, col], p)
        if inv != 1:
            for k in range(col, ncols):
                m[row, k] = (m[row, k] * inv) % p
        for i in range(nrows):
            if i == row:
                continue
            f = m[i, col]
            if f == 0:
                continue
            for k in range(col, ncols):
                m[i, k] = (m[i, k] - f * m[row, k]) % p
                if m[i, k] < 0:
                    m[i, k] += p
        pivots.append(col)
        row += 1
    return m, tuple(pivots)


def monomial_eval(ys, exps, long long p):
    """``out[r, c] = prod_j ys[r, j] ** exps[c, j] mod p``."""
    cdef cnp.ndarray[cnp.int64_t, ndim=2] y = np.mod(np.array(ys, dtype=np.int64, ndmin=2), p)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] e = np.array(exps, dtype=np.int64, ndmin=2)
    cdef Py_ssize_t nr = y.shape[0], nc = e.shape[0], n = y.shape[1]
    cdef cnp.ndarray[cnp.int64_t, ndim=2] out = np.empty((nr, nc), dtype=np.int64)
    cdef Py_ssize_t r, c, j
    cdef long long acc, base, ex, pw
    if e.shape[1] != n and nc > 0:
        raise ValueError("exponent width does not match vector length")
    for r in range(nr):
        for c in range(nc):
            acc = 1 % p
            for j in range(n):
                ex = e[c, j]
                if ex == 0:
                    continue
                base = y[r, j]
                pw = 1
                while ex > 0:
                    if ex & 1:
                        pw = (pw * base) % p
                    base = (base * base) % p
                    ex >>= 1
                acc = (acc * pw) % p
                if acc == 0:
                    break
            out[r, c] = acc
    return out
