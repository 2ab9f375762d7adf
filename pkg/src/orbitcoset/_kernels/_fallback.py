"""Pure-Python/numpy versions of the compiled kernels.

Semantics are identical to ``_fpkernels.pyx``; only speed differs.
"""
import numpy as np


def rref_modp(a, p):
    """Reduced row echelon form of ``a`` over F_p, returns ``(r, pivots)``."""
    m = np.mod(np.array(a, dtype=np.int64, ndmin=2), p)
    nrows, ncols = m.shape
    pivots = []
    row = 0
    for col in range(ncols):
        if row >= nrows:
            break
        nz = np.flatnonzero(m[row:, col])
        if nz.size == 0:
            continue
        sel = row + nz[0]
        if sel != row:
            m[[row, sel]] = m[[sel, row]]
        inv = pow(int(m[row, col]), p - 2, p)
        m[row] = (m[row] * inv) % p
        factors = m[:, col].copy()
        factors[row] = 0
        hit = np.flatnonzero(factors)
        if hit.size:
            m[hit] = (m[hit] - np.outer(factors[hit], m[row])) % p
        pivots.append(col)
        row += 1
    return m, tuple(pivots)


def monomial_eval(ys, exps, p):
    """``out[r, c] = prod_j ys[r, j] ** exps[c, j] mod p``."""
    y = np.mod(np.array(ys, dtype=np.int64, ndmin=2), p)
    e = np.array(exps, dtype=np.int64, ndmin=2)
    nr, n = y.shape
    nc = e.shape[0]
    if nc and e.shape[1] != n:
        raise ValueError("exponent width does not match vector length")
    out = np.ones((nr, nc), dtype=np.int64) % p
    if nc == 0 or nr == 0:
        return out
    # table[j][v][k] = v**k mod p, exponents are bounded by max(e)
    kmax = int(e.max()) if e.size else 0
    powers = np.ones((p, kmax + 1), dtype=np.int64) % p
    for k in range(1, kmax + 1):
        powers[:, k] = (powers[:, k - 1] * np.arange(p)) % p
    for j in range(n):
        out = (out * powers[y[:, j][:, None], e[:, j][None, :]]) % p
    return out
