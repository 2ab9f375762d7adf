"""Exact linear algebra over prime fields and symmetric-power embeddings.

Vectors over F_p are plain tuples of ints in ``[0, p)``; matrices are int64
numpy arrays.  Homogeneous degree-``k`` polynomials in ``n`` variables are
coordinatised by the monomial basis returned from :func:`monomial_basis`,
which is graded-lexicographic (for a fixed degree: descending exponent of
``x1``, then ``x2``, ...).
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial, prod

import numpy as np

from ._kernels import monomial_eval, rref_modp


class FieldError(ValueError):
    """Malformed field data (composite modulus, mismatched moduli, ...)."""


@lru_cache(maxsize=None)
def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise FieldError(f"modulus {p!r} is not prime")
    return int(p)


@dataclass(frozen=True)
class FpScalar:
    """An element of F_p."""

    p: int
    value: int

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "value", int(self.value) % self.p)

    def _coerce(self, other):
        if isinstance(other, FpScalar):
            if other.p != self.p:
                raise FieldError(f"mixed moduli {self.p} and {other.p}")
            return other.value
        return int(other)

    def __add__(self, other):
        return FpScalar(self.p, self.value + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return FpScalar(self.p, self.value - self._coerce(other))

    def __mul__(self, other):
        return FpScalar(self.p, self.value * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return FpScalar(self.p, -self.value)

    def __pow__(self, e: int):
        return FpScalar(self.p, pow(self.value, e, self.p))

    def inverse(self) -> FpScalar:
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return FpScalar(self.p, pow(self.value, self.p - 2, self.p))

    def __int__(self):
        return self.value


@dataclass(frozen=True)
class FpVector:
    """A vector in F_p^n."""

    p: int
    coords: tuple[int, ...]

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "coords", tuple(int(c) % self.p for c in self.coords))

    @classmethod
    def zero(cls, p: int, n: int) -> FpVector:
        return cls(p, (0,) * n)

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def _check(self, other: FpVector):
        if other.p != self.p or len(other) != len(self):
            raise FieldError("vectors live in different spaces")

    def __add__(self, other: FpVector) -> FpVector:
        self._check(other)
        return FpVector(self.p, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: FpVector) -> FpVector:
        self._check(other)
        return FpVector(self.p, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> FpVector:
        return FpVector(self.p, tuple(-a for a in self.coords))

    def scale(self, a: int) -> FpVector:
        return FpVector(self.p, tuple(a * c for c in self.coords))

    def dot(self, other: FpVector) -> int:
        self._check(other)
        return sum(a * b for a, b in zip(self.coords, other.coords)) % self.p

    def is_zero(self) -> bool:
        return not any(self.coords)


@dataclass(frozen=True)
class SymPowerVector:
    """A homogeneous degree-``k`` polynomial, coordinates on :func:`monomial_basis`."""

    p: int
    n: int
    k: int
    coords: tuple[int, ...]

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "coords", tuple(int(c) % self.p for c in self.coords))
        if len(self.coords) != comb(self.n + self.k - 1, self.k):
            raise FieldError("coordinate count does not match C(n+k-1, k)")

    def dot(self, other: SymPowerVector) -> int:
        if (other.p, other.n, other.k) != (self.p, self.n, self.k):
            raise FieldError("symmetric powers of different spaces")
        return sum(a * b for a, b in zip(self.coords, other.coords)) % self.p

    def coefficient(self, exponents) -> int:
        return self.coords[monomial_index(self.n, self.k)[tuple(exponents)]]

    def as_array(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.int64)


def _coords(v) -> tuple[int, ...]:
    if isinstance(v, (FpVector, SymPowerVector)):
        return v.coords
    return tuple(int(c) for c in v)


# --------------------------------------------------------------------------
# monomials and symmetric powers
# --------------------------------------------------------------------------

def _compositions(n: int, k: int):
    """Exponent vectors of length n summing to k, descending lexicographic."""
    if n == 1:
        yield (k,)
        return
    for first in range(k, -1, -1):
        for rest in _compositions(n - 1, k - first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def monomial_basis(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """Graded-lex exponent vectors of the degree-``k`` monomials in ``n`` variables.

    >>> monomial_basis(2, 2)
    ((2, 0), (1, 1), (0, 2))
    """
    if n < 1 or k < 0:
        raise ValueError(f"need n >= 1 and k >= 0, got n={n}, k={k}")
    return tuple(_compositions(n, k))


@lru_cache(maxsize=None)
def monomial_index(n: int, k: int) -> dict[tuple[int, ...], int]:
    return {e: i for i, e in enumerate(monomial_basis(n, k))}


@lru_cache(maxsize=None)
def _exponent_matrix(n: int, k: int) -> np.ndarray:
    return np.array(monomial_basis(n, k), dtype=np.int64).reshape(-1, n)


@lru_cache(maxsize=None)
def _multinomials(n: int, k: int, p: int) -> np.ndarray:
    fk = factorial(k)
    return np.array(
        [(fk // prod(factorial(e) for e in exps)) % p for exps in monomial_basis(n, k)],
        dtype=np.int64,
    )


def sym_dimension(n: int, k: int) -> int:
    return comb(n + k - 1, k)


def star_matrix(ys, p: int, k: int) -> np.ndarray:
    """Rows ``u*`` (monomial evaluations) for every vector in ``ys``."""
    y = np.mod(np.array(ys, dtype=np.int64, ndmin=2), p)
    return monomial_eval(y, _exponent_matrix(y.shape[1], k), p)


def sym_power_matrix(ys, p: int, k: int) -> np.ndarray:
    """Rows ``y^(k)`` for every vector in ``ys``.

    The coefficient of ``x^e`` in ``(sum_j a_j x_j)^k`` is the multinomial
    ``k!/prod(e_j!)`` times ``prod a_j^e_j``.
    """
    y = np.array(ys, dtype=np.int64, ndmin=2)
    return (star_matrix(y, p, k) * _multinomials(y.shape[1], k, p)[None, :]) % p


def sym_power(y, k: int, p: int | None = None) -> SymPowerVector:
    """``y^(k)``: the coefficients of ``(sum_j y_j x_j)^k`` over F_p."""
    if isinstance(y, FpVector):
        p = y.p
    if p is None:
        raise FieldError("modulus required for a plain coordinate sequence")
    if k < 0:
        raise ValueError("degree must be non-negative")
    c = _coords(y)
    row = sym_power_matrix([c], p, k)[0]
    return SymPowerVector(p, len(c), k, tuple(int(v) for v in row))


def star_vector(u, k: int, p: int | None = None) -> SymPowerVector:
    """``u*``: the coordinate at monomial ``x^e`` is ``prod u_i^e_i``."""
    if isinstance(u, FpVector):
        p = u.p
    if p is None:
        raise FieldError("modulus required for a plain coordinate sequence")
    if k < 0:
        raise ValueError("degree must be non-negative")
    c = _coords(u)
    row = star_matrix([c], p, k)[0]
    return SymPowerVector(p, len(c), k, tuple(int(v) for v in row))


# --------------------------------------------------------------------------
# linear systems
# --------------------------------------------------------------------------

class SolutionStatus(enum.Enum):
    UNIQUE = "unique"
    MULTIPLE = "multiple"
    INCONSISTENT = "inconsistent"


@dataclass(frozen=True)
class Solution:
    status: SolutionStatus
    vector: tuple[int, ...] | None = None
    rank: int = 0

    @property
    def unique(self) -> bool:
        return self.status is SolutionStatus.UNIQUE


@dataclass(frozen=True)
class FpLinearSystem:
    """``rows . U = rhs`` over F_p."""

    p: int
    rows: tuple[tuple[int, ...], ...]
    rhs: tuple[int, ...]
    dimension: int

    def __post_init__(self):
        check_prime(self.p)
        rows = tuple(_coords(r) for r in self.rows)
        if any(len(r) != self.dimension for r in rows):
            raise FieldError("rows do not share the system dimension")
        if len(rows) != len(self.rhs):
            raise FieldError("|rhs| must equal the number of rows")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "rhs", tuple(int(b) % self.p for b in self.rhs))

    @classmethod
    def from_arrays(cls, p: int, a, b) -> FpLinearSystem:
        a = np.array(a, dtype=np.int64, ndmin=2)
        return cls(p, tuple(map(tuple, a.tolist())), tuple(np.ravel(b).tolist()), a.shape[1])


def rref(a, p: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row echelon form over F_p (backed by the active kernel)."""
    return rref_modp(np.asarray(a, dtype=np.int64), p)


def rank(a, p: int) -> int:
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return 0
    return len(rref_modp(a, p)[1])


def solve_matrix(a, b, p: int) -> Solution:
    """Solve ``a @ x = b`` over F_p, classifying the solution set."""
    a = np.asarray(a, dtype=np.int64)
    if a.ndim != 2:
        a = a.reshape(-1, 0) if a.size == 0 else np.atleast_2d(a)
    dim = a.shape[1]
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    if a.shape[0] == 0:
        if dim == 0:
            return Solution(SolutionStatus.UNIQUE, (), 0)
        return Solution(SolutionStatus.MULTIPLE, None, 0)
    r, pivots = rref_modp(np.hstack([a, b]), p)
    if pivots and pivots[-1] == dim:
        return Solution(SolutionStatus.INCONSISTENT, None, len(pivots) - 1)
    if len(pivots) < dim:
        return Solution(SolutionStatus.MULTIPLE, None, len(pivots))
    x = tuple(int(v) for v in r[:dim, dim])
    return Solution(SolutionStatus.UNIQUE, x, dim)


def gauss_solve(system: FpLinearSystem) -> Solution:
    """Classify and, when unique, return the solution of ``system``."""
    a = np.array(system.rows, dtype=np.int64).reshape(len(system.rows), system.dimension)
    return solve_matrix(a, system.rhs, system.p)


def nullspace(a, p: int) -> np.ndarray:
    """Basis (as rows) of ``{x : a @ x = 0}`` over F_p."""
    a = np.asarray(a, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    n = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    r, pivots = rref_modp(a, p)
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, pc in enumerate(pivots):
            basis[i, pc] = (-r[row, f]) % p
    return basis


def row_space_basis(a, p: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return np.zeros((0, a.shape[-1] if a.ndim == 2 else 0), dtype=np.int64)
    r, pivots = rref_modp(a, p)
    return r[: len(pivots)].copy()


def in_span(basis_rref, v, p: int) -> bool:
    """Membership of ``v`` in the row space of an rref ``basis_rref``."""
    b = np.asarray(basis_rref, dtype=np.int64)
    v = np.mod(np.asarray(v, dtype=np.int64), p)
    if b.size == 0:
        return not v.any()
    return rank(np.vstack([b, v]), p) == b.shape[0]


def determinant(a, p: int) -> int:
    """Determinant of a square matrix over F_p by elimination."""
    m = np.mod(np.array(a, dtype=np.int64), p)
    n = m.shape[0]
    det = 1
    for col in range(n):
        nz = np.flatnonzero(m[col:, col])
        if nz.size == 0:
            return 0
        sel = col + nz[0]
        if sel != col:
            m[[col, sel]] = m[[sel, col]]
            det = -det
        piv = int(m[col, col])
        det = det * piv % p
        inv = pow(piv, p - 2, p)
        for row in range(col + 1, n):
            f = m[row, col] * inv % p
            if f:
                m[row] = (m[row] - f * m[col]) % p
    return det % p


# --------------------------------------------------------------------------
# brute-force verifiers
# --------------------------------------------------------------------------

def all_vectors(p: int, n: int) -> np.ndarray:
    """Every vector of F_p^n, in lexicographic order."""
    return np.array(list(itertools.product(range(p), repeat=n)), dtype=np.int64).reshape(-1, n)


def check_line_lemma(p: int, n: int, z, y) -> bool:
    """Whether ``y^(p-1)`` lies in the span of ``(z + a y)^(p-1)``, ``0 <= a < p``."""
    check_prime(p)
    z = np.array(_coords(z), dtype=np.int64)
    y = np.array(_coords(y), dtype=np.int64)
    if len(z) != n or len(y) != n:
        raise FieldError("vectors must have length n")
    line = np.array([(z + a * y) % p for a in range(p)])
    span = sym_power_matrix(line, p, p - 1)
    target = sym_power_matrix(y[None, :], p, p - 1)
    return rank(np.vstack([span, target]), p) == rank(span, p)


def line_lemma_witness(p: int, z, y) -> tuple[int, ...] | None:
    """Coefficients ``c_a`` with ``sum_a c_a (z + a y)^(p-1) = y^(p-1)``, if any."""
    z = np.array(_coords(z), dtype=np.int64)
    y = np.array(_coords(y), dtype=np.int64)
    line = np.array([(z + a * y) % p for a in range(p)])
    span = sym_power_matrix(line, p, p - 1)
    target = sym_power_matrix(y[None, :], p, p - 1)[0]
    r, pivots = rref_modp(np.hstack([span.T, target[:, None]]), p)
    if pivots and pivots[-1] == p:
        return None
    coeffs = [0] * p
    for row, pc in enumerate(pivots):
        coeffs[pc] = int(r[row, p])
    return tuple(coeffs)


def line_lemma_matrix(p: int) -> np.ndarray:
    """Coordinates of ``(z + a y)^(p-1)`` on the basis ``z^(k) y^(p-1-k)``.

    Row ``a``, column ``k`` holds ``C(p-1, k) a^(p-1-k)``.
    """
    return np.array(
        [[comb(p - 1, k) * pow(a, p - 1 - k, p) % p for k in range(p)] for a in range(p)],
        dtype=np.int64,
    )


def line_lemma_determinant_formula(p: int) -> int:
    """``prod_k C(p-1, k)`` times the Vandermonde determinant of ``0..p-1``, mod p.

    The sign accounts for :func:`line_lemma_matrix` listing powers of ``a``
    in decreasing order (a reversal of ``p`` columns).
    """
    binom = prod(comb(p - 1, k) for k in range(p))
    vander = prod(j - i for i in range(p) for j in range(i + 1, p))
    sign = -1 if (p // 2) % 2 else 1
    return sign * binom * vander % p


def check_span(p: int, n: int) -> int:
    """Rank of ``{y^(p-1) : y in F_p^n}``."""
    check_prime(p)
    return rank(sym_power_matrix(all_vectors(p, n), p, p - 1), p)


class FractionLemmaError(ValueError):
    """The subspace handed to the fraction check is the whole space."""


def _membership(p: int, n: int, w_rows) -> np.ndarray:
    """Boolean mask over :func:`all_vectors` of ``y`` with ``y^(p-1)`` in ``W``."""
    dim = sym_dimension(n, p - 1)
    w = np.asarray(w_rows, dtype=np.int64).reshape(-1, dim)
    basis = row_space_basis(w, p) if w.size else np.zeros((0, dim), dtype=np.int64)
    if basis.shape[0] == dim:
        raise FractionLemmaError("W must be a proper subspace")
    ys = all_vectors(p, n)
    sym = sym_power_matrix(ys, p, p - 1)
    if basis.shape[0] == 0:
        return ~sym.any(axis=1)
    r0 = basis.shape[0]
    mask = np.empty(len(ys), dtype=bool)
    for i, row in enumerate(sym):
        mask[i] = rank(np.vstack([basis, row]), p) == r0
    return mask


def fraction_ratios(p: int, n: int, u, member_mask) -> dict[int, float]:
    ys = all_vectors(p, n)
    dots = ys @ np.array(_coords(u), dtype=np.int64) % p
    out = {}
    for k in range(1, p):
        vk = dots == k
        out[k] = float(member_mask[vk].sum()) / float(vk.sum())
    return out


def check_fraction_lemma(p: int, n: int, u, w_rows) -> bool:
    """Whether ``|R_k| / |V_k| <= (p-1)/p`` for every ``k = 1..p-1``.

    ``w_rows`` spans ``W``; raises :class:`FractionLemmaError` when ``W`` is
    the full symmetric power.
    """
    check_prime(p)
    if not any(_coords(u)):
        raise ValueError("u must be nonzero")
    mask = _membership(p, n, w_rows)
    bound = (p - 1) / p
    return all(r <= bound + 1e-12 for r in fraction_ratios(p, n, u, mask).values())


def random_proper_subspace(p: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """Spanning rows of a random proper subspace of the degree ``p-1`` symmetric power.

    Half of the draws are spans of random ``y^(p-1)`` (the shape that arises in
    the solver), the other half spans of arbitrary random vectors.
    """
    dim = sym_dimension(n, p - 1)
    while True:
        d = int(rng.integers(0, dim))
        if d == 0:
            return np.zeros((0, dim), dtype=np.int64)
        if rng.random() < 0.5:
            ys = rng.integers(0, p, size=(d, n))
            rows = sym_power_matrix(ys, p, p - 1)
        else:
            rows = rng.integers(0, p, size=(d, dim))
        if rank(rows, p) < dim:
            return rows
