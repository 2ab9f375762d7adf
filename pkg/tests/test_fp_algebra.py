import itertools
from collections import Counter
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitcoset import fp_algebra as fp


def expand_power(y, k, p):
    """(sum_j y_j x_j)^k by multiplying out all n^k index words."""
    n = len(y)
    coeffs = Counter()
    for word in itertools.product(range(n), repeat=k):
        exps = [0] * n
        c = 1
        for j in word:
            exps[j] += 1
            c *= y[j]
        coeffs[tuple(exps)] += c
    return tuple(coeffs[e] % p for e in fp.monomial_basis(n, k))


primes = st.sampled_from([2, 3, 5, 7])


def test_monomial_basis_small_cases():
    assert fp.monomial_basis(2, 2) == ((2, 0), (1, 1), (0, 2))
    assert fp.monomial_basis(1, 0) == ((0,),)
    assert len(fp.monomial_basis(3, 2)) == 6


@pytest.mark.parametrize("n,k", [(1, 4), (2, 3), (3, 2), (4, 4)])
def test_monomial_basis_matches_enumeration(n, k):
    brute = [e for e in itertools.product(range(k + 1), repeat=n) if sum(e) == k]
    assert sorted(fp.monomial_basis(n, k)) == sorted(brute)
    assert fp.sym_dimension(n, k) == comb(n + k - 1, k)


def test_sym_power_examples():
    assert fp.sym_power((1, 1), 2, 3).coords == (1, 2, 1)
    assert fp.sym_power((1, 2), 2, 3).coords == (1, 1, 1)
    assert fp.sym_power((0, 0, 0), 4, 5).coords == (0,) * 15


def test_star_vector_examples():
    assert fp.star_vector((1, 2), 2, 3).coords == (1, 2, 1)
    assert set(fp.star_vector((1, 1, 1), 4, 5).coords) == {1}


def test_identity_example():
    lhs = fp.sym_power((1, 2), 2, 3).dot(fp.star_vector((1, 2), 2, 3))
    assert lhs == 1 == (1 * 1 + 2 * 2) ** 2 % 3


@settings(max_examples=60, deadline=None)
@given(p=primes, data=st.data())
def test_sym_power_matches_expansion(p, data):
    n = data.draw(st.integers(1, 3))
    k = data.draw(st.integers(0, p - 1))
    y = data.draw(st.lists(st.integers(0, p - 1), min_size=n, max_size=n))
    assert fp.sym_power(y, k, p).coords == expand_power(y, k, p)


@settings(max_examples=60, deadline=None)
@given(p=primes, data=st.data())
def test_identity_property(p, data):
    n = data.draw(st.integers(1, 4))
    y = data.draw(st.lists(st.integers(0, p - 1), min_size=n, max_size=n))
    u = data.draw(st.lists(st.integers(0, p - 1), min_size=n, max_size=n))
    lhs = fp.sym_power(y, p - 1, p).dot(fp.star_vector(u, p - 1, p))
    assert lhs == pow(sum(a * b for a, b in zip(y, u)) % p, p - 1, p)


def test_solve_examples():
    s = fp.solve_matrix(np.eye(2, dtype=int), [1, 2], 3)
    assert s.status is fp.SolutionStatus.UNIQUE and s.vector == (1, 2)
    assert fp.solve_matrix([[1, 1]], [1], 3).status is fp.SolutionStatus.MULTIPLE
    assert fp.solve_matrix([[1, 0], [1, 0]], [1, 2], 3).status is fp.SolutionStatus.INCONSISTENT


@settings(max_examples=80, deadline=None)
@given(p=primes, data=st.data())
def test_solve_against_enumeration(p, data):
    rows = data.draw(st.integers(1, 3))
    cols = data.draw(st.integers(1, 3))
    a = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=rows * cols,
                                    max_size=rows * cols))).reshape(rows, cols)
    b = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=rows, max_size=rows)))
    sols = [x for x in itertools.product(range(p), repeat=cols)
            if np.array_equal(a @ np.array(x) % p, b % p)]
    got = fp.solve_matrix(a, b, p)
    if not sols:
        assert got.status is fp.SolutionStatus.INCONSISTENT
    elif len(sols) == 1:
        assert got.status is fp.SolutionStatus.UNIQUE and got.vector == sols[0]
    else:
        assert got.status is fp.SolutionStatus.MULTIPLE


def test_rank_and_determinant():
    assert fp.rank([[1, 2], [2, 4]], 3) == 1
    assert fp.determinant([[1, 2], [3, 4]], 5) == (4 - 6) % 5


def test_line_lemma_witness():
    w = fp.line_lemma_witness(3, (0, 1), (1, 0))
    assert w == (2, 2, 2)
    z, y = np.array([0, 1]), np.array([1, 0])
    combo = sum(c * fp.sym_power_matrix([(z + a * y) % 3], 3, 2)[0] for a, c in enumerate(w)) % 3
    assert tuple(combo) == fp.sym_power((1, 0), 2, 3).coords


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_line_lemma_determinant_nonzero(p):
    m = fp.line_lemma_matrix(p)
    det = fp.determinant(m, p)
    assert det != 0
    assert det == fp.line_lemma_determinant_formula(p)


def test_line_lemma_zero_direction():
    assert fp.check_line_lemma(3, 2, (1, 2), (0, 0))


@pytest.mark.parametrize("p,n,expected", [(3, 2, 3), (2, 4, 4), (5, 3, 15)])
def test_span_rank(p, n, expected):
    assert fp.check_span(p, n) == expected


def test_fraction_lemma_examples():
    assert fp.check_fraction_lemma(3, 2, (1, 0), np.zeros((0, 3), dtype=int))
    # span{x2^2}
    assert fp.check_fraction_lemma(3, 2, (1, 0), [[0, 0, 1]])


def test_fraction_lemma_rejects_full_space():
    with pytest.raises(fp.FractionLemmaError):
        fp.check_fraction_lemma(3, 2, (1, 0), np.eye(3, dtype=int))


def test_random_proper_subspace_is_proper():
    rng = np.random.default_rng(1)
    for _ in range(30):
        w = fp.random_proper_subspace(3, 3, rng)
        assert fp.rank(w, 3) < fp.sym_dimension(3, 2) if w.size else True


def test_nonprime_modulus_rejected():
    with pytest.raises(fp.FieldError):
        fp.check_prime(4)
