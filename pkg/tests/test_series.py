"""Truncated series, the inverse square root, determinants, Pfaffians."""

import math
from fractions import Fraction

import numpy as np
import pytest

from su2sph.polyfock import Polynomial, poly_mul, poly_pow, poly_sub
from su2sph.series import (
    PolyMatrix,
    TruncatedSeries,
    det_permutation_expansion,
    det_series,
    mat_mul,
    pfaffian,
    poly_det,
    series_add,
    series_inv_sqrt,
    series_mul,
)


def var_series(i, arity, cutoff):
    return TruncatedSeries({tuple(1 if j == i else 0 for j in range(arity)): 1},
                           arity, cutoff)


def one_series(arity, cutoff):
    return TruncatedSeries.one(arity, cutoff)


def test_series_mul_identity():
    a = TruncatedSeries({(1, 0): 2, (0, 2): -3}, 2, 4)
    assert series_mul(a, one_series(2, 4)) == a


def test_series_mul_truncates():
    x = var_series(0, 1, 2)
    one = one_series(1, 2)
    prod = series_mul(series_add(one, x), series_add(one, TruncatedSeries(
        {(1,): -1}, 1, 2)))
    assert prod == TruncatedSeries({(0,): 1, (2,): -1}, 1, 2)


def test_series_mul_geometric_inverse():
    # (1 - u - v - w) * sum_k (u + v + w)^k = 1 through the cutoff
    n = 6
    lin = Polynomial({(1, 0, 0): 1, (0, 1, 0): 1, (0, 0, 1): 1}, 3)
    geo = Polynomial.zero(3)
    for k in range(n + 1):
        geo = geo + poly_pow(lin, k)
    factor = TruncatedSeries.from_polynomial(
        Polynomial.constant(1, 3) - lin, n)
    prod = series_mul(factor, TruncatedSeries.from_polynomial(geo, n))
    assert prod == one_series(3, n)


def test_series_mismatch_errors():
    a = one_series(2, 3)
    with pytest.raises(ValueError):
        series_mul(a, one_series(3, 3))
    with pytest.raises(ValueError):
        series_mul(a, one_series(2, 4))


def test_inv_sqrt_of_one():
    assert series_inv_sqrt(one_series(3, 5)) == one_series(3, 5)


def test_inv_sqrt_binomial_oracle():
    # (1 - 2x)^(-1/2) has x^k coefficient C(2k, k) / 2^k
    n = 8
    a = TruncatedSeries({(0,): 1, (1,): -2}, 1, n)
    s = series_inv_sqrt(a)
    for k in range(n + 1):
        want = Fraction(math.comb(2 * k, k), 2 ** k)
        assert Fraction(s.coefficient((k,))) == want
    assert Fraction(s.coefficient((2,))) == Fraction(3, 2)


def test_inv_sqrt_of_quartic_geometric():
    # ((1-u-v-w)^4)^(-1/2) = (1-u-v-w)^(-2), whose coefficients are
    # (a+b+g+1)!/(a! b! g!); this quartic is the generating kernel at the
    # identity coordinates
    n = 6
    lin = Polynomial({(1, 0, 0): -1, (0, 1, 0): -1, (0, 0, 1): -1}, 3)
    base = Polynomial.constant(1, 3) + lin
    s = series_inv_sqrt(TruncatedSeries.from_polynomial(poly_pow(base, 4), n))
    count = 0
    for (a, b, g), coeff in s.terms.items():
        want = Fraction(math.factorial(a + b + g + 1),
                        math.factorial(a) * math.factorial(b) * math.factorial(g))
        assert Fraction(coeff) == want
        count += 1
    assert count == 84  # every index through degree 6 is present


def test_inv_sqrt_of_square_is_geometric_inverse():
    # the square root of the square inverts once: ((1-x)^2)^(-1/2) = (1-x)^(-1)
    n = 5
    base = Polynomial({(0,): 1, (1,): -1}, 1)
    s = series_inv_sqrt(TruncatedSeries.from_polynomial(poly_mul(base, base), n))
    for k in range(n + 1):
        assert Fraction(s.coefficient((k,))) == 1


def test_inv_sqrt_requires_unit_constant():
    with pytest.raises(ValueError):
        series_inv_sqrt(TruncatedSeries({(0,): 2}, 1, 3))


def test_inv_sqrt_square_property():
    rng = np.random.default_rng(0)
    for _ in range(5):
        terms = {(0, 0): 1}
        for _ in range(4):
            idx = (int(rng.integers(0, 3)), int(rng.integers(0, 3)))
            if idx == (0, 0):
                continue
            terms[idx] = Fraction(int(rng.integers(-4, 5)), 3)
        a = TruncatedSeries(terms, 2, 6)
        s = series_inv_sqrt(a)
        assert series_mul(series_mul(s, s), a) == one_series(2, 6)


def test_inv_sqrt_float_mode():
    a = TruncatedSeries({(0,): 1.0, (1,): 0.3}, 1, 10)
    s = series_inv_sqrt(a)
    prod = series_mul(series_mul(s, s), a)
    assert abs(prod.coefficient((0,)) - 1) < 1e-12
    for k in range(1, 11):
        assert abs(prod.coefficient((k,))) < 1e-12


def test_truncation_consistency():
    terms = {(0, 0): 1, (1, 0): Fraction(1, 2), (0, 2): -2}
    high = series_inv_sqrt(TruncatedSeries(terms, 2, 8))
    low = series_inv_sqrt(TruncatedSeries(terms, 2, 4))
    assert high.truncate(4) == low


def test_poly_det_examples():
    eye = PolyMatrix.identity(3, 1)
    assert poly_det(eye) == Polynomial.constant(1, 1)

    t = Polynomial.variable(0, 1)
    one = Polynomial.constant(1, 1)
    m = PolyMatrix([[one, t], [t, one]])
    assert poly_det(m) == Polynomial({(0,): 1, (2,): -1}, 1)


def test_poly_det_matches_permutation_oracle():
    rng = np.random.default_rng(1)
    for n in (2, 3, 4):
        entries = [[Polynomial(
            {(int(rng.integers(0, 2)), int(rng.integers(0, 2))):
             int(rng.integers(-3, 4))}, 2)
            for _ in range(n)] for _ in range(n)]
        m = PolyMatrix(entries)
        assert poly_det(m) == det_permutation_expansion(m)


def test_poly_det_multiplicative():
    rng = np.random.default_rng(2)
    for _ in range(5):
        def rand_mat():
            return PolyMatrix([[Polynomial(
                {(int(rng.integers(0, 2)),): int(rng.integers(-2, 3))}, 1)
                for _ in range(3)] for _ in range(3)])
        a, b = rand_mat(), rand_mat()
        assert poly_det(mat_mul(a, b)) == poly_mul(poly_det(a), poly_det(b))


def _l2_block_matrix(var_index, arity):
    """4x4 block matrix of one pair variable, as in the two-factor series."""
    t = Polynomial.variable(var_index, arity)
    zero = Polynomial.zero(arity)
    return PolyMatrix([
        [zero, zero, zero, t],
        [zero, zero, -t, zero],
        [zero, -t, zero, zero],
        [t, zero, zero, zero]])


def test_det_two_factor_block_is_quartic():
    # det(1 - T T') = (1 - t t')^4 for the single-pair block matrices
    t_mat = _l2_block_matrix(0, 2)
    tp_mat = _l2_block_matrix(1, 2)
    prod = mat_mul(t_mat, tp_mat)
    eye = PolyMatrix.identity(4, 2)
    m = PolyMatrix([[poly_sub(eye.entries[i][j], prod.entries[i][j])
                     for j in range(4)] for i in range(4)])
    got = poly_det(m)
    base = Polynomial({(0, 0): 1, (1, 1): -1}, 2)
    assert got == poly_pow(base, 4)


def test_det_series_matches_exact_det():
    rng = np.random.default_rng(3)
    entries = [[Polynomial(
        {(int(rng.integers(0, 2)), int(rng.integers(0, 2))):
         Fraction(int(rng.integers(-3, 4)))}, 2)
        for _ in range(3)] for _ in range(3)]
    m = PolyMatrix(entries)
    exact = poly_det(m)
    cut = det_series(m, 3)
    for idx, c in cut.terms.items():
        assert exact.coefficient(idx) == c
    for idx, c in exact.terms.items():
        if sum(idx) <= 3:
            assert cut.coefficient(idx) == c


def test_pfaffian_two_by_two():
    a = Polynomial.variable(0, 1)
    zero = Polynomial.zero(1)
    m = PolyMatrix([[zero, a], [-a, zero]])
    assert pfaffian(m) == a


def test_pfaffian_four_by_four():
    # upper entries (a, b, c, d, e, f) -> Pfaffian a f - b e + c d
    arity = 6
    vs = [Polynomial.variable(i, arity) for i in range(6)]
    zero = Polynomial.zero(arity)
    a, b, c, d, e, f = vs
    m = [[zero, a, b, c],
         [-a, zero, d, e],
         [-b, -d, zero, f],
         [-c, -e, -f, zero]]
    pf = pfaffian(PolyMatrix(m))
    want = poly_mul(a, f) + (-1) * poly_mul(b, e) + poly_mul(c, d)
    assert pf == want


def test_pfaffian_zero_matrix():
    zero = Polynomial.zero(1)
    m = PolyMatrix([[zero] * 4 for _ in range(4)])
    assert pfaffian(m).is_zero()


def test_pfaffian_square_is_determinant():
    rng = np.random.default_rng(4)
    for n in (2, 4, 6):
        entries = [[Polynomial.zero(2) for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                p = Polynomial(
                    {(int(rng.integers(0, 2)), int(rng.integers(0, 2))):
                     int(rng.integers(-2, 3))}, 2)
                entries[i][j] = p
                entries[j][i] = -1 * p
        m = PolyMatrix(entries)
        pf = pfaffian(m)
        assert poly_mul(pf, pf) == poly_det(m)


def test_pfaffian_canonical_normalization():
    zero = Polynomial.zero(1)
    one = Polynomial.constant(1, 1)
    j2 = [[zero, one], [-1 * one, zero]]
    m = PolyMatrix([[j2[i % 2][j % 2] if i // 2 == j // 2 else zero
                     for j in range(4)] for i in range(4)])
    assert pfaffian(m) == one


def test_pfaffian_rejects_bad_input():
    zero = Polynomial.zero(1)
    one = Polynomial.constant(1, 1)
    with pytest.raises(ValueError):
        pfaffian(PolyMatrix([[zero, one, zero]] * 3))
    with pytest.raises(ValueError):
        pfaffian(PolyMatrix([[zero, one], [one, zero]]))
