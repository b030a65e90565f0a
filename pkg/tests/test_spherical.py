"""Spherical values, generating functions, Gaussian pairing, determinants."""

import math
from fractions import Fraction

import numpy as np
import pytest

from su2sph.invariants import ExponentTriple, xi_three
from su2sph.polyfock import RationalComplex, fock_inner
from su2sph.spectral import spectral_coords, triple_from_coords
from su2sph.spherical import (
    SphericalValue,
    gaussian_inner,
    gaussian_vector_series,
    genfun_general,
    genfun_three,
    genfun_three_batch,
    norm_xi,
    pair_order,
    phi_table_batch,
    spherical_general,
    spherical_three,
    spherical_three_table,
    verify_prop42,
)
from su2sph.su2 import haar_sample, rational_haarish, su2_identity


def _fact_sq(a, b, g):
    return (math.factorial(a) * math.factorial(b) * math.factorial(g)) ** 2


def test_norm_xi_examples():
    assert norm_xi(ExponentTriple(0, 0, 0)) == 1
    assert norm_xi(ExponentTriple(1, 0, 0)) == 2
    assert norm_xi(ExponentTriple(1, 1, 0)) == 6
    e = ExponentTriple(2, 1, 1)
    xi = xi_three(e)
    assert fock_inner(xi, xi) == norm_xi(e)


def test_spherical_three_trivial_vector():
    rng = np.random.default_rng(0)
    A, B, C = haar_sample(rng), haar_sample(rng), haar_sample(rng)
    val = spherical_three(ExponentTriple(0, 0, 0), A, B, C)
    assert abs(complex(val) - 1) < 1e-14


def test_spherical_three_identity_point():
    e = su2_identity()
    for triple in [(1, 0, 0), (2, 1, 0), (1, 1, 1)]:
        et = ExponentTriple(*triple)
        val = spherical_three(et, e, e, e)
        assert val == norm_xi(et)


def test_spherical_three_linear_coefficient_is_trace_coordinate():
    # the (1,0,0) value equals 2p at any group point
    rng = np.random.default_rng(1)
    for _ in range(5):
        A, B, C = haar_sample(rng), haar_sample(rng), haar_sample(rng)
        c = spectral_coords(A, B, C)
        val = complex(spherical_three(ExponentTriple(1, 0, 0), A, B, C))
        assert abs(val - 2 * c.p) < 1e-12
        val = complex(spherical_three(ExponentTriple(0, 1, 0), A, B, C))
        assert abs(val - 2 * c.q) < 1e-12
        val = complex(spherical_three(ExponentTriple(0, 0, 1), A, B, C))
        assert abs(val - 2 * c.r) < 1e-12


def test_spherical_three_against_operator_matrices():
    # independent route: materialize the tensor-product operator in the
    # normalized monomial basis and pair coordinate vectors
    from itertools import product as iproduct

    from su2sph.su2 import rep_matrix

    rng = np.random.default_rng(21)
    e = ExponentTriple(1, 1, 0)
    n, m, k = e.degrees()
    A, B, C = haar_sample(rng), haar_sample(rng), haar_sample(rng)
    big = np.kron(np.kron(rep_matrix(A, n), rep_matrix(B, m)),
                  rep_matrix(C, k))

    xi = xi_three(e)
    vec = np.zeros((n + 1) * (m + 1) * (k + 1), dtype=complex)
    basis = list(iproduct(range(n + 1), range(m + 1), range(k + 1)))
    for (i, j, l), pos in zip(basis, range(len(basis))):
        idx = (i, n - i, j, m - j, l, k - l)
        coeff = xi.coefficient(idx)
        if coeff:
            # normalized basis vector carries the square root of the norm
            vec[pos] = coeff * math.sqrt(
                math.factorial(i) * math.factorial(n - i)
                * math.factorial(j) * math.factorial(m - j)
                * math.factorial(l) * math.factorial(k - l))
    # fock pairing conjugates its second slot, so <U xi, xi> = vdot(xi, U xi)
    want = np.vdot(vec, big @ vec)
    got = complex(spherical_three(e, A, B, C))
    assert abs(got - want) < 1e-9


def test_spherical_three_is_real():
    rng = np.random.default_rng(2)
    for _ in range(5):
        A, B, C = haar_sample(rng), haar_sample(rng), haar_sample(rng)
        val = complex(spherical_three(ExponentTriple(2, 1, 1), A, B, C))
        assert abs(val.imag) < 1e-9


def test_spherical_three_biinvariance():
    rng = np.random.default_rng(3)
    A, B, C = haar_sample(rng), haar_sample(rng), haar_sample(rng)
    u, v = haar_sample(rng), haar_sample(rng)
    from su2sph.su2 import su2_mul

    moved = [su2_mul(su2_mul(u, g), v) for g in (A, B, C)]
    e = ExponentTriple(1, 2, 0)
    lhs = complex(spherical_three(e, A, B, C))
    rhs = complex(spherical_three(e, *moved))
    assert abs(lhs - rhs) <= 1e-8 * max(1.0, abs(rhs))


def test_spherical_three_depends_only_on_coords():
    # same (p, q, r), different residual phase: same value
    e = ExponentTriple(2, 1, 1)
    p, q, r = 0.3, -0.2, 0.4
    t1 = triple_from_coords(p, q, r, theta=0.3)
    t2 = triple_from_coords(p, q, r, theta=2.1)
    v1 = complex(spherical_three(e, *t1))
    v2 = complex(spherical_three(e, *t2))
    assert abs(v1 - v2) <= 1e-8 * max(1.0, abs(v1))


def test_genfun_three_constant_term_and_identity():
    s = genfun_three(0.1, 0.2, 0.3, 3)
    assert s.coefficient((0, 0, 0)) == 1
    s = genfun_three(Fraction(1), Fraction(1), Fraction(1), 5)
    for idx, coeff in s.terms.items():
        a, b, g = idx
        want = Fraction(math.factorial(a + b + g + 1),
                        math.factorial(a) * math.factorial(b)
                        * math.factorial(g))
        assert Fraction(coeff) == want


def test_genfun_three_warns_outside_body():
    with pytest.warns(UserWarning):
        genfun_three(1.0, 1.0, -1.0, 2)


def test_genfun_three_matches_brute_force():
    rng = np.random.default_rng(4)
    for _ in range(3):
        A, B, C = haar_sample(rng), haar_sample(rng), haar_sample(rng)
        c = spectral_coords(A, B, C)
        s = genfun_three(c.p, c.q, c.r, 4)
        table = spherical_three_table(A, B, C, 4)
        for (a, b, g), brute in table.items():
            lhs = complex(s.coefficient((a, b, g))) * _fact_sq(a, b, g)
            assert abs(lhs - complex(brute)) <= 1e-8 * max(1.0, abs(complex(brute)))


def test_genfun_three_exact_rational_point():
    rng = np.random.default_rng(5)
    A, B, C = (rational_haarish(rng) for _ in range(3))
    c = spectral_coords(A, B, C)
    s = genfun_three(c.p, c.q, c.r, 3)
    table = spherical_three_table(A, B, C, 3)
    for (a, b, g), brute in table.items():
        lhs = Fraction(s.coefficient((a, b, g))) * _fact_sq(a, b, g)
        rc = brute if isinstance(brute, RationalComplex) else RationalComplex(brute)
        assert rc.im == 0 and rc.re == lhs


def test_genfun_batch_matches_scalar():
    rng = np.random.default_rng(6)
    p = rng.uniform(-0.6, 0.6, size=8)
    q = rng.uniform(-0.6, 0.6, size=8)
    r = rng.uniform(-0.6, 0.6, size=8)
    batch = genfun_three_batch(p, q, r, 3)
    for i in range(8):
        s = genfun_three(float(p[i]), float(q[i]), float(r[i]), 3)
        for idx, arr in batch.items():
            assert abs(arr[i] - s.coefficient(idx)) < 1e-12


def test_phi_table_batch_scales_by_factorials():
    p = np.array([0.2])
    q = np.array([0.1])
    r = np.array([-0.3])
    table = phi_table_batch(p, q, r, 2)
    coeffs = genfun_three_batch(p, q, r, 2)
    for idx in table:
        a, b, g = idx
        assert abs(table[idx][0] - coeffs[idx][0] * _fact_sq(a, b, g)) < 1e-12


def test_spherical_general_examples():
    rng = np.random.default_rng(7)
    As = [haar_sample(rng), haar_sample(rng)]
    zero2 = [[0, 0], [0, 0]]
    assert abs(complex(spherical_general(zero2, zero2, As)) - 1) < 1e-14

    # identity pair: the two-factor norm (n+1)! n!
    ident = [su2_identity(), su2_identity()]
    for n in range(4):
        mat = [[0, n], [n, 0]]
        val = spherical_general(mat, mat, ident)
        assert val == math.factorial(n + 1) * math.factorial(n)


def test_spherical_general_row_sum_mismatch():
    rng = np.random.default_rng(8)
    As = [haar_sample(rng), haar_sample(rng)]
    with pytest.raises(ValueError):
        spherical_general([[0, 1], [1, 0]], [[0, 2], [2, 0]], As)


def test_spherical_general_reduces_to_three_factor():
    rng = np.random.default_rng(9)
    As = [haar_sample(rng) for _ in range(3)]
    for (a, b, g) in [(1, 0, 0), (1, 1, 0), (2, 1, 1)]:
        mat = [[0, a, b], [a, 0, g], [b, g, 0]]
        lhs = complex(spherical_general(mat, mat, As))
        rhs = complex(spherical_three(ExponentTriple(a, b, g), *As))
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))


def test_genfun_general_two_factors_identity():
    s = genfun_general([su2_identity(), su2_identity()], 6)
    # (1 - t t')^(-2): diagonal coefficients n+1, nothing else
    for (a, b), coeff in s.terms.items():
        if a == b:
            assert abs(complex(coeff) - (a + 1)) < 1e-12
        else:
            assert abs(complex(coeff)) < 1e-12


def test_genfun_general_matches_spherical_general():
    rng = np.random.default_rng(10)
    As = [haar_sample(rng), haar_sample(rng)]
    s = genfun_general(As, 4)
    for n in range(3):
        mat = [[0, n], [n, 0]]
        val = complex(spherical_general(mat, mat, As))
        coeff = complex(s.coefficient((n, n))) * math.factorial(n) ** 2
        assert abs(coeff - val) <= 1e-9 * max(1.0, abs(val))


def test_genfun_general_three_factor_diagonal():
    rng = np.random.default_rng(11)
    As = [haar_sample(rng) for _ in range(3)]
    s = genfun_general(As, 4)
    c = spectral_coords(*As)
    three = genfun_three(c.p, c.q, c.r, 2)
    assert pair_order(3) == [(0, 1), (0, 2), (1, 2)]
    for a in range(3):
        for b in range(3 - a):
            for g in range(3 - a - b):
                got = complex(s.coefficient((a, b, g, a, b, g)))
                want = complex(three.coefficient((a, b, g)))
                assert abs(got - want) <= 1e-9 * max(1.0, abs(want))


def test_genfun_general_reduction_exact_at_rational_points():
    rng = np.random.default_rng(20)
    As = [rational_haarish(rng) for _ in range(3)]
    s = genfun_general(As, 4)
    c = spectral_coords(*As)
    three = genfun_three(c.p, c.q, c.r, 2)
    for a in range(3):
        for b in range(3 - a):
            for g in range(3 - a - b):
                got = s.coefficient((a, b, g, a, b, g))
                want = three.coefficient((a, b, g))
                rc = got if isinstance(got, RationalComplex) \
                    else RationalComplex(got)
                assert rc.im == 0 and rc.re == Fraction(want)


def test_verify_prop42_both_sizes():
    assert verify_prop42(2, 6).equal
    assert verify_prop42(3, 6).equal
    printed = verify_prop42(3, 4, convention="printed")
    assert not printed.equal
    assert printed.first_difference is not None
    with pytest.raises(ValueError):
        verify_prop42(2, 4, convention="printed")
    with pytest.raises(ValueError):
        verify_prop42(1, 4)


def test_gaussian_inner_examples():
    assert abs(gaussian_inner(np.zeros((2, 2)), np.zeros((2, 2))) - 1) < 1e-15
    a, b = 0.3 + 0.1j, -0.2 + 0.4j
    got = gaussian_inner([[a]], [[b]])
    want = (1 - a * np.conj(b)) ** -0.5
    assert abs(got - want) < 1e-14


def test_gaussian_inner_validation():
    with pytest.raises(ValueError):
        gaussian_inner(np.eye(2), np.zeros((2, 2)))       # norm 1
    with pytest.raises(ValueError):
        gaussian_inner(np.array([[0.0, 0.5], [0.0, 0.0]]), np.zeros((2, 2)))


def test_gaussian_inner_matches_series():
    rng = np.random.default_rng(12)
    for n in (2, 3):
        m1 = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        m1 = (m1 + m1.T) / 2
        m1 *= 0.45 / np.linalg.norm(m1, 2)
        m2 = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        m2 = (m2 + m2.T) / 2
        m2 *= 0.45 / np.linalg.norm(m2, 2)
        direct = gaussian_inner(m1, m2)
        series = fock_inner(gaussian_vector_series(m1, 20),
                            gaussian_vector_series(m2, 20))
        assert abs(direct - complex(series)) < 1e-7


def test_spherical_value_identity_invariant():
    e = su2_identity()
    et = ExponentTriple(1, 1, 0)
    val = SphericalValue(value=complex(spherical_three(et, e, e, e)),
                         indices=et.as_tuple(), point={"kind": "identity"})
    assert val.value.imag == 0 and val.value.real > 0
    doc = val.to_dict()
    assert doc["re"] == 6.0 and doc["indices"] == [1, 1, 0]
