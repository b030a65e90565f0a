"""Spherical functions: brute-force pairing and generating functions.

The matrix coefficient of the invariant vector can be computed two ways:
directly, by transforming the expanded vector and pairing in the weighted
monomial basis, or through generating functions, as coefficients of an
inverse-square-root series.  For three factors the series kernel in the
variables (u, v, w) attached to the exponents (alpha, beta, gamma) is

    [1 + 2p(vw-u) + 2q(uw-v) + 2r(uv-w) + u^2+v^2+w^2]^2
        - 16 u v w (1 - p^2 - q^2 - r^2 + 2pqr),

where (p, q, r) classify the group point up to double cosets.  The factor
16 on the correction term is required for the kernel to agree with the
block-determinant evaluation of the Gaussian pairing; dropping it breaks
every coefficient with alpha, beta, gamma all positive (the module's tests
pin this down).  At (p, q, r) = (1, 1, 1) the correction vanishes and the
kernel collapses to (1-u-v-w)^4.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .invariants import (
    ExponentMatrix,
    ExponentTriple,
    cross_pair,
    exponent_matrix,
    row_degrees,
    three_factor_crosses,
    xi_general,
    xi_three,
)
from .polyfock import (
    Polynomial,
    RationalComplex,
    fock_inner,
    poly_mul,
    poly_pow,
    substitute_blocks,
)
from .series import (
    PolyMatrix,
    TruncatedSeries,
    det_series,
    mat_mul,
    mat_sub,
    series_inv_sqrt,
    series_mul,
)
from .su2 import SU2Element


def norm_xi(e: ExponentTriple) -> int:
    """Squared norm of the three-factor invariant vector, exactly.

    Equals (alpha+beta+gamma+1)! * alpha! * beta! * gamma!.
    """
    return (math.factorial(e.total() + 1) * math.factorial(e.alpha)
            * math.factorial(e.beta) * math.factorial(e.gamma))


def _substituted_cross_factors(A: SU2Element, B: SU2Element, C: SU2Element):
    """The three cross quadratics after the group substitution."""
    blocks = [A.matrix(), B.matrix(), C.matrix()]
    return tuple(substitute_blocks(f, blocks) for f in three_factor_crosses())


def spherical_three(e: ExponentTriple, A: SU2Element, B: SU2Element,
                    C: SU2Element):
    """Pairing of the transformed invariant vector against itself.

    Brute force: the vector is expanded as a sparse polynomial, the group
    acts by substitution (applied to the quadratic factors before taking
    powers), and the result is paired in the weighted monomial basis.
    """
    fxy, fyz, fzx = _substituted_cross_factors(A, B, C)
    moved = poly_pow(fxy, e.alpha)
    moved = poly_mul(moved, poly_pow(fyz, e.gamma))
    moved = poly_mul(moved, poly_pow(fzx, e.beta))
    return fock_inner(moved, xi_three(e))


def spherical_three_table(A: SU2Element, B: SU2Element, C: SU2Element,
                          max_total: int) -> dict:
    """All values with alpha+beta+gamma <= max_total at one group point.

    Shares substituted-factor powers across the sweep, which is much
    cheaper than independent calls.
    """
    fxy, fyz, fzx = _substituted_cross_factors(A, B, C)
    pow_xy = [Polynomial.constant(1, 6)]
    pow_yz = [Polynomial.constant(1, 6)]
    pow_zx = [Polynomial.constant(1, 6)]
    for _ in range(max_total):
        pow_xy.append(poly_mul(pow_xy[-1], fxy))
        pow_yz.append(poly_mul(pow_yz[-1], fyz))
        pow_zx.append(poly_mul(pow_zx[-1], fzx))
    out = {}
    for alpha in range(max_total + 1):
        for beta in range(max_total + 1 - alpha):
            base = poly_mul(pow_xy[alpha], pow_zx[beta])
            for gamma in range(max_total + 1 - alpha - beta):
                e = ExponentTriple(alpha, beta, gamma)
                moved = poly_mul(base, pow_yz[gamma])
                out[(alpha, beta, gamma)] = fock_inner(moved, xi_three(e))
    return out


def spherical_general(a: ExponentMatrix, b: ExponentMatrix, As) -> object:
    """Pairing of the transformed l-factor vector Xi[a] against Xi[b].

    The two exponent matrices must induce the same degree in every factor,
    otherwise the vectors live in different spaces.
    """
    a = exponent_matrix(a)
    b = exponent_matrix(b)
    if len(a) != len(b):
        raise ValueError("exponent matrices must have equal size")
    if row_degrees(a) != row_degrees(b):
        raise ValueError("row sums differ: the vectors live in different spaces")
    l = len(a)
    if len(As) != l:
        raise ValueError(f"need {l} group elements, got {len(As)}")
    blocks = [g.matrix() for g in As]
    moved = Polynomial.constant(1, 2 * l)
    for i in range(l):
        for j in range(i + 1, l):
            if a[i][j]:
                factor = substitute_blocks(cross_pair(i, j, l), blocks)
                moved = poly_mul(moved, poly_pow(factor, a[i][j]))
    return fock_inner(moved, xi_general(b))


# --- generating function, three factors ---------------------------------


def gram_det_scalar(p, q, r):
    return 1 - p * p - q * q - r * r + 2 * p * q * r


def _kernel_terms(p, q, r) -> dict:
    """Coefficients of the inverse-square kernel in (u, v, w)."""
    bracket = {
        (0, 0, 0): 1, (1, 0, 0): -2 * p, (0, 1, 0): -2 * q, (0, 0, 1): -2 * r,
        (0, 1, 1): 2 * p, (1, 0, 1): 2 * q, (1, 1, 0): 2 * r,
        (2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1,
    }
    out: dict = {}
    for i1, c1 in bracket.items():
        for i2, c2 in bracket.items():
            key = tuple(x + y for x, y in zip(i1, i2))
            c = c1 * c2
            if key in out:
                out[key] = out[key] + c
            else:
                out[key] = c
    out[(1, 1, 1)] = out.get((1, 1, 1), 0) - 16 * gram_det_scalar(p, q, r)
    return out


def _warn_if_outside(p, q, r):
    try:
        pf, qf, rf = float(p), float(q), float(r)
    except TypeError:
        return
    g = gram_det_scalar(pf, qf, rf)
    if max(abs(pf), abs(qf), abs(rf)) > 1 + 1e-9 or g < -1e-9:
        warnings.warn(f"(p, q, r) = ({pf}, {qf}, {rf}) lies outside the "
                      "admissible body; the series is only formal there",
                      stacklevel=3)


def genfun_three(p, q, r, cutoff: int) -> TruncatedSeries:
    """Series in (u, v, w) whose coefficient of u^a v^b w^c times
    (a! b! c!)^2 is the spherical function at any group point with
    coordinates (p, q, r).

    Exact when p, q, r are Fractions; floating otherwise.
    """
    _warn_if_outside(p, q, r)
    kernel = TruncatedSeries(_kernel_terms(p, q, r), 3, cutoff)
    return series_inv_sqrt(kernel)


def genfun_three_batch(p, q, r, cutoff: int) -> dict:
    """Vectorized coefficients of the same series over sample arrays.

    Returns a dict mapping (a, b, c) with a+b+c <= cutoff to arrays of the
    coefficient values, one per sample.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    r = np.asarray(r, dtype=float)
    shape = p.shape
    kernel = _kernel_terms(p, q, r)
    zero = (0, 0, 0)
    ones = np.ones(shape)
    support = [(k, np.asarray(v, dtype=float) if not np.isscalar(v) else float(v))
               for k, v in kernel.items() if k != zero and sum(k) <= cutoff]
    s = {zero: ones}
    sq = {zero: ones.copy()}
    for d in range(1, cutoff + 1):
        for kappa in _degree_indices(d):
            acc = np.zeros(shape)
            for k, ak in support:
                rem = (kappa[0] - k[0], kappa[1] - k[1], kappa[2] - k[2])
                if min(rem) < 0:
                    continue
                prev = sq.get(rem)
                if prev is not None:
                    acc += ak * prev
            prev = sq.get(kappa)
            if prev is not None:
                acc += prev
            val = -acc / 2
            for i, si in list(s.items()):
                tgt = (kappa[0] + i[0], kappa[1] + i[1], kappa[2] + i[2])
                if sum(tgt) > cutoff:
                    continue
                if tgt in sq:
                    sq[tgt] = sq[tgt] + 2 * val * si
                else:
                    sq[tgt] = 2 * val * si
            tgt = (2 * kappa[0], 2 * kappa[1], 2 * kappa[2])
            if sum(tgt) <= cutoff:
                if tgt in sq:
                    sq[tgt] = sq[tgt] + val * val
                else:
                    sq[tgt] = val * val
            s[kappa] = val
    return s


def _degree_indices(d: int):
    for a in range(d + 1):
        for b in range(d + 1 - a):
            yield (a, b, d - a - b)


def phi_table_batch(p, q, r, max_total: int) -> dict:
    """Spherical-function values over coordinate arrays, via the series."""
    coeffs = genfun_three_batch(p, q, r, max_total)
    out = {}
    for idx, c in coeffs.items():
        a, b, g = idx
        scale = (math.factorial(a) * math.factorial(b) * math.factorial(g)) ** 2
        out[idx] = c * scale
    return out


# --- generating function, l factors --------------------------------------


def pair_order(l: int) -> list[tuple[int, int]]:
    """Unordered index pairs in lexicographic order; fixes variable layout.

    The series returned by :func:`genfun_general` has one variable per
    pair for the first family and one per pair for the second, in this
    order: (t_{ij} for pairs) followed by (t'_{ij} for pairs).
    """
    return [(i, j) for i in range(l) for j in range(i + 1, l)]


def _skew_variable_matrix(l: int, arity: int, offset: int,
                          convention: str = "skew") -> list[list[Polynomial]]:
    """l x l matrix over formal variables, one per pair, skew by default.

    ``convention="printed"`` flips the lower-triangle sign of the (2,1)
    entry to match a displayed-but-inconsistent sign pattern; it exists so
    the failing convention can be demonstrated, and only for l = 3.
    """
    pairs = pair_order(l)
    zero = Polynomial.zero(arity)
    rows = [[zero for _ in range(l)] for _ in range(l)]
    for k, (i, j) in enumerate(pairs):
        var = Polynomial.variable(offset + k, arity)
        rows[i][j] = var
        rows[j][i] = -var
    if convention == "printed":
        if l != 3:
            raise ValueError("the printed sign pattern is only defined for l = 3")
        k = pairs.index((1, 2))
        rows[2][1] = Polynomial.variable(offset + k, arity)
    elif convention != "skew":
        raise ValueError(f"unknown sign convention {convention!r}")
    return rows


def _block_t_matrix(l: int, arity: int, offset: int) -> PolyMatrix:
    """The 2l x 2l symmetric matrix with blocks t_{ij} * ((0,1),(-1,0))."""
    skew = _skew_variable_matrix(l, arity, offset)
    zero = Polynomial.zero(arity)
    big = [[zero for _ in range(2 * l)] for _ in range(2 * l)]
    for i in range(l):
        for j in range(l):
            s = skew[i][j]
            if s.is_zero():
                continue
            big[2 * i][2 * j + 1] = s
            big[2 * i + 1][2 * j] = -s
    return PolyMatrix(big)


def _block_diag_group(As, arity: int) -> PolyMatrix:
    l = len(As)
    zero = Polynomial.zero(arity)
    big = [[zero for _ in range(2 * l)] for _ in range(2 * l)]
    for k, g in enumerate(As):
        mat = g.matrix()
        for r in range(2):
            for c in range(2):
                v = mat[r][c]
                if v == 0:
                    continue
                big[2 * k + r][2 * k + c] = Polynomial.constant(v, arity)
    return PolyMatrix(big)


def genfun_general(As, cutoff: int) -> TruncatedSeries:
    """Generating series for l-factor spherical functions.

    Variables: one formal variable per pair for the first exponent matrix
    and one per pair for the second (see :func:`pair_order`); the second
    family stands for conjugated parameters.  The coefficient of
    prod t_{ij}^{a_ij} t'_{ij}^{b_ij} times prod a_ij! b_ij! is the value
    of the spherical function for exponent matrices (a, b).
    """
    l = len(As)
    if l < 2:
        raise ValueError("need at least two factors")
    npairs = l * (l - 1) // 2
    arity = 2 * npairs
    t_big = _block_t_matrix(l, arity, 0)
    tp_big = _block_t_matrix(l, arity, npairs)
    u_mat = _block_diag_group(As, arity)
    m = mat_mul(mat_mul(mat_mul(u_mat, t_big), u_mat.transpose()), tp_big)
    m = mat_sub(PolyMatrix.identity(2 * l, arity), m)
    det = det_series(m, cutoff)
    return series_inv_sqrt(det)


@dataclass
class Prop42Report:
    """Outcome of the identity det(1 - TT') = det(1 + TT_small')^2."""

    l: int
    cutoff: int
    convention: str
    equal: bool
    first_difference: tuple | None
    lhs_terms: int
    rhs_terms: int

    def to_dict(self):
        fd = None
        if self.first_difference is not None:
            idx, lc, rc = self.first_difference
            fd = {"index": list(idx), "lhs": str(lc), "rhs": str(rc)}
        return {"l": self.l, "cutoff": self.cutoff,
                "convention": self.convention, "equal": self.equal,
                "first_difference": fd,
                "lhs_terms": self.lhs_terms, "rhs_terms": self.rhs_terms}


def verify_prop42(l: int, cutoff: int, convention: str = "skew") -> Prop42Report:
    """Compare the 2l x 2l and l x l determinant sides as exact polynomials.

    The left side is det(1 - T T') for the block matrices of the l-factor
    generating function; the right side is det(1 + S S')^2 where S, S' are
    the l x l single-variable matrices under the given sign convention.
    Coefficients are compared exactly through the cutoff degree.
    """
    if l < 2:
        raise ValueError("need l >= 2")
    npairs = l * (l - 1) // 2
    arity = 2 * npairs
    t_big = _block_t_matrix(l, arity, 0)
    tp_big = _block_t_matrix(l, arity, npairs)
    m = mat_sub(PolyMatrix.identity(2 * l, arity), mat_mul(t_big, tp_big))
    lhs = det_series(m, cutoff)

    s_small = PolyMatrix(_skew_variable_matrix(l, arity, 0, convention))
    sp_small = PolyMatrix(_skew_variable_matrix(l, arity, npairs, convention))
    prod = mat_mul(s_small, sp_small)
    plus = PolyMatrix([[
        Polynomial({(0,) * arity: 1}, arity) + prod.entries[i][j]
        if i == j else prod.entries[i][j]
        for j in range(l)] for i in range(l)])
    rhs_root = det_series(plus, cutoff)
    rhs = series_mul(rhs_root, rhs_root)

    keys = sorted(set(lhs.terms) | set(rhs.terms), key=lambda k: (sum(k), k))
    first = None
    for k in keys:
        lc = lhs.terms.get(k, 0)
        rc = rhs.terms.get(k, 0)
        if lc != rc:
            first = (k, lc, rc)
            break
    return Prop42Report(l=l, cutoff=cutoff, convention=convention,
                        equal=first is None, first_difference=first,
                        lhs_terms=len(lhs.terms), rhs_terms=len(rhs.terms))


# --- Gaussian vectors ----------------------------------------------------


class SymmetricContraction:
    """Symmetric complex matrix with operator norm < 1.

    The parameter of a Gaussian vector; the norm bound (largest singular
    value) keeps the vector inside the weighted space and the pairing
    determinant away from its branch locus.
    """

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        m = np.asarray(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("matrix must be square")
        if not np.allclose(m, m.T, atol=1e-12):
            raise ValueError("matrix must be symmetric")
        if np.linalg.norm(m, 2) >= 1:
            raise ValueError("matrix must have operator norm < 1")
        self.matrix = m

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


def gaussian_inner(a, b) -> complex:
    """Pairing of Gaussian vectors: det(1 - A conj(B))^{-1/2}.

    Accepts raw arrays or :class:`SymmetricContraction`; the branch is the
    one continuous from A = B = 0 where the value is 1 (all eigenvalues of
    1 - A conj(B) stay in the right half plane for contractions).
    """
    a = a if isinstance(a, SymmetricContraction) else SymmetricContraction(a)
    b = b if isinstance(b, SymmetricContraction) else SymmetricContraction(b)
    eig = np.linalg.eigvals(np.eye(a.size) - a.matrix @ np.conj(b.matrix))
    return complex(np.prod(eig ** (-0.5)))


def gaussian_vector_series(a: np.ndarray, max_degree: int) -> Polynomial:
    """Taylor expansion of exp(z A z^t / 2) through the given total degree."""
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    quad: dict = {}
    for i in range(n):
        for j in range(i, n):
            c = a[i, j] if i < j else a[i, i] / 2
            if c == 0:
                continue
            idx = [0] * n
            idx[i] += 1
            idx[j] += 1
            quad[tuple(idx)] = quad.get(tuple(idx), 0) + c
    q = Polynomial(quad, n)
    out = Polynomial.constant(1.0 + 0j, n)
    power = Polynomial.constant(1.0 + 0j, n)
    for k in range(1, max_degree // 2 + 1):
        power = poly_mul(power, q)
        out = out + power * (1.0 / math.factorial(k))
    return out


@dataclass
class SphericalValue:
    """One evaluated spherical function with its labels."""

    value: complex | RationalComplex
    indices: tuple | dict
    point: dict

    def to_dict(self):
        v = complex(self.value)
        return {"re": v.real, "im": v.imag,
                "indices": self.indices if isinstance(self.indices, dict)
                else list(self.indices),
                "point": self.point}
