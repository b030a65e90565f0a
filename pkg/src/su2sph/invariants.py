"""Construction and admissibility of diagonally invariant vectors.

For three tensor factors the invariant vector is a product of three 2x2
cross determinants raised to exponents (alpha, beta, gamma); the factor
degrees are n = alpha+beta, m = alpha+gamma, k = beta+gamma.  For l
factors the same construction runs over all unordered pairs, with an
exponent matrix in place of the triple.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .polyfock import Polynomial, poly_allclose, poly_mul, poly_pow, substitute_blocks
from .su2 import haar_sample


@dataclass(frozen=True)
class ExponentTriple:
    alpha: int
    beta: int
    gamma: int

    def __post_init__(self):
        if min(self.alpha, self.beta, self.gamma) < 0:
            raise ValueError("exponents must be nonnegative")

    def degrees(self) -> tuple[int, int, int]:
        """Factor degrees (n, m, k) of the ambient tensor product."""
        return (self.alpha + self.beta,
                self.alpha + self.gamma,
                self.beta + self.gamma)

    def total(self) -> int:
        return self.alpha + self.beta + self.gamma

    def as_tuple(self):
        return (self.alpha, self.beta, self.gamma)


def exponents_from_degrees(n: int, m: int, k: int) -> ExponentTriple | None:
    """Solve for the exponent triple of given factor degrees.

    Returns None (not admissible) when n+m+k is odd or the triangle
    inequality fails; an invariant vector exists exactly otherwise.
    """
    if min(n, m, k) < 0:
        raise ValueError("degrees must be nonnegative")
    if (n + m + k) % 2:
        return None
    alpha2 = n + m - k
    beta2 = n + k - m
    gamma2 = m + k - n
    if min(alpha2, beta2, gamma2) < 0:
        return None
    return ExponentTriple(alpha2 // 2, beta2 // 2, gamma2 // 2)


# variable layout for three factors: (x1, x2, y1, y2, z1, z2)
_CROSS_XY = Polynomial({(1, 0, 0, 1, 0, 0): 1, (0, 1, 1, 0, 0, 0): -1}, 6)
_CROSS_YZ = Polynomial({(0, 0, 1, 0, 0, 1): 1, (0, 0, 0, 1, 1, 0): -1}, 6)
_CROSS_ZX = Polynomial({(0, 1, 0, 0, 1, 0): 1, (1, 0, 0, 0, 0, 1): -1}, 6)


def three_factor_crosses() -> tuple[Polynomial, Polynomial, Polynomial]:
    """The generating quadratics (x wedge y, y wedge z, z wedge x)."""
    return _CROSS_XY, _CROSS_YZ, _CROSS_ZX


@lru_cache(maxsize=4096)
def _xi_three_cached(alpha: int, beta: int, gamma: int) -> Polynomial:
    out = poly_pow(_CROSS_XY, alpha)
    out = poly_mul(out, poly_pow(_CROSS_YZ, gamma))
    return poly_mul(out, poly_pow(_CROSS_ZX, beta))


def xi_three(e: ExponentTriple) -> Polynomial:
    """Invariant vector in six variables with integer coefficients.

    Homogeneous of degrees (alpha+beta, alpha+gamma, beta+gamma) in the
    three variable pairs.
    """
    return _xi_three_cached(e.alpha, e.beta, e.gamma)


ExponentMatrix = tuple[tuple[int, ...], ...]


def exponent_matrix(rows) -> ExponentMatrix:
    """Validate a symmetric nonnegative integer matrix with zero diagonal."""
    mat = tuple(tuple(int(x) for x in row) for row in rows)
    l = len(mat)
    if any(len(r) != l for r in mat):
        raise ValueError("exponent matrix must be square")
    for i in range(l):
        if mat[i][i] != 0:
            raise ValueError("diagonal entries must be zero")
        for j in range(l):
            if mat[i][j] < 0:
                raise ValueError("entries must be nonnegative")
            if mat[i][j] != mat[j][i]:
                raise ValueError("exponent matrix must be symmetric")
    return mat


def row_degrees(m: ExponentMatrix) -> tuple[int, ...]:
    """Degree of the invariant vector in each variable pair: row sums."""
    return tuple(sum(row) for row in m)


def cross_pair(i: int, j: int, l: int) -> Polynomial:
    """The quadratic u_i^(1) u_j^(2) - u_i^(2) u_j^(1) in 2l variables."""
    if not 0 <= i < j < l:
        raise ValueError("need 0 <= i < j < l")
    a = [0] * (2 * l)
    a[2 * i] = 1
    a[2 * j + 1] = 1
    b = [0] * (2 * l)
    b[2 * i + 1] = 1
    b[2 * j] = 1
    return Polynomial({tuple(a): 1, tuple(b): -1}, 2 * l)


def xi_general(m: ExponentMatrix) -> Polynomial:
    """Product over pairs i<j of the cross quadratic to the power m[i][j]."""
    m = exponent_matrix(m)
    l = len(m)
    out = Polynomial.constant(1, 2 * l)
    for i in range(l):
        for j in range(i + 1, l):
            if m[i][j]:
                out = poly_mul(out, poly_pow(cross_pair(i, j, l), m[i][j]))
    return out


def check_k_invariance(f: Polynomial, trials: int, rng: np.random.Generator,
                       tol: float = 1e-9) -> bool:
    """True iff f is fixed by the same Haar-random block on every pair."""
    if f.arity % 2:
        raise ValueError("arity must be even")
    npairs = f.arity // 2
    for _ in range(trials):
        g = haar_sample(rng)
        moved = substitute_blocks(f, [g.matrix()] * npairs)
        if not poly_allclose(moved, f, tol):
            return False
    return True
