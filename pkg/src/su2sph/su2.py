"""SU(2) group elements, Haar sampling, and reduction of triples.

An element is stored as the pair (a, b) of its first row; the full matrix
is ((a, b), (-conj(b), conj(a))), which is unitary with determinant 1.
Entries may be complex floats or exact Gaussian rationals
(:class:`~su2sph.polyfock.RationalComplex`).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .polyfock import (
    Polynomial,
    RationalComplex,
    conj_scalar,
    homogeneous_degrees,
    substitute_blocks,
)

_NORM_TOL = 1e-9


class SU2Element:
    """Unit pair (a, b) encoding the matrix ((a, b), (-conj b, conj a))."""

    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a = a
        self.b = b

    def matrix(self):
        return ((self.a, self.b),
                (-conj_scalar(self.b), conj_scalar(self.a)))

    @property
    def is_exact(self) -> bool:
        return isinstance(self.a, RationalComplex)

    def to_float(self) -> "SU2Element":
        return SU2Element(complex(self.a), complex(self.b))

    def trace_real(self) -> float | Fraction:
        """Trace of the encoded matrix, which is the real number 2 Re a."""
        if self.is_exact:
            return 2 * self.a.re
        return 2 * complex(self.a).real

    def __eq__(self, other):
        if not isinstance(other, SU2Element):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __repr__(self):
        return f"SU2Element(a={self.a!r}, b={self.b!r})"


def su2_new(a, b) -> SU2Element:
    """Validated element; float inputs within 1e-9 of unit norm renormalize."""
    if isinstance(a, RationalComplex) or isinstance(b, RationalComplex):
        a = a if isinstance(a, RationalComplex) else RationalComplex(a)
        b = b if isinstance(b, RationalComplex) else RationalComplex(b)
        if a.abs_sq() + b.abs_sq() != 1:
            raise ValueError("|a|^2 + |b|^2 must equal 1 exactly in exact mode")
        return SU2Element(a, b)
    a = complex(a)
    b = complex(b)
    n2 = abs(a) ** 2 + abs(b) ** 2
    if abs(n2 - 1.0) > _NORM_TOL:
        raise ValueError(f"|a|^2 + |b|^2 = {n2!r} is not 1 within {_NORM_TOL}")
    scale = 1.0 / math.sqrt(n2)
    return SU2Element(a * scale, b * scale)


def su2_identity(exact: bool = False) -> SU2Element:
    if exact:
        return SU2Element(RationalComplex(1), RationalComplex(0))
    return SU2Element(1 + 0j, 0j)


def su2_mul(g: SU2Element, h: SU2Element) -> SU2Element:
    """Group product (matrix product of the encoded 2x2 matrices)."""
    a = g.a * h.a - g.b * conj_scalar(h.b)
    b = g.a * h.b + g.b * conj_scalar(h.a)
    return SU2Element(a, b)


def su2_inv(g: SU2Element) -> SU2Element:
    """Inverse = conjugate transpose: (conj a, -b)."""
    return SU2Element(conj_scalar(g.a), -g.b)


def su2_from_angle(phi: float) -> SU2Element:
    """The diagonal element diag(e^{i phi}, e^{-i phi})."""
    return SU2Element(cmath.exp(1j * phi), 0j)


def haar_sample(rng: np.random.Generator) -> SU2Element:
    """Haar-random element: normalized complex 2-vector Gaussian."""
    v = rng.standard_normal(4)
    v = v / np.linalg.norm(v)
    return SU2Element(complex(v[0], v[1]), complex(v[2], v[3]))


def haar_sample_batch(rng: np.random.Generator, n: int):
    """Arrays (a, b) of n Haar samples, for vectorized statistics."""
    v = rng.standard_normal((n, 4))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return v[:, 0] + 1j * v[:, 1], v[:, 2] + 1j * v[:, 3]


def su2_rational(t1: Fraction, t2: Fraction, t3: Fraction) -> SU2Element:
    """Exact rational element via stereographic projection of the 3-sphere.

    Any rational triple gives a = w + i x, b = y + i z with
    w^2 + x^2 + y^2 + z^2 = 1 exactly; such points are dense in SU(2).
    """
    t1, t2, t3 = Fraction(t1), Fraction(t2), Fraction(t3)
    big = 1 + t1 * t1 + t2 * t2 + t3 * t3
    w = (2 - big) / big  # (1 - T) / (1 + T) with T = sum of squares
    x = 2 * t1 / big
    y = 2 * t2 / big
    z = 2 * t3 / big
    return SU2Element(RationalComplex(w, x), RationalComplex(y, z))


def rational_haarish(rng: np.random.Generator, max_den: int = 5) -> SU2Element:
    """Random exact rational element (not Haar, used for bit-exact tests)."""
    def frac():
        num = int(rng.integers(-2 * max_den, 2 * max_den + 1))
        den = int(rng.integers(1, max_den + 1))
        return Fraction(num, den)
    return su2_rational(frac(), frac(), frac())


def rep_apply(g: SU2Element, f: Polynomial) -> Polynomial:
    """Action on a homogeneous polynomial in one variable pair: f -> f(zg)."""
    if f.arity != 2:
        raise ValueError("rep_apply expects a polynomial in one variable pair")
    homogeneous_degrees(f)  # raises if f is not homogeneous
    return substitute_blocks(f, [g.matrix()])


@dataclass
class CanonicalTriple:
    """Double-coset representative (I, diag(e^{i phi}, e^{-i phi}), third).

    theta records arg(b) of the third element in [0, 2*pi); together with
    phi and a it gives measurable coordinates on the reduced space.
    """

    phi: float
    third: SU2Element
    theta: float

    def second(self) -> SU2Element:
        return su2_from_angle(self.phi)

    def triple(self):
        return su2_identity(), self.second(), self.third


def reduce_canonical(A: SU2Element, B: SU2Element, C: SU2Element,
                     degenerate_tol: float = 1e-12) -> CanonicalTriple:
    """Left-translate by A^{-1} and diagonalize the second entry.

    The eigenphase phi of A^{-1}B is taken in [0, pi] from the trace
    (tr = 2 cos phi).  When A^{-1}B = +-I any conjugation fixes it, so the
    third entry is returned unconjugated.  Spectral coordinates of the
    triple are preserved.
    """
    A, B, C = A.to_float(), B.to_float(), C.to_float()
    m = su2_mul(su2_inv(A), B)
    n = su2_mul(su2_inv(A), C)
    am, bm = complex(m.a), complex(m.b)
    c = min(1.0, max(-1.0, am.real))
    phi = math.acos(c)
    if 1.0 - abs(am.real) <= degenerate_tol:
        third = n
    else:
        # eigenvector of m for e^{i phi}; two algebraic forms, pick the
        # better conditioned one
        ev = cmath.exp(1j * phi)
        v = (bm, ev - am)
        v_alt = (ev - am.conjugate(), -bm.conjugate())
        if abs(v_alt[0]) ** 2 + abs(v_alt[1]) ** 2 > abs(v[0]) ** 2 + abs(v[1]) ** 2:
            v = v_alt
        norm = math.sqrt(abs(v[0]) ** 2 + abs(v[1]) ** 2)
        v = (v[0] / norm, v[1] / norm)
        w = SU2Element(v[0], -v[1].conjugate())
        third = su2_mul(su2_mul(su2_inv(w), n), w)
    theta = cmath.phase(complex(third.b)) % (2 * math.pi)
    return CanonicalTriple(phi=phi, third=third, theta=theta)


def rep_matrix(g: SU2Element, n: int) -> np.ndarray:
    """Matrix of the substitution action on degree-n polynomials.

    Written in the monomial basis normalized by the factorial inner
    product, so the result is unitary for unitary g.
    """
    g = g.to_float()
    dim = n + 1
    out = np.zeros((dim, dim), dtype=complex)
    norms = [math.sqrt(math.factorial(i) * math.factorial(n - i))
             for i in range(dim)]
    for i in range(dim):
        mono = Polynomial.monomial((i, n - i), 1.0)
        img = rep_apply(g, mono)
        for idx, c in img.terms.items():
            j = idx[0]
            out[j, i] = complex(c) * norms[j] / norms[i]
    return out
