"""Sparse multivariate polynomials with the factorial-weighted inner product.

A polynomial is a dictionary mapping exponent tuples to nonzero complex
coefficients, together with an arity (number of variables).  Monomials are
orthogonal for the inner product implemented by :func:`fock_inner`, with
squared norm equal to the product of the factorials of the exponents; this
is the pairing under which the substitution action of unitary 2x2 blocks
(:func:`substitute_blocks`) is unitary.

Two coefficient families are supported and never mixed implicitly:

* exact: ``int``, ``fractions.Fraction`` and :class:`RationalComplex`
  (complex numbers with rational real/imaginary parts);
* floating: ``float`` / ``complex``.

Plain integers interoperate with both, so symbolic constructions such as
the invariant vectors keep working in either mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

MultiIndex = tuple[int, ...]

_EXACT_TYPES = (int, Fraction)


def total_degree(idx: MultiIndex) -> int:
    return sum(idx)


def mono_norm_sq(idx: MultiIndex) -> int:
    """Squared norm of the monomial with exponents ``idx``: prod of k!."""
    out = 1
    for k in idx:
        out *= math.factorial(k)
    return out


class RationalComplex:
    """Complex scalar with rational real and imaginary parts.

    Arithmetic with ``int``/``Fraction`` stays exact; mixing with ``float``
    or ``complex`` raises ``TypeError`` so exactness cannot silently leak.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _coerce(x):
        if isinstance(x, RationalComplex):
            return x
        if isinstance(x, _EXACT_TYPES):
            return RationalComplex(x)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalComplex(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalComplex(self.re * o.re - self.im * o.im,
                               self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero RationalComplex")
        return RationalComplex((self.re * o.re + self.im * o.im) / d,
                               (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return RationalComplex(-self.re, -self.im)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = RationalComplex(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self) -> "RationalComplex":
        return RationalComplex(self.re, -self.im)

    def abs_sq(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"RationalComplex({self.re!r}, {self.im!r})"


@dataclass(frozen=True)
class CoefficientMode:
    """Coefficient regime: exact Gaussian rationals, or complex floats.

    ``tol`` is the comparison tolerance used by float-mode checks; it must
    be positive in float mode and is ignored in exact mode.
    """

    kind: str
    tol: float = 1e-9

    def __post_init__(self):
        if self.kind not in ("exact", "float"):
            raise ValueError(f"unknown coefficient mode {self.kind!r}")
        if self.kind == "float" and not self.tol > 0:
            raise ValueError("float mode requires a positive tolerance")

    @property
    def is_exact(self) -> bool:
        return self.kind == "exact"

    def scalar(self, re, im=0):
        """Build a scalar of this mode from rational or float parts."""
        if self.is_exact:
            return RationalComplex(re, im)
        return complex(re, im)


EXACT = CoefficientMode("exact")
FLOAT = CoefficientMode("float", 1e-9)


def conj_scalar(c):
    """Complex conjugate for any supported coefficient type."""
    if isinstance(c, (complex, RationalComplex)):
        return c.conjugate()
    return c


def scalar_to_complex(c) -> complex:
    return complex(c)


def scalar_abs(c) -> float:
    if isinstance(c, RationalComplex):
        return math.sqrt(float(c.abs_sq()))
    return abs(c)


class Polynomial:
    """Sparse polynomial: dict of exponent tuple -> nonzero coefficient."""

    __slots__ = ("terms", "arity")

    def __init__(self, terms: dict, arity: int):
        self.arity = arity
        clean = {}
        for idx, c in terms.items():
            if len(idx) != arity:
                raise ValueError(f"index {idx} does not match arity {arity}")
            if c == 0:
                continue
            clean[idx] = c
        self.terms = clean

    # --- constructors -------------------------------------------------

    @classmethod
    def zero(cls, arity: int) -> "Polynomial":
        return cls({}, arity)

    @classmethod
    def constant(cls, c, arity: int) -> "Polynomial":
        return cls({(0,) * arity: c}, arity)

    @classmethod
    def variable(cls, i: int, arity: int) -> "Polynomial":
        idx = [0] * arity
        idx[i] = 1
        return cls({tuple(idx): 1}, arity)

    @classmethod
    def monomial(cls, idx: MultiIndex, c, arity: int | None = None) -> "Polynomial":
        return cls({tuple(idx): c}, len(idx) if arity is None else arity)

    # --- queries --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(i) for i in self.terms)

    def coefficient(self, idx: MultiIndex):
        return self.terms.get(tuple(idx), 0)

    def max_abs(self) -> float:
        if not self.terms:
            return 0.0
        return max(scalar_abs(c) for c in self.terms.values())

    def chop(self, tol: float) -> "Polynomial":
        """Drop float-mode dust: coefficients below tol * largest magnitude."""
        if not self.terms:
            return self
        cut = tol * self.max_abs()
        return Polynomial({i: c for i, c in self.terms.items()
                           if scalar_abs(c) >= cut}, self.arity)

    def map_coeffs(self, fn) -> "Polynomial":
        return Polynomial({i: fn(c) for i, c in self.terms.items()}, self.arity)

    def conjugate(self) -> "Polynomial":
        return self.map_coeffs(conj_scalar)

    # --- arithmetic -----------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return poly_add(self, other)

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return poly_sub(self, other)

    def __neg__(self):
        return Polynomial({i: -c for i, c in self.terms.items()}, self.arity)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return poly_mul(self, other)
        return Polynomial({i: c * other for i, c in self.terms.items()}, self.arity)

    def __rmul__(self, other):
        return Polynomial({i: other * c for i, c in self.terms.items()}, self.arity)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    def __hash__(self):
        return hash((self.arity, frozenset(self.terms.items())))

    def __repr__(self):
        n = len(self.terms)
        return f"Polynomial(arity={self.arity}, terms={n})"


def _check_same_arity(f: Polynomial, g: Polynomial):
    if f.arity != g.arity:
        raise ValueError(f"arity mismatch: {f.arity} != {g.arity}")


def poly_add(f: Polynomial, g: Polynomial) -> Polynomial:
    _check_same_arity(f, g)
    out = dict(f.terms)
    for idx, c in g.terms.items():
        if idx in out:
            out[idx] = out[idx] + c
        else:
            out[idx] = c
    return Polynomial(out, f.arity)


def poly_sub(f: Polynomial, g: Polynomial) -> Polynomial:
    _check_same_arity(f, g)
    out = dict(f.terms)
    for idx, c in g.terms.items():
        if idx in out:
            out[idx] = out[idx] - c
        else:
            out[idx] = -c
    return Polynomial(out, f.arity)


def poly_mul(f: Polynomial, g: Polynomial) -> Polynomial:
    _check_same_arity(f, g)
    out: dict = {}
    for i1, c1 in f.terms.items():
        for i2, c2 in g.terms.items():
            key = tuple(a + b for a, b in zip(i1, i2))
            c = c1 * c2
            if key in out:
                out[key] = out[key] + c
            else:
                out[key] = c
    return Polynomial(out, f.arity)


def poly_pow(f: Polynomial, n: int) -> Polynomial:
    if n < 0:
        raise ValueError("negative power")
    out = Polynomial.constant(1, f.arity)
    for _ in range(n):
        out = poly_mul(out, f)
    return out


def poly_allclose(f: Polynomial, g: Polynomial, tol: float = 1e-9) -> bool:
    """Coefficientwise closeness, relative to the larger coefficient scale."""
    _check_same_arity(f, g)
    scale = max(1.0, f.max_abs(), g.max_abs())
    diff = poly_sub(f, g)
    return all(scalar_abs(c) <= tol * scale for c in diff.terms.values())


def homogeneous_degrees(f: Polynomial) -> tuple[int, ...]:
    """Degree of f in each consecutive variable pair.

    Raises ``ValueError`` if f is not homogeneous pair by pair.  The zero
    polynomial reports degree 0 in every pair.
    """
    if f.arity % 2:
        raise ValueError("arity must be even to group variables into pairs")
    npairs = f.arity // 2
    if not f.terms:
        return (0,) * npairs
    degs = None
    for idx in f.terms:
        d = tuple(idx[2 * j] + idx[2 * j + 1] for j in range(npairs))
        if degs is None:
            degs = d
        elif degs != d:
            raise ValueError("polynomial is not homogeneous per variable pair")
    return degs


def _pair_expansion(block, i: int, j: int) -> dict:
    """Expansion of x1^i x2^j after the pair substitution by ``block``.

    The variable row (x1, x2) is right-multiplied by the 2x2 block:
    x1 -> b00 x1 + b10 x2,  x2 -> b01 x1 + b11 x2.
    """
    (b00, b01), (b10, b11) = block
    row1 = {}
    for s in range(i + 1):
        c = math.comb(i, s)
        if b00 != 0 or s == 0:
            if b10 != 0 or s == i:
                row1[(s, i - s)] = c * b00 ** s * b10 ** (i - s)
    row2 = {}
    for u in range(j + 1):
        c = math.comb(j, u)
        if b01 != 0 or u == 0:
            if b11 != 0 or u == j:
                row2[(u, j - u)] = c * b01 ** u * b11 ** (j - u)
    out = {}
    for (e1, e2), c1 in row1.items():
        for (e3, e4), c2 in row2.items():
            key = (e1 + e3, e2 + e4)
            c = c1 * c2
            if key in out:
                out[key] = out[key] + c
            else:
                out[key] = c
    return out


def substitute_blocks(f: Polynomial, blocks) -> Polynomial:
    """Right-multiply each variable pair of f by its 2x2 block and expand.

    The j-th pair occupies positions (2j, 2j+1).  Degree per pair is
    preserved for invertible blocks.
    """
    blocks = [tuple(map(tuple, b)) for b in blocks]
    if f.arity != 2 * len(blocks):
        raise ValueError(f"arity {f.arity} does not match {len(blocks)} blocks")
    caches: list[dict] = [{} for _ in blocks]
    out: dict = {}
    for idx, coeff in f.terms.items():
        partial = {(): coeff}
        for j, block in enumerate(blocks):
            key = (idx[2 * j], idx[2 * j + 1])
            exp = caches[j].get(key)
            if exp is None:
                exp = _pair_expansion(block, *key)
                caches[j][key] = exp
            nxt: dict = {}
            for head, c0 in partial.items():
                for pair_idx, c1 in exp.items():
                    k = head + pair_idx
                    c = c0 * c1
                    if k in nxt:
                        nxt[k] = nxt[k] + c
                    else:
                        nxt[k] = c
            partial = nxt
        for k, c in partial.items():
            if k in out:
                out[k] = out[k] + c
            else:
                out[k] = c
    return Polynomial(out, f.arity)


def fock_inner(f: Polynomial, g: Polynomial):
    """Sesquilinear pairing sum_idx f_idx conj(g_idx) idx!.

    Conjugation applies to the second argument.  Monomials are orthogonal
    with squared norm :func:`mono_norm_sq`.
    """
    _check_same_arity(f, g)
    gt = g.terms
    total = 0
    for idx, cf in f.terms.items():
        cg = gt.get(idx)
        if cg is None:
            continue
        total = total + cf * conj_scalar(cg) * mono_norm_sq(idx)
    return total


def format_polynomial(f: Polynomial, names: list[str] | None = None) -> str:
    """Human-readable rendering, terms sorted by degree then exponents."""
    if not f.terms:
        return "0"
    if names is None:
        names = [f"x{i}" for i in range(f.arity)]
    parts = []
    for idx in sorted(f.terms, key=lambda i: (sum(i), i)):
        c = f.terms[idx]
        mono = "*".join(
            (names[i] if e == 1 else f"{names[i]}^{e}")
            for i, e in enumerate(idx) if e
        )
        if isinstance(c, RationalComplex):
            cs = str(c.re) if c.im == 0 else f"({c.re}{'+' if c.im >= 0 else ''}{c.im}i)"
        else:
            cs = str(c)
        parts.append(f"{cs}*{mono}" if mono else cs)
    return " + ".join(parts).replace("+ -", "- ")
