"""Truncated multivariate power series and matrices of polynomials.

A :class:`TruncatedSeries` stores coefficients up to a total-degree cutoff.
The inverse square root is computed by a degree-by-degree recurrence whose
only divisions are by 2, so it stays exact over the rationals.  Square
matrices of polynomials support exact determinants (divisionless dynamic
programming over column subsets) and Pfaffians of skew-symmetric matrices.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .polyfock import Polynomial, poly_add, poly_mul, poly_sub, scalar_abs


class TruncatedSeries:
    """Formal power series cut at a total-degree bound."""

    __slots__ = ("terms", "arity", "cutoff")

    def __init__(self, terms: dict, arity: int, cutoff: int):
        if cutoff < 0:
            raise ValueError("cutoff must be nonnegative")
        self.arity = arity
        self.cutoff = cutoff
        clean = {}
        for idx, c in terms.items():
            if len(idx) != arity:
                raise ValueError(f"index {idx} does not match arity {arity}")
            if sum(idx) > cutoff or c == 0:
                continue
            clean[idx] = c
        self.terms = clean

    @classmethod
    def from_polynomial(cls, p: Polynomial, cutoff: int) -> "TruncatedSeries":
        return cls(p.terms, p.arity, cutoff)

    @classmethod
    def one(cls, arity: int, cutoff: int) -> "TruncatedSeries":
        return cls({(0,) * arity: 1}, arity, cutoff)

    def coefficient(self, idx):
        return self.terms.get(tuple(idx), 0)

    def constant_term(self):
        return self.terms.get((0,) * self.arity, 0)

    def truncate(self, cutoff: int) -> "TruncatedSeries":
        if cutoff > self.cutoff:
            raise ValueError("cannot raise the cutoff of a truncated series")
        return TruncatedSeries(self.terms, self.arity, cutoff)

    def to_polynomial(self) -> Polynomial:
        return Polynomial(self.terms, self.arity)

    def max_abs(self) -> float:
        if not self.terms:
            return 0.0
        return max(scalar_abs(c) for c in self.terms.values())

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.arity == other.arity and self.cutoff == other.cutoff
                and self.terms == other.terms)

    def __repr__(self):
        return (f"TruncatedSeries(arity={self.arity}, cutoff={self.cutoff}, "
                f"terms={len(self.terms)})")


def _check_compatible(a: TruncatedSeries, b: TruncatedSeries):
    if a.arity != b.arity:
        raise ValueError(f"arity mismatch: {a.arity} != {b.arity}")
    if a.cutoff != b.cutoff:
        raise ValueError(f"cutoff mismatch: {a.cutoff} != {b.cutoff}")


def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    _check_compatible(a, b)
    out = dict(a.terms)
    for idx, c in b.terms.items():
        if idx in out:
            out[idx] = out[idx] + c
        else:
            out[idx] = c
    return TruncatedSeries(out, a.arity, a.cutoff)


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Product truncated at the common total-degree cutoff."""
    _check_compatible(a, b)
    cutoff = a.cutoff
    out: dict = {}
    for i1, c1 in a.terms.items():
        d1 = sum(i1)
        for i2, c2 in b.terms.items():
            if d1 + sum(i2) > cutoff:
                continue
            key = tuple(x + y for x, y in zip(i1, i2))
            c = c1 * c2
            if key in out:
                out[key] = out[key] + c
            else:
                out[key] = c
    return TruncatedSeries(out, a.arity, cutoff)


def series_scale(a: TruncatedSeries, c) -> TruncatedSeries:
    return TruncatedSeries({i: c * v for i, v in a.terms.items()},
                           a.arity, a.cutoff)


def _half(c):
    # ints must become Fractions, not floats, to keep exact mode exact
    if isinstance(c, int):
        return Fraction(c, 2)
    return c / 2


def series_inv_sqrt(a: TruncatedSeries) -> TruncatedSeries:
    """The series s with s*s*a = 1 through the cutoff and s(0) = 1.

    Requires constant term exactly 1.  Coefficients are found degree by
    degree from the relation 0 = sum_k a_k (s^2)_{kappa-k}, in which the
    only unknown at each step enters as 2 s_kappa.
    """
    zero = (0,) * a.arity
    if a.constant_term() != 1:
        raise ValueError("inverse square root requires constant term 1")
    n = a.cutoff
    support = [(idx, c) for idx, c in a.terms.items() if idx != zero]
    s = {zero: 1}
    sq = {zero: 1}  # running s*s over the coefficients found so far
    by_degree: dict[int, list] = {}
    for d in range(1, n + 1):
        by_degree[d] = list(_indices_of_degree(d, a.arity))
    for d in range(1, n + 1):
        for kappa in by_degree[d]:
            acc = 0
            for k, ak in support:
                rem = tuple(x - y for x, y in zip(kappa, k))
                if min(rem) < 0:
                    continue
                v = sq.get(rem)
                if v is not None:
                    acc = acc + ak * v
            v = sq.get(kappa)
            if v is not None:
                acc = acc + v
            if acc == 0:
                continue
            val = -_half(acc)
            # fold the new coefficient into the running square
            for i, si in list(s.items()):
                tgt = tuple(x + y for x, y in zip(kappa, i))
                if sum(tgt) > n:
                    continue
                add = 2 * val * si
                if tgt in sq:
                    sq[tgt] = sq[tgt] + add
                else:
                    sq[tgt] = add
            tgt = tuple(2 * x for x in kappa)
            if sum(tgt) <= n:
                vv = val * val
                if tgt in sq:
                    sq[tgt] = sq[tgt] + vv
                else:
                    sq[tgt] = vv
            s[kappa] = val
    return TruncatedSeries(s, a.arity, n)


def _indices_of_degree(d: int, arity: int):
    """All exponent tuples of the given total degree."""
    if arity == 1:
        yield (d,)
        return
    for first in range(d + 1):
        for rest in _indices_of_degree(d - first, arity - 1):
            yield (first,) + rest


def series_allclose(a: TruncatedSeries, b: TruncatedSeries, tol: float = 1e-9) -> bool:
    _check_compatible(a, b)
    scale = max(1.0, a.max_abs(), b.max_abs())
    keys = set(a.terms) | set(b.terms)
    for k in keys:
        d = a.terms.get(k, 0) - b.terms.get(k, 0)
        if scalar_abs(d) > tol * scale:
            return False
    return True


# --- matrices of polynomials -------------------------------------------


class PolyMatrix:
    """Square matrix with :class:`Polynomial` entries of a common arity."""

    __slots__ = ("entries", "size", "arity")

    def __init__(self, entries):
        rows = [list(r) for r in entries]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        if n == 0:
            raise ValueError("empty matrix")
        arity = rows[0][0].arity
        for r in rows:
            for e in r:
                if not isinstance(e, Polynomial):
                    raise TypeError("entries must be Polynomial")
                if e.arity != arity:
                    raise ValueError("entries must share one arity")
        self.entries = rows
        self.size = n
        self.arity = arity

    @classmethod
    def identity(cls, n: int, arity: int) -> "PolyMatrix":
        one = Polynomial.constant(1, arity)
        zero = Polynomial.zero(arity)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_scalars(cls, mat, arity: int) -> "PolyMatrix":
        return cls([[Polynomial.constant(c, arity) for c in row] for row in mat])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix([[self.entries[j][i] for j in range(self.size)]
                           for i in range(self.size)])


def mat_mul(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    if a.size != b.size:
        raise ValueError("size mismatch")
    n = a.size
    zero = Polynomial.zero(a.arity)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = zero
            for k in range(n):
                e1 = a.entries[i][k]
                e2 = b.entries[k][j]
                if e1.is_zero() or e2.is_zero():
                    continue
                acc = poly_add(acc, poly_mul(e1, e2))
            row.append(acc)
        out.append(row)
    return PolyMatrix(out)


def mat_sub(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    if a.size != b.size:
        raise ValueError("size mismatch")
    return PolyMatrix([[poly_sub(a.entries[i][j], b.entries[i][j])
                        for j in range(a.size)] for i in range(a.size)])


def _det_dp(rows, n, mul, add, neg, is_zero, zero):
    """Determinant by expansion over column subsets, no divisions.

    minors[mask] holds the determinant of the submatrix made of the first
    r rows and the columns in mask, for every mask with r bits set.
    """
    minors = {0: None}  # None sentinel stands for the multiplicative unit
    for r in range(n):
        nxt: dict[int, object] = {}
        row = rows[r]
        sign_row = -1 if r % 2 else 1
        for mask, minor in minors.items():
            pos = 0
            for c in range(n):
                bit = 1 << c
                if mask & bit:
                    pos += 1
                    continue
                e = row[c]
                if is_zero(e):
                    continue
                # expansion along row r of the (r+1)x(r+1) minor
                sgn = sign_row if pos % 2 == 0 else -sign_row
                term = e if minor is None else mul(e, minor)
                if is_zero(term):
                    continue
                if sgn < 0:
                    term = neg(term)
                key = mask | bit
                if key in nxt:
                    nxt[key] = add(nxt[key], term)
                else:
                    nxt[key] = term
        minors = {k: v for k, v in nxt.items() if not is_zero(v)}
    full = (1 << n) - 1
    out = minors.get(full, zero)
    return zero if out is None else out


def poly_det(m: PolyMatrix) -> Polynomial:
    """Exact determinant over the polynomial ring."""
    return _det_dp(
        m.entries, m.size, poly_mul, poly_add,
        lambda p: Polynomial({i: -c for i, c in p.terms.items()}, p.arity),
        lambda p: p.is_zero(),
        Polynomial.zero(m.arity),
    )


def det_series(m: PolyMatrix, cutoff: int) -> TruncatedSeries:
    """Determinant with all products truncated at the total-degree cutoff."""
    rows = [[TruncatedSeries.from_polynomial(e, cutoff) for e in r]
            for r in m.entries]
    return _det_dp(
        rows, m.size, series_mul, series_add,
        lambda s: series_scale(s, -1),
        lambda s: not s.terms,
        TruncatedSeries({}, m.arity, cutoff),
    )


def _require_skew(m: PolyMatrix):
    n = m.size
    if n % 2:
        raise ValueError("Pfaffian requires even order")
    for i in range(n):
        if not m.entries[i][i].is_zero():
            raise ValueError("Pfaffian requires zero diagonal")
        for j in range(i + 1, n):
            if not poly_add(m.entries[i][j], m.entries[j][i]).is_zero():
                raise ValueError("matrix is not skew-symmetric")


def pfaffian(m: PolyMatrix) -> Polynomial:
    """Pfaffian of an even-order skew-symmetric polynomial matrix.

    Normalized so the block-diagonal matrix with blocks ((0,1),(-1,0))
    has Pfaffian +1; then Pf(M)^2 = det(M).
    """
    _require_skew(m)
    zero = Polynomial.zero(m.arity)
    one = Polynomial.constant(1, m.arity)
    cache: dict[tuple, Polynomial] = {(): one}

    def rec(indices: tuple) -> Polynomial:
        if indices in cache:
            return cache[indices]
        i = indices[0]
        acc = zero
        for k in range(1, len(indices)):
            j = indices[k]
            e = m.entries[i][j]
            if not e.is_zero():
                rest = tuple(x for x in indices if x != i and x != j)
                term = poly_mul(e, rec(rest))
                if k % 2 == 0:
                    term = -term
                acc = poly_add(acc, term)
        cache[indices] = acc
        return acc

    return rec(tuple(range(m.size)))


def det_permutation_expansion(m: PolyMatrix) -> Polynomial:
    """Brute-force determinant via the Leibniz sum (testing oracle)."""
    from itertools import permutations

    n = m.size
    acc = Polynomial.zero(m.arity)
    for perm in permutations(range(n)):
        inv = sum(1 for i, j in combinations(range(n), 2) if perm[i] > perm[j])
        term = Polynomial.constant(1, m.arity)
        for i in range(n):
            term = poly_mul(term, m.entries[i][perm[i]])
        if inv % 2:
            term = -term
        acc = poly_add(acc, term)
    return acc
