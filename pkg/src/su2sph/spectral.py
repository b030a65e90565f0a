"""Spectral coordinates of triples, the admissible body, and its measure.

A triple (A, B, C) determines three real numbers

    p = tr(A B^-1) / 2,   q = tr(A C^-1) / 2,   r = tr(B C^-1) / 2,

constant on double cosets of the diagonal subgroup.  They land in the body
Delta of the unit cube where 1 - p^2 - q^2 - r^2 + 2pqr >= 0, and the
pushforward of the normalized Haar measure under this map is the uniform
measure on Delta.  This module provides the map (scalar and vectorized),
membership and sampling for Delta, the statistical comparison of the two
measures, horizontal sections, and Monte-Carlo inner products of spherical
functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import stats

from .invariants import ExponentTriple
from .polyfock import RationalComplex
from .spherical import norm_xi, phi_table_batch
from .su2 import (
    SU2Element,
    haar_sample,
    haar_sample_batch,
    reduce_canonical,
    su2_inv,
    su2_mul,
    su2_new,
)


@dataclass(frozen=True)
class SpectralCoords:
    p: float | Fraction
    q: float | Fraction
    r: float | Fraction

    def as_tuple(self):
        return (self.p, self.q, self.r)

    def to_float(self) -> "SpectralCoords":
        return SpectralCoords(float(self.p), float(self.q), float(self.r))


def _half_trace_product(g: SU2Element, h_inv: SU2Element):
    # the trace of the encoded matrix is a + conj(a), real by construction
    a = su2_mul(g, h_inv).a
    if isinstance(a, RationalComplex):
        return a.re
    return complex(a).real


def spectral_coords(A: SU2Element, B: SU2Element, C: SU2Element) -> SpectralCoords:
    """Coefficients (p, q, r) of the curve attached to the triple.

    Computed from traces of pairwise quotients; exact for exact inputs.
    """
    return SpectralCoords(
        p=_half_trace_product(A, su2_inv(B)),
        q=_half_trace_product(A, su2_inv(C)),
        r=_half_trace_product(B, su2_inv(C)),
    )


def spectral_coords_batch(a1, b1, a2, b2, a3, b3):
    """Vectorized (p, q, r) from element arrays (a_i, b_i) per factor.

    Uses tr(G H^-1)/2 = Re(a_G conj(a_H) + b_G conj(b_H)), the real part
    of the Hermitian inner product of the two unit vectors.
    """
    p = (a1 * np.conj(a2) + b1 * np.conj(b2)).real
    q = (a1 * np.conj(a3) + b1 * np.conj(b3)).real
    r = (a2 * np.conj(a3) + b2 * np.conj(b3)).real
    return p, q, r


def gram_det(c: SpectralCoords):
    """Determinant of the unit-diagonal symmetric matrix with entries p, q, r."""
    p, q, r = c.p, c.q, c.r
    return 1 - p * p - q * q - r * r + 2 * p * q * r


def delta_contains(c: SpectralCoords, tol: float = 1e-9) -> bool:
    p, q, r = (float(x) for x in c.as_tuple())
    if max(abs(p), abs(q), abs(r)) > 1 + tol:
        return False
    return float(gram_det(c)) >= -tol


def _gram_batch(p, q, r):
    return 1 - p * p - q * q - r * r + 2 * p * q * r


def delta_contains_batch(p, q, r, tol: float = 1e-9):
    box = (np.abs(p) <= 1 + tol) & (np.abs(q) <= 1 + tol) & (np.abs(r) <= 1 + tol)
    return box & (_gram_batch(p, q, r) >= -tol)


def delta_uniform_batch(rng: np.random.Generator, n: int):
    """n points uniform on Delta by rejection from the cube."""
    out = np.empty((n, 3))
    filled = 0
    while filled < n:
        m = max(1024, int((n - filled) * 1.8))
        cand = rng.uniform(-1.0, 1.0, size=(m, 3))
        keep = cand[delta_contains_batch(cand[:, 0], cand[:, 1], cand[:, 2], tol=0.0)]
        take = min(len(keep), n - filled)
        out[filled:filled + take] = keep[:take]
        filled += take
    return out[:, 0], out[:, 1], out[:, 2]


def delta_uniform_sample(rng: np.random.Generator) -> SpectralCoords:
    p, q, r = delta_uniform_batch(rng, 1)
    return SpectralCoords(float(p[0]), float(q[0]), float(r[0]))


def haar_coords_batch(rng: np.random.Generator, n: int):
    """(p, q, r) arrays of n Haar-random triples."""
    a1, b1 = haar_sample_batch(rng, n)
    a2, b2 = haar_sample_batch(rng, n)
    a3, b3 = haar_sample_batch(rng, n)
    return spectral_coords_batch(a1, b1, a2, b2, a3, b3)


def triple_from_coords(p: float, q: float, r: float,
                       theta: float = 0.0) -> tuple[SU2Element, SU2Element, SU2Element]:
    """A canonical-form triple with the requested coordinates.

    The obvious section: phi = arccos p, a = q + i (r - pq)/sqrt(1-p^2),
    |b| from the unit condition and a free phase theta.  Valid for
    p in (-1, 1) and coordinates strictly inside the body.
    """
    if not -1.0 < p < 1.0:
        raise ValueError("need p strictly inside (-1, 1)")
    sin_phi = math.sqrt(1.0 - p * p)
    phi = math.acos(p)
    a = complex(q, (r - p * q) / sin_phi)
    b_abs_sq = 1.0 - abs(a) ** 2
    if b_abs_sq < -1e-12:
        raise ValueError("coordinates lie outside the admissible body")
    b = math.sqrt(max(0.0, b_abs_sq)) * complex(math.cos(theta), math.sin(theta))
    identity = su2_new(1.0, 0.0)
    second = su2_new(complex(math.cos(phi), math.sin(phi)), 0.0)
    third = su2_new(a, b)
    return identity, second, third


# --- measure comparison ---------------------------------------------------


@dataclass
class MomentCheck:
    name: str
    estimate: float
    stderr: float
    reference: float
    passed: bool

    def to_dict(self):
        return {"name": self.name, "estimate": self.estimate,
                "stderr": self.stderr, "reference": self.reference,
                "passed": self.passed}


@dataclass
class MomentReport:
    n_samples: int
    seed: int
    checks: list[MomentCheck] = field(default_factory=list)
    histogram_chi2: float = 0.0
    histogram_dof: int = 0
    histogram_pvalue: float = 1.0
    histogram_passed: bool = True
    membership_fraction: float = 1.0

    @property
    def passed(self) -> bool:
        return self.histogram_passed and all(c.passed for c in self.checks) \
            and self.membership_fraction == 1.0

    def to_dict(self):
        return {"n_samples": self.n_samples, "seed": self.seed,
                "checks": [c.to_dict() for c in self.checks],
                "histogram_chi2": self.histogram_chi2,
                "histogram_dof": self.histogram_dof,
                "histogram_pvalue": self.histogram_pvalue,
                "histogram_passed": self.histogram_passed,
                "membership_fraction": self.membership_fraction,
                "passed": self.passed}


def _moment_rows(samples: dict):
    p, q, r = samples["p"], samples["q"], samples["r"]
    return {
        "E[p]": p, "E[q]": q, "E[r]": r,
        "E[p^2]": p * p, "E[q^2]": q * q, "E[r^2]": r * r,
        "E[pq]": p * q, "E[pr]": p * r, "E[qr]": q * r,
    }


def two_sample_chi2(counts1, counts2):
    """Two-sample chi-square statistic over shared bins.

    Empty combined bins are dropped; degrees of freedom = kept bins - 1.
    """
    c1 = np.asarray(counts1, dtype=float).ravel()
    c2 = np.asarray(counts2, dtype=float).ravel()
    n1, n2 = c1.sum(), c2.sum()
    keep = (c1 + c2) > 0
    c1, c2 = c1[keep], c2[keep]
    pooled = (c1 + c2) / (n1 + n2)
    e1 = n1 * pooled
    e2 = n2 * pooled
    chi2 = float(((c1 - e1) ** 2 / e1).sum() + ((c2 - e2) ** 2 / e2).sum())
    dof = int(keep.sum() - 1)
    pvalue = float(stats.chi2.sf(chi2, dof))
    return chi2, dof, pvalue


def pushforward_report(n_samples: int, seed: int, bins: int = 8,
                       significance: float = 0.01) -> MomentReport:
    """Compare Haar-pushforward coordinates against uniform Delta samples.

    First moments are checked against 0 (symmetries of both measures force
    them to vanish), second moments are checked for agreement between the
    two samplers, and the 3-d histograms are compared by a two-sample
    chi-square test.
    """
    if n_samples < 10_000:
        raise ValueError("need at least 10^4 samples for stable verdicts")
    rng = np.random.default_rng(seed)
    hp, hq, hr = haar_coords_batch(rng, n_samples)
    up, uq, ur = delta_uniform_batch(rng, n_samples)

    report = MomentReport(n_samples=n_samples, seed=seed)
    member = delta_contains_batch(hp, hq, hr)
    report.membership_fraction = float(member.mean())

    haar_rows = _moment_rows({"p": hp, "q": hq, "r": hr})
    unif_rows = _moment_rows({"p": up, "q": uq, "r": ur})
    rt = math.sqrt(n_samples)

    for name in ("E[p]", "E[q]", "E[r]"):
        for label, rows in (("haar", haar_rows), ("uniform", unif_rows)):
            x = rows[name]
            est = float(x.mean())
            se = float(x.std(ddof=1)) / rt
            report.checks.append(MomentCheck(
                name=f"{name} {label}", estimate=est, stderr=se,
                reference=0.0, passed=abs(est) <= 3 * se))

    for name in ("E[p^2]", "E[q^2]", "E[r^2]", "E[pq]", "E[pr]", "E[qr]"):
        x, y = haar_rows[name], unif_rows[name]
        est = float(x.mean() - y.mean())
        se = math.hypot(float(x.std(ddof=1)), float(y.std(ddof=1))) / rt
        report.checks.append(MomentCheck(
            name=f"{name} haar-uniform", estimate=est, stderr=se,
            reference=0.0, passed=abs(est) <= 3 * se))

    edges = np.linspace(-1.0, 1.0, bins + 1)
    h1, _ = np.histogramdd(np.column_stack([hp, hq, hr]), bins=[edges] * 3)
    h2, _ = np.histogramdd(np.column_stack([up, uq, ur]), bins=[edges] * 3)
    chi2, dof, pvalue = two_sample_chi2(h1, h2)
    report.histogram_chi2 = chi2
    report.histogram_dof = dof
    report.histogram_pvalue = pvalue
    report.histogram_passed = pvalue >= significance
    return report


def radial_phi_batch(rng: np.random.Generator, n: int) -> np.ndarray:
    """Eigenphases of the canonical reduction of n Haar pairs, one by one."""
    out = np.empty(n)
    for i in range(n):
        A = haar_sample(rng)
        B = haar_sample(rng)
        out[i] = reduce_canonical(A, B, B).phi
    return out


def radial_chi2(phis: np.ndarray, bins: int = 40):
    """Chi-square fit of eigenphase samples against the sin^2 density."""
    edges = np.linspace(0.0, math.pi, bins + 1)
    counts, _ = np.histogram(phis, bins=edges)
    # integral of (2/pi) sin^2 over [a, b] = (b - a)/pi - (sin 2b - sin 2a)/(2 pi)
    upper = edges[1:]
    lower = edges[:-1]
    probs = (upper - lower) / math.pi - (np.sin(2 * upper) - np.sin(2 * lower)) / (2 * math.pi)
    expected = probs * len(phis)
    chi2 = float(((counts - expected) ** 2 / expected).sum())
    dof = bins - 1
    pvalue = float(stats.chi2.sf(chi2, dof))
    return chi2, dof, pvalue


# --- orthogonality ---------------------------------------------------------


def l2_inner_delta(e1: ExponentTriple, e2: ExponentTriple, n_samples: int,
                   rng: np.random.Generator, chunk: int = 100_000):
    """Monte-Carlo estimate of E[Phi_{e1} conj(Phi_{e2})] over Haar triples.

    Returns (estimate, stderr).  Values are computed from the generating
    series at the sampled coordinates.
    """
    max_total = max(e1.total(), e2.total())
    tot = 0.0
    tot_sq = 0.0
    done = 0
    while done < n_samples:
        m = min(chunk, n_samples - done)
        p, q, r = haar_coords_batch(rng, m)
        table = phi_table_batch(p, q, r, max_total)
        prod = table[e1.as_tuple()] * table[e2.as_tuple()]
        tot += float(prod.sum())
        tot_sq += float((prod * prod).sum())
        done += m
    mean = tot / n_samples
    var = max(0.0, tot_sq / n_samples - mean * mean)
    return mean, math.sqrt(var / n_samples)


@dataclass
class GramEntry:
    e1: tuple
    e2: tuple
    estimate: float
    stderr: float
    reference: float
    passed: bool

    def to_dict(self):
        return {"e1": list(self.e1), "e2": list(self.e2),
                "estimate": self.estimate, "stderr": self.stderr,
                "reference": self.reference, "passed": self.passed}


@dataclass
class GramReport:
    n_samples: int
    seed: int
    max_degree_sum: int
    entries: list[GramEntry] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def worst_sigma(self) -> float:
        return max((abs(e.estimate - e.reference) / e.stderr
                    for e in self.entries if e.stderr > 0), default=0.0)

    def to_dict(self):
        return {"n_samples": self.n_samples, "seed": self.seed,
                "max_degree_sum": self.max_degree_sum,
                "passed": self.passed, "worst_sigma": self.worst_sigma(),
                "entries": [e.to_dict() for e in self.entries]}


def admissible_triples(max_degree_sum: int) -> list[ExponentTriple]:
    """Exponent triples with n + m + k <= the bound (that is 2*total)."""
    out = []
    top = max_degree_sum // 2
    for a in range(top + 1):
        for b in range(top + 1 - a):
            for g in range(top + 1 - a - b):
                out.append(ExponentTriple(a, b, g))
    return out


def schur_gram_report(max_degree_sum: int, n_samples: int, seed: int,
                      chunk: int = 100_000) -> GramReport:
    """Monte-Carlo Gram matrix of the spherical family against Haar.

    Diagonal entries are compared with norm^2(Xi)^2 / dim; off-diagonal
    entries with 0, both at three standard errors.
    """
    triples = admissible_triples(max_degree_sum)
    max_total = max(e.total() for e in triples)
    keys = [e.as_tuple() for e in triples]
    nkeys = len(keys)
    rng = np.random.default_rng(seed)

    sums = np.zeros((nkeys, nkeys))
    sums_sq = np.zeros((nkeys, nkeys))
    done = 0
    while done < n_samples:
        m = min(chunk, n_samples - done)
        p, q, r = haar_coords_batch(rng, m)
        table = phi_table_batch(p, q, r, max_total)
        mat = np.vstack([table[k] for k in keys])  # nkeys x m
        prod = mat @ mat.T
        sums += prod
        sums_sq += (mat ** 2) @ (mat ** 2).T
        done += m

    report = GramReport(n_samples=n_samples, seed=seed,
                        max_degree_sum=max_degree_sum)
    for i, e1 in enumerate(triples):
        for j in range(i, nkeys):
            e2 = triples[j]
            mean = sums[i, j] / n_samples
            var = max(0.0, sums_sq[i, j] / n_samples - mean * mean)
            se = math.sqrt(var / n_samples)
            if i == j:
                n, mdeg, k = e1.degrees()
                ref = norm_xi(e1) ** 2 / ((n + 1) * (mdeg + 1) * (k + 1))
            else:
                ref = 0.0
            passed = abs(mean - ref) <= 3 * se if se > 0 else mean == ref
            report.entries.append(GramEntry(
                e1=e1.as_tuple(), e2=e2.as_tuple(), estimate=float(mean),
                stderr=float(se), reference=float(ref), passed=bool(passed)))
    return report


# --- sections and volume ----------------------------------------------------


@dataclass
class DeltaSection:
    """Horizontal section of the body at height r0: an ellipse.

    The section is {(p, q): p^2 + q^2 - 2 r0 p q <= 1 - r0^2}; its axes
    lie on the lines p = q and p = -q with semi-axes sqrt(1 + r0) and
    sqrt(1 - r0), so the area is pi sqrt(1 - r0^2).
    """

    r0: float
    form: tuple
    axis_directions: tuple
    semi_axes: tuple
    area: float

    def to_dict(self):
        return {"r0": self.r0,
                "form": [list(row) for row in self.form],
                "axis_directions": [list(v) for v in self.axis_directions],
                "semi_axes": list(self.semi_axes),
                "area": self.area}


def delta_section(r0: float) -> DeltaSection:
    if not -1.0 < r0 < 1.0:
        raise ValueError("section height must satisfy |r0| < 1")
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    return DeltaSection(
        r0=float(r0),
        form=((1.0, -float(r0)), (-float(r0), 1.0)),
        axis_directions=((inv_sqrt2, inv_sqrt2), (inv_sqrt2, -inv_sqrt2)),
        semi_axes=(math.sqrt(1.0 + r0), math.sqrt(1.0 - r0)),
        area=math.pi * math.sqrt(1.0 - r0 * r0),
    )


def delta_volume_sections(n_points: int = 20_001) -> float:
    """Volume of the body by integrating section areas over the height."""
    r = np.linspace(-1.0, 1.0, n_points)
    areas = math.pi * np.sqrt(np.maximum(0.0, 1.0 - r * r))
    return float(np.trapezoid(areas, r))


def delta_volume_rejection(n_samples: int, seed: int) -> tuple[float, float]:
    """Volume estimate (value, stderr) by rejection from the cube."""
    rng = np.random.default_rng(seed)
    cand = rng.uniform(-1.0, 1.0, size=(n_samples, 3))
    hits = delta_contains_batch(cand[:, 0], cand[:, 1], cand[:, 2], tol=0.0)
    frac = float(hits.mean())
    se = math.sqrt(frac * (1 - frac) / n_samples)
    return 8.0 * frac, 8.0 * se
