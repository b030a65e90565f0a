"""Named verification suites with machine-readable reports.

Each suite exercises one identity or statistical law at configurable
sizes and returns a :class:`SuiteResult` whose checks carry the numbers
behind the verdict.  The CLI exposes them under ``verify``; the acceptance
tests run them at their contract sizes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .invariants import ExponentTriple
from .polyfock import RationalComplex, fock_inner
from .spectral import (
    delta_contains_batch,
    haar_coords_batch,
    pushforward_report,
    radial_chi2,
    radial_phi_batch,
    schur_gram_report,
    spectral_coords,
)
from .spherical import (
    gaussian_inner,
    gaussian_vector_series,
    genfun_general,
    genfun_three,
    norm_xi,
    pair_order,
    spherical_general,
    spherical_three_table,
    verify_prop42,
    xi_three,
)
from .su2 import haar_sample, rational_haarish, rep_matrix, su2_mul


@dataclass
class CheckResult:
    name: str
    passed: bool
    info: dict = field(default_factory=dict)

    def to_dict(self):
        return {"name": self.name, "passed": self.passed, "info": self.info}


@dataclass
class SuiteResult:
    suite: str
    params: dict
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, **info):
        self.checks.append(CheckResult(name, bool(passed), info))

    def to_dict(self):
        return {"suite": self.suite, "passed": self.passed,
                "params": self.params,
                "checks": [c.to_dict() for c in self.checks]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _as_rc(x) -> RationalComplex:
    return x if isinstance(x, RationalComplex) else RationalComplex(x)


def _fact_sq(a: int, b: int, g: int) -> int:
    return (math.factorial(a) * math.factorial(b) * math.factorial(g)) ** 2


def suite_norm_formula(max_total: int = 6) -> SuiteResult:
    """Exact squared norms of the invariant vectors against the closed form."""
    res = SuiteResult("norm", {"max_total": max_total})
    worst = None
    ok = True
    for a in range(max_total + 1):
        for b in range(max_total + 1 - a):
            for g in range(max_total + 1 - a - b):
                e = ExponentTriple(a, b, g)
                xi = xi_three(e)
                if fock_inner(xi, xi) != norm_xi(e):
                    ok = False
                    worst = (a, b, g)
    n_indices = (max_total + 1) * (max_total + 2) * (max_total + 3) // 6
    res.add("brute force == (total+1)! a! b! g!", ok,
            first_failure=worst, indices=n_indices)
    return res


def suite_thm13(trials: int = 20, max_total: int = 6, seed: int = 1,
                exact_triples: int = 5, tol: float = 1e-8) -> SuiteResult:
    """Generating-function coefficients against the brute-force pairing."""
    res = SuiteResult("thm13", {"trials": trials, "max_total": max_total,
                                "seed": seed, "exact_triples": exact_triples,
                                "tol": tol})
    rng = np.random.default_rng(seed)
    for trial in range(trials):
        A, B, C = haar_sample(rng), haar_sample(rng), haar_sample(rng)
        c = spectral_coords(A, B, C)
        series = genfun_three(c.p, c.q, c.r, max_total)
        table = spherical_three_table(A, B, C, max_total)
        worst = 0.0
        for (a, b, g), brute in table.items():
            lhs = complex(series.coefficient((a, b, g))) * _fact_sq(a, b, g)
            rhs = complex(brute)
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
        res.add(f"haar triple {trial}", worst <= tol, worst_rel=worst)
    for trial in range(exact_triples):
        A, B, C = (rational_haarish(rng) for _ in range(3))
        c = spectral_coords(A, B, C)
        series = genfun_three(c.p, c.q, c.r, max_total)
        table = spherical_three_table(A, B, C, max_total)
        ok = True
        for (a, b, g), brute in table.items():
            lhs = Fraction(series.coefficient((a, b, g))) * _fact_sq(a, b, g)
            rhs = _as_rc(brute)
            if rhs.im != 0 or rhs.re != lhs:
                ok = False
        res.add(f"rational triple {trial} (bit-exact)", ok,
                p=str(c.p), q=str(c.q), r=str(c.r))
    return res


def suite_genfun111(max_total: int = 8) -> SuiteResult:
    """Exact specialization of the series at the identity coordinates."""
    res = SuiteResult("genfun111", {"max_total": max_total})
    series = genfun_three(Fraction(1), Fraction(1), Fraction(1), max_total)
    ok = True
    checked = 0
    for a in range(max_total + 1):
        for b in range(max_total + 1 - a):
            for g in range(max_total + 1 - a - b):
                want = Fraction(math.factorial(a + b + g + 1),
                                math.factorial(a) * math.factorial(b)
                                * math.factorial(g))
                if Fraction(series.coefficient((a, b, g))) != want:
                    ok = False
                checked += 1
    res.add("coefficients equal (total+1)!/(a! b! g!)", ok, checked=checked)
    return res


def suite_prop11(n_samples: int = 100_000, seed: int = 1,
                 tol: float = 1e-9) -> SuiteResult:
    """Membership of Haar-mapped coordinates, and of points sampled outside."""
    res = SuiteResult("prop11", {"n_samples": n_samples, "seed": seed,
                                 "tol": tol})
    rng = np.random.default_rng(seed)
    p, q, r = haar_coords_batch(rng, n_samples)
    inside = delta_contains_batch(p, q, r, tol=tol)
    res.add("all Haar-mapped points inside", bool(inside.all()),
            fraction=float(inside.mean()))

    # points of the cube that fail the zero-tolerance membership test
    outside = np.empty((0, 3))
    while len(outside) < n_samples:
        cand = rng.uniform(-1.0, 1.0, size=(n_samples, 3))
        keep = ~delta_contains_batch(cand[:, 0], cand[:, 1], cand[:, 2], tol=0.0)
        outside = np.vstack([outside, cand[keep]])
    outside = outside[:n_samples]
    still_out = ~delta_contains_batch(outside[:, 0], outside[:, 1],
                                      outside[:, 2], tol=0.0)
    res.add("membership test rejects all outside samples",
            bool(still_out.all()), fraction=float(still_out.mean()))
    return res


def suite_pushforward(n_samples: int = 1_000_000, seed: int = 1) -> SuiteResult:
    """Haar pushforward against the uniform measure on the body."""
    rep = pushforward_report(n_samples, seed)
    res = SuiteResult("pushforward", {"n_samples": n_samples, "seed": seed})
    res.add("membership of mapped points", rep.membership_fraction == 1.0,
            fraction=rep.membership_fraction)
    for c in rep.checks:
        res.add(c.name, c.passed, estimate=c.estimate, stderr=c.stderr,
                reference=c.reference)
    res.add("8x8x8 histogram chi-square at 1%", rep.histogram_passed,
            chi2=rep.histogram_chi2, dof=rep.histogram_dof,
            pvalue=rep.histogram_pvalue)
    return res


def suite_radial(n_samples: int = 100_000, seed: int = 1, bins: int = 40,
                 significance: float = 0.01) -> SuiteResult:
    """Eigenphase density of reduced Haar pairs against sin^2."""
    res = SuiteResult("radial", {"n_samples": n_samples, "seed": seed,
                                 "bins": bins, "significance": significance})
    rng = np.random.default_rng(seed)
    phis = radial_phi_batch(rng, n_samples)
    chi2, dof, pvalue = radial_chi2(phis, bins)
    res.add("chi-square fit against sin^2 density", pvalue >= significance,
            chi2=chi2, dof=dof, pvalue=pvalue)
    return res


def suite_schur(max_degree_sum: int = 6, n_samples: int = 1_000_000,
                seed: int = 1) -> SuiteResult:
    """Monte-Carlo Gram matrix of the spherical family."""
    rep = schur_gram_report(max_degree_sum, n_samples, seed)
    res = SuiteResult("schur", {"max_degree_sum": max_degree_sum,
                                "n_samples": n_samples, "seed": seed})
    n_diag = sum(1 for e in rep.entries if e.e1 == e.e2)
    res.add("diagonal entries match norm^2/dim within 3 sigma",
            all(e.passed for e in rep.entries if e.e1 == e.e2),
            entries=n_diag)
    res.add("off-diagonal entries vanish within 3 sigma",
            all(e.passed for e in rep.entries if e.e1 != e.e2),
            entries=len(rep.entries) - n_diag)
    res.add("worst deviation", rep.worst_sigma() <= 3.0,
            worst_sigma=rep.worst_sigma())
    return res


def suite_gaussian(n_pairs: int = 50, seed: int = 1, degree: int = 24,
                   max_norm: float = 0.5, tol: float = 1e-6) -> SuiteResult:
    """Determinant formula for Gaussian pairings against the series."""
    res = SuiteResult("gaussian", {"n_pairs": n_pairs, "seed": seed,
                                   "degree": degree, "max_norm": max_norm,
                                   "tol": tol})
    rng = np.random.default_rng(seed)
    worst = 0.0
    for trial in range(n_pairs):
        n = 2 if trial % 2 == 0 else 3
        a = _random_symmetric(rng, n, max_norm)
        b = _random_symmetric(rng, n, max_norm)
        direct = gaussian_inner(a, b)
        series = fock_inner(gaussian_vector_series(a, degree),
                            gaussian_vector_series(b, degree))
        worst = max(worst, abs(direct - complex(series)))
    res.add("det(1 - A conj B)^(-1/2) matches degree-24 pairing",
            worst <= tol, worst_abs=worst)
    return res


def _random_symmetric(rng: np.random.Generator, n: int, max_norm: float):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    m = (m + m.T) / 2
    scale = max_norm * rng.uniform(0.5, 1.0)
    return m * (scale / np.linalg.norm(m, 2))


def _exponent_matrices_from_index(idx, l: int):
    pairs = pair_order(l)
    npairs = len(pairs)
    amat = [[0] * l for _ in range(l)]
    bmat = [[0] * l for _ in range(l)]
    for k, (i, j) in enumerate(pairs):
        amat[i][j] = amat[j][i] = idx[k]
        bmat[i][j] = bmat[j][i] = idx[npairs + k]
    return amat, bmat


def _thm41_check_point(As, cutoff: int, tol: float | None):
    """Worst mismatch of the l-factor series against the brute pairing.

    With tol None the comparison is bit-exact and the return value is the
    count of mismatching coefficients; otherwise the worst relative error.
    """
    l = len(As)
    series = genfun_general(As, cutoff)
    npairs = l * (l - 1) // 2
    worst = 0.0
    bad = 0
    for idx in _all_indices(2 * npairs, cutoff):
        amat, bmat = _exponent_matrices_from_index(idx, l)
        coeff = series.coefficient(idx)
        if any(sum(amat[i]) != sum(bmat[i]) for i in range(l)):
            if tol is None:
                bad += 0 if coeff == 0 else 1
            else:
                worst = max(worst, abs(complex(coeff)))
            continue
        val = spherical_general(amat, bmat, As)
        fact = 1
        for k in idx:
            fact *= math.factorial(k)
        if tol is None:
            lhs = coeff * fact
            rhs = _as_rc(val)
            if _as_rc(lhs) != rhs:
                bad += 1
        else:
            lhs = complex(coeff) * fact
            rhs = complex(val)
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    return bad if tol is None else worst


def _all_indices(arity: int, max_total: int):
    def gen(prefix, remaining, slots):
        if slots == 0:
            yield tuple(prefix)
            return
        for v in range(remaining + 1):
            yield from gen(prefix + [v], remaining - v, slots - 1)
    yield from gen([], max_total, arity)


def suite_thm41(l2_pairs: int = 10, l3_triples: int = 5, cutoff: int = 4,
                seed: int = 1, tol: float = 1e-8,
                exact_points: int = 2) -> SuiteResult:
    """The l-factor generating function against brute-force pairings."""
    res = SuiteResult("thm41", {"l2_pairs": l2_pairs, "l3_triples": l3_triples,
                                "cutoff": cutoff, "seed": seed, "tol": tol,
                                "exact_points": exact_points})
    rng = np.random.default_rng(seed)
    for trial in range(l2_pairs):
        As = [haar_sample(rng) for _ in range(2)]
        worst = _thm41_check_point(As, cutoff, tol)
        res.add(f"l=2 haar pair {trial}", worst <= tol, worst_rel=worst)
    for trial in range(l3_triples):
        As = [haar_sample(rng) for _ in range(3)]
        worst = _thm41_check_point(As, cutoff, tol)
        res.add(f"l=3 haar triple {trial}", worst <= tol, worst_rel=worst)
    for trial in range(exact_points):
        for l in (2, 3):
            As = [rational_haarish(rng) for _ in range(l)]
            bad = _thm41_check_point(As, cutoff, None)
            res.add(f"l={l} rational point {trial} (bit-exact)", bad == 0,
                    mismatches=bad)

    # reduction to the three-factor series through the pairing
    # u = t12 t'12, v = t13 t'13, w = t23 t'23
    for trial in range(l3_triples):
        As = [haar_sample(rng) for _ in range(3)]
        series = genfun_general(As, cutoff)
        c = spectral_coords(*As)
        three = genfun_three(c.p, c.q, c.r, cutoff // 2)
        worst = 0.0
        for a in range(cutoff // 2 + 1):
            for b in range(cutoff // 2 + 1 - a):
                for g in range(cutoff // 2 + 1 - a - b):
                    got = complex(series.coefficient((a, b, g, a, b, g)))
                    want = complex(three.coefficient((a, b, g)))
                    worst = max(worst, abs(got - want) / max(1.0, abs(want)))
        res.add(f"l=3 reduction to three-factor series {trial}",
                worst <= tol, worst_rel=worst)
    return res


def suite_prop42(cutoff: int = 6) -> SuiteResult:
    """Exact determinant identity for both matrix sizes, both conventions."""
    res = SuiteResult("prop42", {"cutoff": cutoff})
    for l in (2, 3):
        rep = verify_prop42(l, cutoff)
        res.add(f"l={l} skew convention", rep.equal,
                lhs_terms=rep.lhs_terms, rhs_terms=rep.rhs_terms)
    printed = verify_prop42(3, cutoff, convention="printed")
    res.add("l=3 printed sign pattern fails (documented)",
            not printed.equal,
            first_difference=(printed.to_dict()["first_difference"]))
    return res


def suite_rep(max_degree: int = 8, trials: int = 3, seed: int = 1,
              tol: float = 1e-9) -> SuiteResult:
    """Unitarity and the homomorphism law of the substitution action."""
    res = SuiteResult("rep", {"max_degree": max_degree, "trials": trials,
                              "seed": seed, "tol": tol})
    rng = np.random.default_rng(seed)
    worst_u = 0.0
    worst_h = 0.0
    for n in range(1, max_degree + 1):
        for _ in range(trials):
            g, h = haar_sample(rng), haar_sample(rng)
            m1 = rep_matrix(g, n)
            m2 = rep_matrix(h, n)
            m12 = rep_matrix(su2_mul(g, h), n)
            eye = np.eye(n + 1)
            worst_u = max(worst_u, float(np.abs(m1.conj().T @ m1 - eye).max()))
            worst_h = max(worst_h, float(np.abs(m1 @ m2 - m12).max()))
    res.add("operator matrices unitary", worst_u <= tol, worst=worst_u)
    res.add("T(g) T(h) = T(gh)", worst_h <= tol, worst=worst_h)
    return res


def suite_reproducibility(seed: int = 1) -> SuiteResult:
    """Same-seed reruns of the randomized suites produce identical reports."""
    res = SuiteResult("reproducibility", {"seed": seed})
    small = [
        ("radial", lambda: suite_radial(20_000, seed=seed)),
        ("pushforward", lambda: suite_pushforward(50_000, seed=seed)),
        ("schur", lambda: suite_schur(4, 50_000, seed=seed)),
        ("thm13", lambda: suite_thm13(3, 4, seed=seed, exact_triples=1)),
        ("thm41", lambda: suite_thm41(2, 1, cutoff=3, seed=seed, exact_points=1)),
        ("gaussian", lambda: suite_gaussian(6, seed=seed, degree=12)),
        ("prop11", lambda: suite_prop11(20_000, seed=seed)),
    ]
    for name, runner in small:
        first = runner().to_json()
        second = runner().to_json()
        res.add(f"{name} rerun is byte-identical", first == second,
                bytes=len(first))
    return res


SUITES = {
    "norm": suite_norm_formula,
    "thm13": suite_thm13,
    "genfun111": suite_genfun111,
    "prop11": suite_prop11,
    "pushforward": suite_pushforward,
    "radial": suite_radial,
    "schur": suite_schur,
    "gaussian": suite_gaussian,
    "thm41": suite_thm41,
    "prop42": suite_prop42,
    "rep": suite_rep,
    "reproducibility": suite_reproducibility,
}


def run_suite(name: str, **overrides) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](**overrides)


def run_all(quick: bool = False, seed: int = 1) -> list[SuiteResult]:
    """Every suite at contract sizes, or scaled down if quick is set."""
    if quick:
        return [
            suite_norm_formula(4),
            suite_thm13(4, 4, seed=seed, exact_triples=1),
            suite_genfun111(5),
            suite_prop11(20_000, seed=seed),
            suite_pushforward(50_000, seed=seed),
            suite_radial(20_000, seed=seed),
            suite_schur(4, 50_000, seed=seed),
            suite_gaussian(10, seed=seed, degree=16),
            suite_thm41(3, 1, cutoff=3, seed=seed, exact_points=1),
            suite_prop42(4),
            suite_rep(5, 2, seed=seed),
            suite_reproducibility(seed=seed),
        ]
    return [
        suite_norm_formula(),
        suite_thm13(seed=seed),
        suite_genfun111(),
        suite_prop11(seed=seed),
        suite_pushforward(seed=seed),
        suite_radial(seed=seed),
        suite_schur(seed=seed),
        suite_gaussian(seed=seed),
        suite_thm41(seed=seed),
        suite_prop42(),
        suite_rep(seed=seed),
        suite_reproducibility(seed=seed),
    ]
