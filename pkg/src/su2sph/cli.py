"""Command-line front end: evaluate, verify, sample, export, report.

Output schemas
--------------
``eval`` rows: indices, group-point descriptor, value (real/imaginary
parts), and, when both evaluation paths are requested, the series value
and the absolute discrepancy.

``sample`` and ``export haar-cloud`` rows: one coordinate triple (p, q, r)
per line.  ``export delta-sections`` rows: height r0, the two semi-axes
(along p = q and p = -q), and the area.  ``export genfun`` rows: exponents
(alpha, beta, gamma) and the series coefficient at the requested
coordinates (with an exact rational column in exact mode).

All randomized commands are deterministic for a fixed ``--seed``; CSV uses
17 significant digits so downstream checks do not lose precision.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .invariants import ExponentTriple, exponent_matrix, exponents_from_degrees
from .polyfock import RationalComplex
from .spectral import (
    delta_section,
    delta_uniform_batch,
    haar_coords_batch,
    radial_chi2,
    radial_phi_batch,
    spectral_coords,
)
from .spherical import SphericalValue, genfun_three, spherical_general, spherical_three
from .su2 import SU2Element, haar_sample, su2_from_angle, su2_new, su2_rational
from .suites import SUITES, run_all, run_suite

_FMT = "%.17g"


def _fmt(x) -> str:
    return _FMT % float(x)


def parse_complex(text: str) -> complex:
    """Parse 're+imi' style complex scalars (also plain reals)."""
    cleaned = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(cleaned)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"cannot parse complex number {text!r}") from exc


def parse_factors(text: str) -> list[SU2Element]:
    """Parse '(a,b);(a,b);...' into validated group elements."""
    out = []
    for part in text.split(";"):
        part = part.strip()
        if part.startswith("(") and part.endswith(")"):
            part = part[1:-1]
        pieces = part.split(",")
        if len(pieces) != 2:
            raise argparse.ArgumentTypeError(f"factor {part!r} is not a pair")
        out.append(su2_new(parse_complex(pieces[0]), parse_complex(pieces[1])))
    return out


def parse_rational_point(text: str) -> list[SU2Element]:
    """Parse 't1,t2,t3;t1,t2,t3;...' stereographic rational parameters."""
    out = []
    for part in text.split(";"):
        pieces = [Fraction(p.strip()) for p in part.split(",")]
        if len(pieces) != 3:
            raise argparse.ArgumentTypeError(
                f"rational point {part!r} needs three parameters")
        out.append(su2_rational(*pieces))
    return out


def _group_point(args, n_factors: int, exact: bool):
    """Resolve the group-point flags into a list of elements + descriptor."""
    sources = [s for s in ("identity", "haar_seed", "canonical", "factors",
                           "rational")
               if getattr(args, s, None) not in (None, False)]
    if len(sources) != 1:
        raise SystemExit("specify exactly one group-point source: --identity, "
                         "--haar-seed, --canonical, --factors or --rational")
    source = sources[0]
    if source == "identity":
        one = su2_rational(Fraction(0), Fraction(0), Fraction(0)) if exact \
            else su2_new(1.0, 0.0)
        return [one] * n_factors, {"kind": "identity"}
    if source == "haar_seed":
        if exact:
            raise SystemExit("--mode exact cannot be combined with --haar-seed")
        rng = np.random.default_rng(args.haar_seed)
        return ([haar_sample(rng) for _ in range(n_factors)],
                {"kind": "haar", "seed": args.haar_seed})
    if source == "canonical":
        if exact:
            raise SystemExit("--mode exact cannot be combined with --canonical")
        if n_factors != 3:
            raise SystemExit("--canonical describes a three-factor point")
        phi = float(args.canonical[0])
        a = parse_complex(args.canonical[1])
        b = parse_complex(args.canonical[2])
        return ([su2_new(1.0, 0.0), su2_from_angle(phi), su2_new(a, b)],
                {"kind": "canonical", "phi": phi,
                 "a": [a.real, a.imag], "b": [b.real, b.imag]})
    if source == "factors":
        if exact:
            raise SystemExit("--mode exact needs --rational or --identity "
                             "group points")
        els = parse_factors(args.factors)
        if len(els) != n_factors:
            raise SystemExit(f"expected {n_factors} factors, got {len(els)}")
        return els, {"kind": "factors", "count": len(els)}
    els = parse_rational_point(args.rational)
    if len(els) != n_factors:
        raise SystemExit(f"expected {n_factors} factors, got {len(els)}")
    return els, {"kind": "rational", "count": len(els)}


def _write_text(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(path).write_text(text)


def _rows_to_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _json_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


# --- eval -------------------------------------------------------------------


def cmd_eval(args) -> int:
    exact = args.mode == "exact"
    if args.alpha_matrix is not None:
        amat = exponent_matrix(json.loads(Path(args.alpha_matrix).read_text()))
        bmat = amat
        if args.beta_matrix is not None:
            bmat = exponent_matrix(json.loads(Path(args.beta_matrix).read_text()))
        factors, point = _group_point(args, len(amat), exact)
        value = spherical_general(amat, bmat, factors)
        sval = SphericalValue(value=complex(value),
                              indices={"alpha": [list(r) for r in amat],
                                       "beta": [list(r) for r in bmat]},
                              point=point)
        payload = {"values": [sval.to_dict()]}
        return _emit_eval(args, payload, [
            ["matrix", _fmt(complex(value).real), _fmt(complex(value).imag)]],
            ["indices", "value_re", "value_im"])

    if args.degrees is not None:
        e = exponents_from_degrees(*args.degrees)
        if e is None:
            msg = {"admissible": False, "degrees": list(args.degrees)}
            _write_text(args.out, _json_dumps(msg) if args.format == "json"
                        else f"not-admissible degrees {tuple(args.degrees)}")
            return 0
        triple = e
    elif args.alpha is not None:
        triple = ExponentTriple(*args.alpha)
    else:
        raise SystemExit("one of --alpha, --degrees or --alpha-matrix is required")

    factors, point = _group_point(args, 3, exact)
    rows = []
    header = ["alpha", "beta", "gamma", "value_re", "value_im"]
    brute = None
    if args.path in ("brute", "both"):
        brute = spherical_three(triple, *factors)
    series_val = None
    if args.path in ("genfun", "both"):
        coords = spectral_coords(*factors)
        cutoff = max(args.cutoff, triple.total())
        series = genfun_three(coords.p, coords.q, coords.r, cutoff)
        coeff = series.coefficient(triple.as_tuple())
        scale = (math.factorial(triple.alpha) * math.factorial(triple.beta)
                 * math.factorial(triple.gamma)) ** 2
        series_val = coeff * scale
    main_value = brute if brute is not None else series_val
    sval = SphericalValue(value=complex(main_value),
                          indices=triple.as_tuple(), point=point)
    payload = sval.to_dict()
    if exact:
        rc = main_value if isinstance(main_value, RationalComplex) \
            else RationalComplex(main_value)
        payload["re_exact"] = str(rc.re)
        payload["im_exact"] = str(rc.im)
    row = [triple.alpha, triple.beta, triple.gamma,
           _fmt(complex(main_value).real), _fmt(complex(main_value).imag)]
    if args.path == "both":
        diff = abs(complex(brute) - complex(series_val))
        payload["genfun_re"] = complex(series_val).real
        payload["genfun_im"] = complex(series_val).imag
        payload["abs_discrepancy"] = diff
        payload["within_tol"] = diff <= args.tol * max(1.0, abs(complex(brute)))
        header += ["genfun_re", "genfun_im", "abs_discrepancy"]
        row += [_fmt(complex(series_val).real), _fmt(complex(series_val).imag),
                _fmt(diff)]
    return _emit_eval(args, payload, [row], header)


def _emit_eval(args, payload, rows, header) -> int:
    if args.format == "json":
        _write_text(args.out, _json_dumps(payload))
    else:
        _write_text(args.out, _rows_to_csv(header, rows))
    return 0


# --- verify -----------------------------------------------------------------


def _suite_overrides(name: str, args) -> dict:
    over = {}
    if args.seed is not None and "seed" in _suite_params(name):
        over["seed"] = args.seed
    if args.samples is not None:
        for key in ("n_samples",):
            if key in _suite_params(name):
                over[key] = args.samples
    if args.trials is not None and "trials" in _suite_params(name):
        over["trials"] = args.trials
    if args.cutoff is not None:
        for key in ("cutoff", "max_total"):
            if key in _suite_params(name):
                over[key] = args.cutoff
    return over


def _suite_params(name: str) -> set:
    import inspect

    return set(inspect.signature(SUITES[name]).parameters)


def cmd_verify(args) -> int:
    if args.suite == "all":
        results = run_all(quick=args.quick,
                          seed=args.seed if args.seed is not None else 1)
    else:
        if args.suite not in SUITES:
            raise SystemExit(f"unknown suite {args.suite!r}; choose from "
                             f"{sorted(SUITES)} or 'all'")
        results = [run_suite(args.suite, **_suite_overrides(args.suite, args))]

    all_passed = all(r.passed for r in results)
    for r in results:
        for c in r.checks:
            mark = "PASS" if c.passed else "FAIL"
            extra = " ".join(f"{k}={v}" for k, v in c.info.items())
            print(f"[{mark}] {r.suite}: {c.name}" + (f" ({extra})" if extra else ""))
        print(f"[{'PASS' if r.passed else 'FAIL'}] suite {r.suite}")
    if args.out:
        doc = {"passed": all_passed, "suites": [r.to_dict() for r in results]}
        if args.format == "json":
            _write_text(args.out, _json_dumps(doc))
        else:
            rows = [[r.suite, c.name, int(c.passed)]
                    for r in results for c in r.checks]
            _write_text(args.out, _rows_to_csv(["suite", "check", "passed"], rows))
    return 0 if all_passed else 1


# --- sample -----------------------------------------------------------------


def cmd_sample(args) -> int:
    rng = np.random.default_rng(args.seed)
    if args.kind == "haar-triples":
        p, q, r = haar_coords_batch(rng, args.samples)
    elif args.kind == "delta-uniform":
        p, q, r = delta_uniform_batch(rng, args.samples)
    else:
        raise SystemExit(f"unknown sample kind {args.kind!r}")
    rows = [[_fmt(a), _fmt(b), _fmt(c)] for a, b, c in zip(p, q, r)]
    if args.format == "json":
        doc = {"kind": args.kind, "seed": args.seed,
               "rows": [[float(x) for x in row] for row in rows]}
        _write_text(args.out, _json_dumps(doc))
    else:
        _write_text(args.out, _rows_to_csv(["p", "q", "r"], rows))
    return 0


# --- export -----------------------------------------------------------------


def cmd_export(args) -> int:
    from . import plots

    if args.kind == "delta-sections":
        heights = np.linspace(-1.0, 1.0, args.count + 2)[1:-1]
        rows = []
        for r0 in heights:
            sec = delta_section(float(r0))
            rows.append([_fmt(sec.r0), _fmt(sec.semi_axes[0]),
                         _fmt(sec.semi_axes[1]), _fmt(sec.area)])
        header = ["r0", "semi_axis_pq", "semi_axis_pmq", "area"]
        payload = {"kind": args.kind,
                   "rows": [[float(x) for x in r] for r in rows]}
        if args.plot:
            plots.render_sections_figure(args.plot, [float(h) for h in heights])
    elif args.kind == "haar-cloud":
        rng = np.random.default_rng(args.seed)
        p, q, r = haar_coords_batch(rng, args.samples)
        rows = [[_fmt(a), _fmt(b), _fmt(c)] for a, b, c in zip(p, q, r)]
        header = ["p", "q", "r"]
        payload = {"kind": args.kind, "seed": args.seed,
                   "rows": [[float(x) for x in row] for row in rows]}
        if args.plot:
            plots.render_cloud_figure(args.plot, p, q, r)
    elif args.kind == "genfun":
        exact = all(_is_fraction(t) for t in (args.p, args.q, args.r))
        conv = Fraction if exact else float
        p, q, r = conv(args.p), conv(args.q), conv(args.r)
        series = genfun_three(p, q, r, args.cutoff)
        rows = []
        coeff_rows = []
        for idx in sorted(series.terms, key=lambda k: (sum(k), k)):
            val = series.terms[idx]
            row = [idx[0], idx[1], idx[2], _fmt(val)]
            if exact:
                row.append(str(Fraction(val)))
            rows.append(row)
            coeff_rows.append((idx[0], idx[1], idx[2], float(val)))
        header = ["alpha", "beta", "gamma", "coefficient"]
        if exact:
            header.append("coefficient_exact")
        payload = {"kind": args.kind, "p": str(args.p), "q": str(args.q),
                   "r": str(args.r), "cutoff": args.cutoff,
                   "rows": [[r_[0], r_[1], r_[2], float(r_[3])] for r_ in rows]}
        if args.plot:
            plots.render_genfun_figure(args.plot, coeff_rows)
    else:
        raise SystemExit(f"unknown export kind {args.kind!r}")

    if args.format == "json":
        _write_text(args.out, _json_dumps(payload))
    else:
        _write_text(args.out, _rows_to_csv(header, rows))
    return 0


def _is_fraction(text: str) -> bool:
    try:
        Fraction(text)
        return True
    except (ValueError, ZeroDivisionError):
        return False


# --- report -----------------------------------------------------------------


def cmd_report(args) -> int:
    """Bundle: delimited exports, their figures, and a verification summary."""
    from . import plots

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(args.seed)

    heights = np.linspace(-1.0, 1.0, 43)[1:-1]
    rows = []
    for r0 in heights:
        sec = delta_section(float(r0))
        rows.append([_fmt(sec.r0), _fmt(sec.semi_axes[0]),
                     _fmt(sec.semi_axes[1]), _fmt(sec.area)])
    (out / "sections.csv").write_text(
        _rows_to_csv(["r0", "semi_axis_pq", "semi_axis_pmq", "area"], rows))
    plots.render_sections_figure(out / "sections.png",
                                 [float(h) for h in heights])

    p, q, r = haar_coords_batch(rng, args.samples)
    (out / "haar_cloud.csv").write_text(_rows_to_csv(
        ["p", "q", "r"],
        [[_fmt(a), _fmt(b), _fmt(c)] for a, b, c in zip(p, q, r)]))
    plots.render_cloud_figure(out / "haar_cloud.png", p, q, r)

    phis = radial_phi_batch(rng, min(args.samples, 20_000))
    chi2, dof, pvalue = radial_chi2(phis)
    (out / "radial.csv").write_text(_rows_to_csv(
        ["phi"], [[_fmt(x)] for x in phis]))
    plots.render_radial_figure(out / "radial.png", phis)

    series = genfun_three(Fraction(1), Fraction(1), Fraction(1), 6)
    grows = []
    for idx in sorted(series.terms, key=lambda k: (sum(k), k)):
        grows.append([idx[0], idx[1], idx[2], _fmt(series.terms[idx]),
                      str(Fraction(series.terms[idx]))])
    (out / "genfun_identity.csv").write_text(_rows_to_csv(
        ["alpha", "beta", "gamma", "coefficient", "coefficient_exact"], grows))
    plots.render_genfun_figure(
        out / "genfun_identity.png",
        [(r_[0], r_[1], r_[2], float(r_[3])) for r_ in grows])

    results = run_all(quick=not args.full, seed=args.seed)
    summary = {"passed": all(r.passed for r in results),
               "radial_chi2": {"chi2": chi2, "dof": dof, "pvalue": pvalue},
               "suites": [r.to_dict() for r in results]}
    (out / "verify_summary.json").write_text(_json_dumps(summary))
    (out / "verify_summary.csv").write_text(_rows_to_csv(
        ["suite", "check", "passed"],
        [[r.suite, c.name, int(c.passed)] for r in results for c in r.checks]))

    for r in results:
        print(f"[{'PASS' if r.passed else 'FAIL'}] suite {r.suite}")
    print(f"report written to {out}")
    return 0 if summary["passed"] else 1


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="su2sph",
        description="Spherical functions on products of SU(2): evaluation, "
                    "verification suites, sampling, and plot-ready exports.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_point_flags(p):
        p.add_argument("--identity", action="store_true",
                       help="evaluate at the identity point")
        p.add_argument("--haar-seed", dest="haar_seed", type=int, default=None,
                       help="Haar-random point with this seed")
        p.add_argument("--canonical", nargs=3, metavar=("PHI", "A", "B"),
                       default=None,
                       help="canonical three-factor point (angle, a, b)")
        p.add_argument("--factors", type=str, default=None,
                       help="explicit factors '(a,b);(a,b);...' with complex "
                            "entries like 0.6+0.8i")
        p.add_argument("--rational", type=str, default=None,
                       help="exact rational factors 't1,t2,t3;...' "
                            "(stereographic parameters)")

    pe = sub.add_parser("eval", help="evaluate spherical functions")
    pe.add_argument("--alpha", nargs=3, type=int, metavar=("A", "B", "G"),
                    default=None, help="exponent triple")
    pe.add_argument("--degrees", nargs=3, type=int, metavar=("N", "M", "K"),
                    default=None,
                    help="factor degrees; reports not-admissible cases")
    pe.add_argument("--alpha-matrix", type=str, default=None,
                    help="JSON file with an exponent matrix (l factors)")
    pe.add_argument("--beta-matrix", type=str, default=None,
                    help="JSON file with the second exponent matrix")
    add_point_flags(pe)
    pe.add_argument("--path", choices=("brute", "genfun", "both"),
                    default="brute", help="evaluation route")
    pe.add_argument("--cutoff", type=int, default=6)
    pe.add_argument("--mode", choices=("exact", "float"), default="float")
    pe.add_argument("--tol", type=float, default=1e-9)
    pe.add_argument("--format", choices=("json", "csv"), default="json")
    pe.add_argument("--out", type=str, default=None)
    pe.set_defaults(func=cmd_eval)

    pv = sub.add_parser("verify", help="run a verification suite")
    pv.add_argument("suite", type=str,
                    help=f"one of {sorted(SUITES)} or 'all'")
    pv.add_argument("--trials", type=int, default=None)
    pv.add_argument("--samples", type=int, default=None)
    pv.add_argument("--cutoff", type=int, default=None)
    pv.add_argument("--seed", type=int, default=None)
    pv.add_argument("--quick", action="store_true",
                    help="scaled-down sizes for 'all'")
    pv.add_argument("--format", choices=("json", "csv"), default="json")
    pv.add_argument("--out", type=str, default=None)
    pv.set_defaults(func=cmd_verify)

    ps = sub.add_parser("sample", help="draw coordinate samples")
    ps.add_argument("--kind", choices=("haar-triples", "delta-uniform"),
                    default="haar-triples")
    ps.add_argument("--samples", type=int, default=1000)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--format", choices=("json", "csv"), default="csv")
    ps.add_argument("--out", type=str, default=None)
    ps.set_defaults(func=cmd_sample)

    px = sub.add_parser("export", help="plot-ready data files")
    px.add_argument("kind", choices=("delta-sections", "haar-cloud", "genfun"))
    px.add_argument("--count", type=int, default=41,
                    help="number of section heights")
    px.add_argument("--samples", type=int, default=10_000)
    px.add_argument("--seed", type=int, default=0)
    px.add_argument("--p", type=str, default="1")
    px.add_argument("--q", type=str, default="1")
    px.add_argument("--r", type=str, default="1")
    px.add_argument("--cutoff", type=int, default=4)
    px.add_argument("--format", choices=("json", "csv"), default="csv")
    px.add_argument("--out", type=str, default=None)
    px.add_argument("--plot", type=str, default=None,
                    help="also render the matching figure to this path")
    px.set_defaults(func=cmd_export)

    pr = sub.add_parser("report",
                        help="write delimited outputs plus rendered figures "
                             "and a verification summary")
    pr.add_argument("--out-dir", type=str, required=True)
    pr.add_argument("--seed", type=int, default=1)
    pr.add_argument("--samples", type=int, default=20_000)
    pr.add_argument("--full", action="store_true",
                    help="contract-size verification instead of quick")
    pr.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
