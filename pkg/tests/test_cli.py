"""End-to-end exercises of the command-line surface."""

import json
import math
import subprocess
import sys

import pytest

from su2sph.cli import main, parse_complex, parse_factors


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


def test_parse_complex():
    assert parse_complex("1.5+2i") == 1.5 + 2j
    assert parse_complex("-0.25i") == -0.25j
    assert parse_complex("3") == 3 + 0j
    with pytest.raises(Exception):
        parse_complex("abc")


def test_parse_factors():
    els = parse_factors("(1,0);(0.6+0.8i,0)")
    assert len(els) == 2
    assert abs(complex(els[1].a) - (0.6 + 0.8j)) < 1e-12


def test_eval_identity_values(capsys):
    code, out = run_cli(["eval", "--alpha", "0", "0", "0", "--identity"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["re"] == 1.0

    code, out = run_cli(["eval", "--alpha", "1", "0", "0", "--identity"], capsys)
    doc = json.loads(out)
    assert doc["re"] == 2.0


def test_eval_haar_seed_matches_series(capsys):
    code, out = run_cli(["eval", "--alpha", "1", "0", "0",
                         "--haar-seed", "7", "--path", "both"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["abs_discrepancy"] < 1e-10


def test_eval_not_admissible_degrees(capsys):
    code, out = run_cli(["eval", "--degrees", "1", "1", "1", "--identity"],
                        capsys)
    assert code == 0
    assert json.loads(out) == {"admissible": False, "degrees": [1, 1, 1]}


def test_eval_degrees_resolve_to_exponents(capsys):
    code, out = run_cli(["eval", "--degrees", "1", "1", "2", "--identity"],
                        capsys)
    doc = json.loads(out)
    assert doc["indices"] == [0, 1, 1]
    assert doc["re"] == float(math.factorial(3))


def test_eval_exact_mode(capsys):
    code, out = run_cli(["eval", "--alpha", "1", "1", "0", "--identity",
                         "--mode", "exact"], capsys)
    doc = json.loads(out)
    assert doc["re_exact"] == "6"


def test_eval_canonical_point(capsys):
    # at (I, diag(e^{i phi}, e^{-i phi}), third) the (1,0,0) value is 2 cos(phi)
    code, out = run_cli(["eval", "--alpha", "1", "0", "0",
                         "--canonical", "0.7", "0.28+0.1i", "0.9547774609824008"],
                        capsys)
    assert code == 0
    doc = json.loads(out)
    assert abs(doc["re"] - 2 * math.cos(0.7)) < 1e-9


def test_eval_explicit_factors(capsys):
    code, out = run_cli(["eval", "--alpha", "0", "1", "0",
                         "--factors", "(1,0);(1,0);(0.6+0.8i,0)"], capsys)
    assert code == 0
    # q = Re(a_1 conj(a_3)) = 0.6, value 2q
    assert abs(json.loads(out)["re"] - 1.2) < 1e-9


def test_eval_requires_single_point_source(capsys):
    with pytest.raises(SystemExit):
        main(["eval", "--alpha", "0", "0", "0"])
    with pytest.raises(SystemExit):
        main(["eval", "--alpha", "0", "0", "0", "--identity",
              "--haar-seed", "1"])


def test_eval_matrix_indices(tmp_path, capsys):
    mat = tmp_path / "alpha.json"
    mat.write_text("[[0,2],[2,0]]")
    code, out = run_cli(["eval", "--alpha-matrix", str(mat), "--identity"],
                        capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["values"][0]["re"] == float(math.factorial(3) * math.factorial(2))


def test_eval_csv_format(capsys):
    code, out = run_cli(["eval", "--alpha", "1", "0", "0", "--identity",
                         "--format", "csv"], capsys)
    lines = out.strip().splitlines()
    assert lines[0] == "alpha,beta,gamma,value_re,value_im"
    assert lines[1].startswith("1,0,0,2,")


def test_verify_suite_exit_codes(capsys):
    code, _ = run_cli(["verify", "norm", "--cutoff", "3"], capsys)
    assert code == 0
    with pytest.raises(SystemExit):
        main(["verify", "nonsense"])


def test_verify_failing_suite_exits_nonzero(capsys, monkeypatch):
    from su2sph import suites
    from su2sph.suites import SuiteResult

    def broken():
        res = SuiteResult("broken", {})
        res.add("always fails", False, detail="stub")
        return res

    monkeypatch.setitem(suites.SUITES, "broken", broken)
    code, out = run_cli(["verify", "broken"], capsys)
    assert code == 1
    assert "[FAIL]" in out


def test_verify_writes_json_report(tmp_path, capsys):
    out_file = tmp_path / "report.json"
    code, _ = run_cli(["verify", "prop42", "--cutoff", "4",
                       "--out", str(out_file)], capsys)
    assert code == 0
    doc = json.loads(out_file.read_text())
    assert doc["passed"] is True
    # round trip: parse then re-serialize is the identity
    assert json.dumps(doc, sort_keys=True, separators=(",", ":")) == \
        out_file.read_text()


def test_sample_deterministic(tmp_path, capsys):
    f1 = tmp_path / "a.csv"
    f2 = tmp_path / "b.csv"
    run_cli(["sample", "--kind", "delta-uniform", "--samples", "50",
             "--seed", "3", "--out", str(f1)], capsys)
    run_cli(["sample", "--kind", "delta-uniform", "--samples", "50",
             "--seed", "3", "--out", str(f2)], capsys)
    assert f1.read_bytes() == f2.read_bytes()
    header = f1.read_text().splitlines()[0]
    assert header == "p,q,r"


def test_export_sections(tmp_path, capsys):
    out_file = tmp_path / "sections.csv"
    code, _ = run_cli(["export", "delta-sections", "--count", "41",
                       "--out", str(out_file)], capsys)
    assert code == 0
    lines = out_file.read_text().splitlines()
    assert len(lines) == 42  # header + 41 rows
    r0, ax1, ax2, area = (float(x) for x in lines[21].split(","))
    assert abs(r0) < 1e-12          # middle row is the equator
    assert abs(area - math.pi) < 1e-12


def test_export_haar_cloud_inside(tmp_path, capsys):
    from su2sph.spectral import SpectralCoords, delta_contains

    out_file = tmp_path / "cloud.csv"
    code, _ = run_cli(["export", "haar-cloud", "--samples", "500",
                       "--seed", "1", "--out", str(out_file)], capsys)
    assert code == 0
    rows = out_file.read_text().splitlines()[1:]
    assert len(rows) == 500
    for row in rows:
        p, q, r = (float(x) for x in row.split(","))
        assert delta_contains(SpectralCoords(p, q, r), tol=1e-9)


def test_export_genfun_identity_table(tmp_path, capsys):
    out_file = tmp_path / "gf.csv"
    code, _ = run_cli(["export", "genfun", "--p", "1", "--q", "1", "--r", "1",
                       "--cutoff", "4", "--out", str(out_file)], capsys)
    assert code == 0
    for line in out_file.read_text().splitlines()[1:]:
        a, b, g, coeff, exact = line.split(",")
        a, b, g = int(a), int(b), int(g)
        want = math.factorial(a + b + g + 1) // (
            math.factorial(a) * math.factorial(b) * math.factorial(g))
        assert int(exact) == want


def test_export_plot_renders(tmp_path, capsys):
    fig = tmp_path / "sections.png"
    run_cli(["export", "delta-sections", "--count", "11",
             "--out", str(tmp_path / "s.csv"), "--plot", str(fig)], capsys)
    assert fig.exists() and fig.stat().st_size > 1000


def test_report_bundle(tmp_path, capsys):
    out_dir = tmp_path / "report"
    code, _ = run_cli(["report", "--out-dir", str(out_dir), "--seed", "2",
                       "--samples", "2000"], capsys)
    assert code == 0
    expected = ["sections.csv", "sections.png", "haar_cloud.csv",
                "haar_cloud.png", "radial.csv", "radial.png",
                "genfun_identity.csv", "genfun_identity.png",
                "verify_summary.json", "verify_summary.csv"]
    for name in expected:
        path = out_dir / name
        assert path.exists() and path.stat().st_size > 0
    summary = json.loads((out_dir / "verify_summary.json").read_text())
    assert summary["passed"] is True


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "su2sph.cli", "eval",
                           "--alpha", "1", "0", "0", "--identity"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["re"] == 2.0
