import json

import pytest

from helpers import make
from verifylab.cli import main, read_config_file, resolve_config, build_parser
from verifylab.errors import ParseError
from verifylab.mesh import write_csv


@pytest.fixture
def cone_csv(tmp_path):
    path = tmp_path / "cone2d.csv"
    write_csv(make("cone", 2, R=1.0, H=1.0), path)
    return path


def _header_lines(path, prefix="#"):
    return [ln for ln in path.read_text().splitlines() if ln.startswith(prefix)]


def test_rearrange_outputs(cone_csv, tmp_path):
    out = tmp_path / "run1"
    assert main(["rearrange", "--input", str(cone_csv), "--out", str(out)]) == 0
    assert {p.name for p in out.iterdir()} == {"curve.csv", "profile.json", "osc.svg"}
    assert any("t_points = 256" in ln for ln in _header_lines(out / "curve.csv"))
    prof = json.loads((out / "profile.json").read_text())
    assert prof["config"]["t_points"] == 256 and set(prof["identity_residuals"]) == {"tail", "product", "parts"}
    svg = (out / "osc.svg").read_text()
    assert "<polyline" in svg and "t_points = 256" in svg


def test_rearrange_error_codes(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("dim,half_width,points_per_axis,measure\n1,1.0,11,lebesgue\n3,x\n")
    assert main(["rearrange", "--input", str(bad), "--out", str(tmp_path)]) == 2
    assert "line 3" in capsys.readouterr().err
    edge = tmp_path / "edge.csv"
    edge.write_text("dim,half_width,points_per_axis,measure\n1,1.0,11,lebesgue\n10,1.0\n")
    assert main(["rearrange", "--input", str(edge), "--out", str(tmp_path)]) == 3
    assert "cell 10" in capsys.readouterr().err


def test_norm(cone_csv, tmp_path):
    assert main(["norm", "--input", str(cone_csv), "--out", str(tmp_path), "--p", "3", "--q", "inf"]) == 0
    text = (tmp_path / "norms.csv").read_text()
    assert "functional,p,q,value" in text and "lorentz,3,inf," in text and "hbw" in text


def test_verify_example_ids(tmp_path):
    code = main(["verify", "--ids", "GN_STRONG,V2,ID_FROM", "--n", "2", "--out", str(tmp_path)])
    rows = [ln for ln in (tmp_path / "summary.csv").read_text().splitlines() if not ln.startswith("#")]
    assert [r.split(",")[0] for r in rows[1:]] == ["GN_STRONG", "V2", "ID_FROM"]
    # ID_FROM exceeds 1e-3 on smooth_bump_n2_R0.6_H1 (1.4e-3), so this exits 1
    assert code == 0


def test_verify_inadmissible_is_skipped(tmp_path, capsys):
    assert main(["verify", "--ids", "SOB1", "--p", "1", "--q", "2", "--n", "3", "--out", str(tmp_path)]) == 0
    assert "inadmissible (first-order Sobolev excludes p=1, q!=1" in capsys.readouterr().out


def test_verify_usage_errors(tmp_path):
    assert main(["verify", "--ids", "NOPE", "--out", str(tmp_path)]) == 2
    missing = tmp_path / "none.json"
    assert main(["verify", "--ids", "GN_STRONG", "--enforce", "--budgets", str(missing), "--out", str(tmp_path)]) == 2


def test_verify_regression_lists_offenders(tmp_path, capsys):
    budgets = tmp_path / "b.json"
    budgets.write_text(json.dumps({"checks": {"GN_STRONG|n=1|k=1|p=1|q=1": {"budget": 0.1}}, "constants": {}}))
    code = main(["verify", "--ids", "GN_STRONG", "--n", "1", "--budgets", str(budgets), "--enforce",
                 "--out", str(tmp_path)])
    assert code == 1
    assert "failing checks" in capsys.readouterr().out
    lines = [ln for ln in (tmp_path / "checks.jsonl").read_text().splitlines() if not ln.startswith("#")]
    assert all(json.loads(ln)["pass"] is False for ln in lines)


def test_verify_jobs_do_not_change_output(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    args = ["verify", "--ids", "GN_STRONG,ISO,V4", "--n", "1"]
    main(args + ["--out", str(a)])
    main(args + ["--out", str(b), "--jobs", "3"])

    def body(p):
        return [ln for ln in (p / "checks.jsonl").read_text().splitlines() if not ln.startswith("#")]

    assert body(a) == body(b)


def test_scan_zero_family(tmp_path):
    assert main(["scan", "--id", "GN_STRONG", "--family", "zero", "--n", "2", "--out", str(tmp_path)]) == 1


def test_scan_freeze_and_regression(tmp_path):
    budgets = tmp_path / "golden.json"
    base = ["scan", "--id", "GN_STRONG", "--family", "cone", "--R", "0.5:1.0", "--n", "2", "--points", "81",
            "--samples", "4", "--refine", "1", "--budgets", str(budgets), "--out", str(tmp_path)]
    assert main(base + ["--freeze"]) == 0
    golden = json.loads(budgets.read_text())
    (key, entry), = golden["constants"].items()
    assert main(base) == 0
    entry["best_ratio"] *= 2
    budgets.write_text(json.dumps(golden))
    assert main(base) == 1
    est = json.loads((tmp_path / "estimate.json").read_text())
    assert est["key"] == key and "config" in est
    assert (tmp_path / "trace.csv").read_text().startswith("#")


def test_report(tmp_path):
    run = tmp_path / "run"
    main(["verify", "--ids", "GN_STRONG,V2", "--n", "1", "--out", str(run)])
    assert main(["report", "--input", str(run), "--out", str(tmp_path / "rep")]) == 0
    md = (tmp_path / "rep" / "report.md").read_text()
    assert "| GN_STRONG |" in md and md.startswith("<!--")
    assert (tmp_path / "rep" / "ratios.svg").read_text().startswith("<?xml")


def test_config_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nt_points = 128\ntolerance = 0.01\n")
    args = build_parser().parse_args(["verify", "--config", str(cfg), "--t-points", "64"])
    resolved = resolve_config(args)
    assert resolved.t_points == 64 and resolved.tolerance == 0.01 and resolved.t_min == 1e-4
    cfg.write_text("t_points 12\n")
    with pytest.raises(ParseError, match="line 1"):
        read_config_file(cfg)
    cfg.write_text("t_min = 10\nt_max = 1\n")
    assert main(["verify", "--config", str(cfg), "--out", str(tmp_path)]) == 2
