import json
import pathlib
import subprocess
import sys

import pytest

from gkcodes.cli import main

GOLDEN = pathlib.Path(__file__).resolve().parent.parent / "golden"


def run_cli(argv, capsys):
    rc = main(argv)
    out = capsys.readouterr().out
    return rc, out


# ---------------------------------------------------------------------------
# points
# ---------------------------------------------------------------------------

def test_points_csv_matches_golden(capsys):
    rc, out = run_cli(["points", "--p", "2", "--format", "csv"], capsys)
    assert rc == 0
    assert out == (GOLDEN / "points_q2.csv").read_text()
    lines = out.strip().split("\n")
    assert lines[0] == "# field: p=2 e=1 modulus=1,1,0,0,0,0,1"
    assert lines[1] == "index,a,b,c,orbit"
    assert len(lines) == 227


def test_points_json(capsys):
    rc, out = run_cli(["points", "--p", "2", "--format", "json"], capsys)
    data = json.loads(out)
    assert data["n_points"] == 225
    assert data["field"]["modulus"] == [1, 1, 0, 0, 0, 0, 1]


def test_q_shortcut(capsys):
    rc, out = run_cli(["points", "--q", "4", "--format", "json"], capsys)
    data = json.loads(out)
    assert data["n_points"] == 4**8 - 4**6 + 4**5 + 1


# ---------------------------------------------------------------------------
# rrbasis
# ---------------------------------------------------------------------------

def test_rrbasis_output(capsys):
    rc, out = run_cli(["rrbasis", "--p", "2", "--family", "C", "--m", "3"],
                      capsys)
    data = json.loads(out)
    assert data["dimension"] == 18 and data["certified"]
    assert data["divisor"]["degree"] == 27
    assert len(data["functions"]) == 18
    kinds = {a["kind"] for f in data["functions"] for a in f["atoms"]}
    assert kinds <= {"x", "y", "z", "x-a", "z-c", "tan"}


# ---------------------------------------------------------------------------
# build determinism and golden comparison
# ---------------------------------------------------------------------------

def test_build_matches_golden_and_is_deterministic(tmp_path, capsys):
    out1 = tmp_path / "a"
    out2 = tmp_path / "b"
    assert main(["build", "--p", "2", "--family", "C", "--m", "3",
                 "--out", str(out1)]) == 0
    assert main(["build", "--p", "2", "--family", "C", "--m", "3",
                 "--threads", "8", "--out", str(out2)]) == 0
    capsys.readouterr()
    m1 = (out1.with_suffix(".matrix")).read_bytes()
    m2 = (out2.with_suffix(".matrix")).read_bytes()
    assert m1 == m2
    assert m1 == (GOLDEN / "C_q2_m3.matrix").read_bytes()
    j1 = json.loads(out1.with_suffix(".json").read_text())
    j2 = json.loads(out2.with_suffix(".json").read_text())
    assert j1 == j2 == json.loads((GOLDEN / "C_q2_m3.json").read_text())
    assert j1["witness_weight"] == 189
    assert j1["k"] == 18


def test_build_sidecar_consistency(tmp_path, capsys):
    out = tmp_path / "ct"
    assert main(["build", "--p", "2", "--family", "Ctilde", "--m", "3",
                 "--s", "0", "--out", str(out)]) == 0
    capsys.readouterr()
    sidecar = json.loads(out.with_suffix(".json").read_text())
    matrix = out.with_suffix(".matrix").read_text().strip().split("\n")
    rows = [r for r in matrix if not r.startswith("#")]
    assert len(rows) == sidecar["k"] == 15
    assert all(len(r.split()) == sidecar["n"] == 217 for r in rows)
    assert sidecar["dstar"] == 193 == sidecar["n"] - sidecar["deg_G"]


def test_build_refuses_degenerate_distance(tmp_path, capsys):
    with pytest.raises(SystemExit):
        main(["build", "--p", "2", "--family", "C", "--m", "24",
              "--out", str(tmp_path / "x")])


# ---------------------------------------------------------------------------
# table
# ---------------------------------------------------------------------------

def test_table_rows_match_golden(capsys):
    rc, out = run_cli(["table", "--p", "2", "--family", "C", "--m", "3"],
                      capsys)
    assert json.loads(out) == json.loads(
        (GOLDEN / "table_C_q2_m3.json").read_text())
    rc, out = run_cli(["table", "--p", "2", "--family", "Ctilde",
                       "--m", "3", "--s", "0"], capsys)
    row = json.loads(out)
    assert row == json.loads((GOLDEN / "table_Ctilde_q2_m3.json").read_text())
    assert row["k_matches"] == "riemann_roch"


def test_table_cbar_interval(capsys):
    rc, out = run_cli(["table", "--p", "2", "--family", "Cbar",
                       "--m", "2", "--s", "1"], capsys)
    row = json.loads(out)
    assert row["n"] == 208 and row["k_measured"] == 25
    assert row["d"] == ">= 174"


def test_table_with_automorphisms(capsys):
    rc, out = run_cli(["table", "--p", "2", "--family", "C", "--m", "3",
                       "--aut"], capsys)
    row = json.loads(out)
    aut = row["automorphisms"]
    assert aut["geometric_closure_order"] == 648
    assert all(v["preserves_code"] for v in aut["generators"])


# ---------------------------------------------------------------------------
# aut
# ---------------------------------------------------------------------------

def test_aut_subcommand(capsys):
    rc, out = run_cli(["aut", "--p", "2", "--family", "Ctilde",
                       "--m", "3", "--s", "0"], capsys)
    rep = json.loads(out)["report"]
    assert rep["geometric_closure_order"] == 72
    assert rep["closure_with_frobenius"] == 432    # 72 * 6
    assert all(v["preserves_code"] for v in rep["generators"])


def test_aut_reports_hypothesis_failure(capsys):
    rc, out = run_cli(["aut", "--p", "2", "--family", "Cbar",
                       "--m", "2", "--s", "1"], capsys)
    rep = json.loads(out)["report"]
    assert "error" in rep


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def test_verify_selected_suite(capsys):
    rc, out = run_cli(["verify", "--p", "2", "--suites", "points,planes"],
                      capsys)
    assert rc == 0
    lines = [json.loads(l) for l in out.strip().split("\n")]
    summary = lines[-1]["summary"]
    assert summary["status"] == "pass" and summary["failed"] == 0
    assert {r["suite"] for r in lines[:-1]} == {"points", "planes"}


def test_verify_full_q2_passes(capsys):
    rc, out = run_cli(["verify", "--p", "2"], capsys)
    assert rc == 0
    summary = json.loads(out.strip().split("\n")[-1])["summary"]
    assert summary["failed"] == 0
    assert "wall_seconds" in summary


def test_verify_exit_status_contract():
    # corrupting a check must flip the exit status and name the check
    import gkcodes.verify as vf
    bad = [("points:counts", lambda ctx: (_ for _ in ()).throw(
        AssertionError("deliberate")))]
    orig = vf.SUITES["points"]
    vf.SUITES["points"] = bad
    try:
        records, ok = vf.run(2, 1, ["points"])
    finally:
        vf.SUITES["points"] = orig
    assert not ok
    assert records[0]["status"] == "fail"
    assert "deliberate" in records[0]["error"]


def test_verify_unknown_suite():
    import gkcodes.verify as vf
    with pytest.raises(ValueError):
        vf.run(2, 1, ["nonsense"])


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "gkcodes", "points", "--p", "2",
         "--format", "csv"],
        capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert proc.stdout == (GOLDEN / "points_q2.csv").read_text()
