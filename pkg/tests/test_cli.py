import csv
import io
import json
import subprocess
import sys

import pytest

from bcmcf.cli import main

from conftest import MICRO1_TEXT


@pytest.fixture
def micro1_file(tmp_path):
    path = tmp_path / "micro1.net"
    path.write_text(MICRO1_TEXT)
    return path


def test_solve_prints_report(micro1_file, capsys):
    assert main(["solve", str(micro1_file)]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["status"] == "Optimal" and data["objective"] == "-6"
    assert [f["value"] for f in data["flow"]] == ["3", "3"]
    assert data["budget_used"] == "6"
    assert set(data["pivots"]) == {"total", "degenerate", "nondegenerate", "max_consecutive_degenerate"}


def test_solve_missing_file(tmp_path, capsys):
    assert main(["solve", str(tmp_path / "missing.net")]) == 2
    assert capsys.readouterr().err


def test_solve_bad_file(tmp_path):
    bad = tmp_path / "bad.net"
    bad.write_text("p bcmcf 2 1 0\na 1 1 5 0 0\n")
    assert main(["solve", str(bad)]) == 2


def test_solve_first_rule_with_trace(micro1_file, capsys):
    assert main(["solve", str(micro1_file), "--pivot", "first", "--trace"]) == 0
    out = capsys.readouterr()
    assert json.loads(out.out)["objective"] == "-6"
    lines = out.err.strip().splitlines()
    assert lines and all(line.startswith("pivot ") and "entering=" in line and "objective=" in line for line in lines)


def test_gen_writes_instance_deterministically(tmp_path):
    a, b = tmp_path / "a.net", tmp_path / "b.net"
    for path in (a, b):
        assert main(["gen", "--nodes", "256", "--density", "8", "--seed", "1", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    header = next(line for line in a.read_text().splitlines() if line.startswith("p "))
    assert header.split()[3] == "2048"


def test_gen_rejects_bad_fraction(capsys):
    assert main(["gen", "--nodes", "4", "--budget-frac", "1.5"]) == 2


def test_verify_fuzz(capsys):
    assert main(["verify", "--fuzz", "25", "--seed", "42"]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["trials"] == 25 and summary["failures"] == 0


def test_verify_certify_round_trip(micro1_file, tmp_path, capsys):
    report = tmp_path / "r.json"
    assert main(["solve", str(micro1_file), "--out", str(report)]) == 0
    assert main(["verify", "--certify", str(report)]) == 0
    data = json.loads(report.read_text())
    l_edge = data["certificate"]["basis"]["L"][0]
    data["certificate"]["dhat"][str(l_edge)] = "-1"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    capsys.readouterr()
    assert main(["verify", "--certify", str(bad)]) == 1
    assert f"edge {l_edge}" in capsys.readouterr().err


def test_verify_certify_with_separate_instance(micro1_file, tmp_path):
    report = tmp_path / "r.json"
    main(["solve", str(micro1_file), "--out", str(report)])
    data = json.loads(report.read_text())
    del data["instance"]
    report.write_text(json.dumps(data))
    assert main(["verify", "--certify", str(report)]) == 2
    assert main(["verify", "--certify", str(report), "--instance", str(micro1_file)]) == 0


def test_verify_needs_a_mode():
    assert main(["verify"]) == 2


def test_bench_rows_and_mean(capsys):
    assert main(["bench", "--nodes", "16", "--density", "4", "--reps", "3", "--seed", "1"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 4 and rows[-1]["seed"] == "mean"
    assert [r["seed"] for r in rows[:3]] == ["1", "2", "3"]
    for r in rows:
        assert 0 <= float(r["degenerate_share"]) <= 1
        assert r["m"] == "64"


def test_bench_zero_reps():
    assert main(["bench", "--reps", "0"]) == 2


def test_console_script_entry_point(micro1_file):
    proc = subprocess.run([sys.executable, "-m", "bcmcf.cli", "solve", str(micro1_file)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["objective"] == "-6"


def test_solve_internal_failure_exit_code(micro1_file, monkeypatch):
    import bcmcf.cli as cli
    from bcmcf.errors import InvariantViolation

    def broken(inst, options):
        raise InvariantViolation("potential function did not decrease")

    monkeypatch.setattr(cli, "solve", broken)
    assert main(["solve", str(micro1_file)]) == 3
