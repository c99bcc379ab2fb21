import json
import subprocess
import sys

import pytest

from satcas import orchestrator as R
from satcas.cli import main
from satcas.sat import dimacs_read


def run_json(argv, capsys):
    code = main(argv + ["--json"])
    return code, json.loads(capsys.readouterr().out)


def test_search_williamson(capsys, tmp_path):
    report = tmp_path / "w.json"
    code, rep = run_json(["search", "williamson", "--order", "5", "--split-depth", "3", "--report", str(report)], capsys)
    assert code == 0 and rep["verdict"] == "exists" and rep["inequivalent_count"] == 1
    assert json.loads(report.read_text())["solutions"] == rep["solutions"]


@pytest.mark.parametrize("argv,key", [
    (["search", "good", "--order", "3"], "exists"),
    (["search", "best", "--order", "7"], "exists"),
    (["search", "golay", "--length", "3"], "exists"),
    (["search", "ruskey-savage", "--dim", "3"], "holds"),
    (["search", "norine", "--dim", "3"], "holds"),
])
def test_search_families(argv, key, capsys):
    code, rep = run_json(argv, capsys)
    assert code == 0 and rep["verdict"] == key


def test_stage1_only(capsys):
    code, rep = run_json(["search", "golay", "--length", "4", "--stage1-only"], capsys)
    assert code == 0 and all(len(s) == 4 for s in rep["solutions"])


def test_global_flags_before_and_after(capsys):
    _, rep = run_json(["--seed", "7", "--tol", "1e-5", "search", "williamson", "--order", "3"], capsys)
    assert rep["config"]["seed"] == 7 and rep["config"]["tol"]["rel"] == 1e-5
    _, rep = run_json(["search", "williamson", "--order", "3", "--seed", "8"], capsys)
    assert rep["config"]["seed"] == 8


def test_oracle_matches_search(capsys):
    _, a = run_json(["oracle", "williamson", "--order", "3"], capsys)
    _, b = run_json(["search", "williamson", "--order", "3"], capsys)
    assert a["solutions"] == b["solutions"]


def test_export_cnf(tmp_path, capsys):
    out = tmp_path / "w.cnf"
    assert main(["export-cnf", "williamson", "--order", "7", "--out", str(out)]) == 0
    cs = dimacs_read(out.read_text())
    assert cs.nvars >= 16
    recs = json.loads((tmp_path / "w.cnf.varmap.json").read_text())
    assert {r["var"] for r in recs} == set(range(1, 17))


@pytest.mark.parametrize("argv", [
    ["search", "good", "--order", "4"],
    ["search", "williamson"],
    ["search", "williamson", "--order", "3", "--split-depth", "99"],
    ["oracle", "williamson", "--order", "15"],
    ["frobnicate"],
    ["--seed", "-1", "search", "williamson", "--order", "3"],
])
def test_usage_errors_exit_3(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 3


def test_incomplete_exit_2(capsys):
    assert main(["search", "williamson", "--order", "15", "--timeout", "1e-9"]) == 2


def test_soundness_exit_4(monkeypatch, capsys):
    monkeypatch.setattr(R, "_decode", lambda fam, enc, lits: ((1, 1, 1),) * 4)
    assert main(["search", "williamson", "--order", "3"]) == 4


def test_counterexample_exit_1(monkeypatch, capsys):
    monkeypatch.setattr(R, "run", lambda *a, **k: R.SearchReport("williamson", {"n": 35}, verdict="counterexample"))
    assert main(["search", "williamson", "--order", "35"]) == 1


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "satcas", "search", "norine", "--dim", "2"],
                         capture_output=True, text=True, check=False)
    assert out.returncode == 0 and "verdict=holds" in out.stdout
