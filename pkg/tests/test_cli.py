from __future__ import annotations

import csv
import json

import pytest

from ffmoments.cli import EXIT_BUDGET, EXIT_CONFIG, EXIT_OK, run
from ffmoments.lfam import cache_path, load_cache


def test_family_writes_cache_and_report(tmp_path, capsys):
    assert run(["family", "--p", "3", "--n", "4", "--out", str(tmp_path), "--threads", "2"]) == EXIT_OK
    assert "|S_{4,3}| = 54" in capsys.readouterr().out
    assert load_cache(cache_path(3, 4)).size == 54
    rep = json.loads((tmp_path / "family_p3_n4.json").read_text())
    assert len(rep["records"]) == 54 and rep["metadata"] == {}


@pytest.mark.parametrize("argv", [
    ["family", "--p", "4", "--n", "3"],
    ["family", "--p", "17", "--n", "3"],
    ["family", "--p", "3", "--n", "1"],
    ["family", "--p", "3", "--n", "3", "--psi", "3"],
    ["compare", "--p", "3", "--n", "3", "--shifts", "0.1"],
    ["compare", "--p", "3", "--n", "3", "--shifts", "0.1", "0.1"],
    ["family", "--p", "3", "--n", "3", "--threads", "0"],
    ["nonsense"],
])
def test_config_errors(argv, capsys):
    assert run(argv) == EXIT_CONFIG


def test_budget_refusal(capsys):
    assert run(["family", "--p", "5", "--n", "4", "--budget", "100"]) == EXIT_BUDGET
    assert "refused" in capsys.readouterr().err


def test_lfun_check_and_verify(capsys):
    assert run(["lfun-check", "--p", "5", "--n", "3"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "empirical m = 5" in out
    assert run(["verify-matched", "--p", "3", "--n", "4", "--r", "1", "--rt", "1"]) == EXIT_OK
    assert "matched identity: PASS" in capsys.readouterr().out


def test_constants(capsys):
    assert run(["constants", "--r", "2", "--rt", "2", "--D", "10"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "g_{2,2} = 2" in out and "C_{2,2} = 64" in out
    assert "a_{2,2}(q=3, D=10)" in out


def test_mainterm_csv(tmp_path, capsys):
    code = run(["mainterm", "--p", "3", "--r", "1", "--rt", "1", "--D", "2",
                "--out", str(tmp_path), "--format", "csv"])
    assert code == EXIT_OK
    rows = list(csv.DictReader((tmp_path / "mainterm_p3_r1_rt1.csv").open()))
    assert rows[0].keys() >= {"d1", "d2", "S", "count", "half_exp"}
    row = next(r for r in rows if r["d1"] == "1" and r["d2"] == "-1" and r["S"] == "{1}")
    assert row["count"] == "3"


def test_hypothesis_compare_pointcount_kloosterman(tmp_path, capsys):
    assert run(["hypothesis", "--p", "3", "--n", "4", "--r", "2", "--rt", "1", "--out", str(tmp_path)]) == EXIT_OK
    assert (tmp_path / "hypothesis_p3_n4_r2_rt1.json").exists()
    assert run(["compare", "--p", "3", "--n", "4", "--shifts", "0.1", "0.5"]) == EXIT_OK
    assert "main term (series)" in capsys.readouterr().out
    assert run(["pointcount", "--p", "3", "--n", "2", "--m1", "2", "--m2", "2"]) == EXIT_OK
    assert "#Z = 15" in capsys.readouterr().out
    assert run(["kloosterman", "--p", "5", "--n", "3", "--m", "1"]) == EXIT_OK


def test_json_output_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run(["schur", "--p", "3", "--n", "4", "--r", "2", "--rt", "1", "--threads", "1", "--out", str(a)])
    run(["schur", "--p", "3", "--n", "4", "--r", "2", "--rt", "1", "--threads", "4", "--out", str(b)])
    name = "schur_p3_n4_r2_rt1.json"
    assert (a / name).read_bytes() == (b / name).read_bytes()
