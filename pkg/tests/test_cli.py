import csv
import json
import subprocess
import sys

import pytest

from lopma.cli import WORKERS_ENV, build_parser, main, _workers

from conftest import TINY_TEXT


@pytest.fixture
def tiny_file(tmp_path):
    p = tmp_path / "demo3.lop"
    p.write_text(TINY_TEXT)
    return p


def test_run_then_summarize_and_gap(tiny_file, tmp_path, capsys):
    out = tmp_path / "res.csv"
    code = main([
        "run", "--instance", str(tiny_file), "--algorithm", "ma-edm", "ls-multistart",
        "--pop-size", "4", "--budget-generations", "5", "--runs", "2", "--seed", "3", "--out", str(out),
    ])
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert [(r["algorithm"], r["seed"], r["fitness"]) for r in rows] == [
        ("ma-edm", "3", "14"), ("ma-edm", "4", "14"), ("ls-multistart", "3", "14"), ("ls-multistart", "4", "14"),
    ]
    capsys.readouterr()
    assert main(["summarize", str(out), "--json"]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert {(s["algorithm"], s["best"], s["worst"]) for s in summary} == {("ma-edm", 14, 14), ("ls-multistart", 14, 14)}
    assert main(["gap", str(out)]) == 0
    assert "unmatched: demo3" in capsys.readouterr().out
    assert main(["gap", str(out), "--strict-bks"]) == 1


def test_run_strict_bks_flags_unknown_instance(tiny_file, tmp_path):
    out = tmp_path / "res.csv"
    args = ["run", "--instance", str(tiny_file), "--algorithm", "ma-edm", "--pop-size", "4",
            "--budget-generations", "2", "--runs", "1", "--out", str(out)]
    assert main(args) == 0
    assert main(args + ["--strict-bks"]) == 1


def test_ils_algorithm_and_workers(tiny_file, tmp_path):
    out = tmp_path / "res.json"
    code = main([
        "run", "--instance", str(tiny_file), "--algorithm", "ma-edm-ei", "--pop-size", "4",
        "--budget-generations", "3", "--ils-iterations", "10", "--workers", "2", "--dispatch", "static",
        "--runs", "1", "--out", str(out), "--format", "json",
    ])
    assert code == 0
    assert json.loads(out.read_text())["runs"][0]["fitness"] == 14


def test_config_error_exit_code(tiny_file, tmp_path):
    code = main(["run", "--instance", str(tiny_file), "--algorithm", "ma-edm", "--budget-iterations", "5",
                 "--runs", "1", "--out", str(tmp_path / "x.csv")])
    assert code == 2


def test_missing_instance_exit_code(tmp_path, capsys):
    out = tmp_path / "x.csv"
    code = main(["run", "--instance", str(tmp_path / "nope.lop"), str(tmp_path / "nope2.lop"), "--algorithm", "ma-edm",
                 "--pop-size", "4", "--budget-generations", "1", "--runs", "1", "--out", str(out)])
    assert code != 0
    assert out.read_text().count("ERROR") == 2


def test_defaults_mirror_published_setup():
    args = build_parser().parse_args(["run", "--instance", "x"])
    assert (args.pop_size, args.swaps, args.ils_seconds, args.dispatch) == (200, 3, 3.6, "dynamic")
    assert args.algorithm == ["ma-edm-ei"] and args.runs == 30


def test_worker_env_only_without_flag(monkeypatch):
    p = build_parser()
    monkeypatch.setenv(WORKERS_ENV, "5")
    assert _workers(p.parse_args(["run", "--instance", "x"])) == 5
    assert _workers(p.parse_args(["run", "--instance", "x", "--workers", "2"])) == 2
    monkeypatch.delenv(WORKERS_ENV)
    assert _workers(p.parse_args(["run", "--instance", "x"])) == 1


def test_generate_and_optimum(tmp_path, capsys):
    p = tmp_path / "g8.lop"
    assert main(["generate", "--n", "8", "--low", "0", "--high", "100", "--seed", "1", "--out", str(p)]) == 0
    assert main(["optimum", str(p)]) == 0
    got = json.loads(capsys.readouterr().out)
    assert got == {"instance": "g8", "fitness": 1649, "permutation": [2, 4, 0, 6, 1, 5, 7, 3]}
    big = tmp_path / "g11.lop"
    main(["generate", "--n", "11", "--out", str(big)])
    assert main(["optimum", str(big)]) == 1


def test_module_entry_point(tiny_file):
    proc = subprocess.run([sys.executable, "-m", "lopma", "optimum", str(tiny_file)], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["fitness"] == 14
