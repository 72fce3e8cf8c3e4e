import csv
import json
import subprocess
import sys

import pytest

import coalcut as cc
from coalcut.cli import main


@pytest.fixture
def fixture_path(tmp_path, sample4):
    path = tmp_path / "sample4.json"
    cc.save_game(sample4, path)
    return str(path)


# ---------------------------------------------------------------------------
# generate
# ---------------------------------------------------------------------------

def test_generate_to_file_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["generate", "--n", "5", "--distribution", "uniform", "--seed", "7"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    game = cc.load_game(a)
    assert game.n == 5


def test_generate_to_stdout(capsys):
    assert main(["generate", "--n", "3", "--seed", "1"]) == 0
    game = cc.game_from_json(capsys.readouterr().out)
    assert game.n == 3


def test_generate_normal_flags(tmp_path):
    out = tmp_path / "g.json"
    assert main(["generate", "--n", "4", "--distribution", "normal",
                 "--mean", "0", "--stddev", "2.5", "--seed", "3",
                 "--out", str(out)]) == 0
    game = cc.load_game(out)
    assert game.distribution == cc.Normal(0.0, 2.5)


def test_generate_cap_is_validation_error(capsys):
    assert main(["generate", "--n", "25"]) == 2
    err = json.loads(capsys.readouterr().out)
    assert err["error"]["type"] == "validation"


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------

def test_solve_exact_fixture(fixture_path, capsys):
    assert main(["solve", fixture_path, "--solver", "exact"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["solver"] == "exact"
    assert report["value"] == 6.0
    assert report["partition"] == [[1, 3], [2], [4]]
    assert report["time_s"] >= 0.0


def test_solve_quacs_classical_fixture(fixture_path, capsys):
    assert main(["solve", fixture_path, "--solver", "quacs-classical"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["value"] == 6.0
    assert report["partition"] == [[1, 3], [2], [4]]
    assert report["oracle_calls"] == 3
    accepted = [s["accepted"] for s in report["history"]]
    assert accepted == [True, False, True]


def test_solve_quacs_qaoa_fixture(fixture_path, capsys):
    assert main(["solve", fixture_path, "--solver", "quacs-qaoa",
                 "--p", "1", "--shots", "1024", "--seed", "0"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["value"] == 6.0
    assert report["partition"] == [[1, 3], [2], [4]]
    assert report["p"] == 1 and report["shots"] == 1024


def test_solve_csv_format(fixture_path, capsys):
    assert main(["solve", fixture_path, "--solver", "exact", "--format", "csv"]) == 0
    cells = capsys.readouterr().out.strip().split(",")
    assert cells[0] == "4"  # n
    assert cells[3] == "exact"
    assert float(cells[5]) == 6.0


def test_solve_missing_file(capsys):
    assert main(["solve", "/nonexistent/game.json"]) == 2
    err = json.loads(capsys.readouterr().out)
    assert err["error"]["type"] == "validation"


def test_solve_corrupt_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 2, "weights": [[0, 1], [2, 0]]}')
    assert main(["solve", str(bad)]) == 2
    err = json.loads(capsys.readouterr().out)
    assert "weights" in err["error"]["message"]


def test_solve_strict_flag(tmp_path, capsys):
    import numpy as np
    path = tmp_path / "zero.json"
    cc.save_game(cc.ISGame(np.zeros((4, 4))), path)
    assert main(["solve", str(path), "--solver", "exact"]) == 0
    capsys.readouterr()
    assert main(["solve", str(path), "--solver", "quacs-classical", "--strict"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["partition"] == [[1, 2, 3, 4]]  # strict mode keeps the grand coalition


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------

def test_bench_subcommand(tmp_path, capsys):
    out = tmp_path / "rows.csv"
    assert main(["bench", "--n-min", "4", "--n-max", "5", "--games", "2",
                 "--distributions", "uniform", "--solvers", "exact,quacs-classical",
                 "--seed", "0", "--out", str(out)]) == 0
    with open(out) as fh:
        records = list(csv.DictReader(fh))
    assert len(records) == 8  # 2 n x 2 games x 2 solvers
    assert (tmp_path / "rows.csv.summary.csv").exists()


def test_bench_empty_range(tmp_path, capsys):
    assert main(["bench", "--n-min", "8", "--n-max", "4",
                 "--out", str(tmp_path / "x.csv")]) == 2


def test_cli_runs_as_module(fixture_path):
    proc = subprocess.run(
        [sys.executable, "-m", "coalcut", "solve", fixture_path],
        capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["value"] == 6.0
