import json
import subprocess
import sys

import pytest

from kregret.cli import build_parser, config_from_args, main
from oracles import (ANTHONY, BRYANT, DURANT, JAMES, NOWITZKI, RANDOLPH, STOUDEMIRE, WADE)

Y_AXIS_GAPS = {DURANT: 0.000, JAMES: 0.000, WADE: 0.057, NOWITZKI: 0.062, BRYANT: 0.080,
            ANTHONY: 0.089, STOUDEMIRE: 0.105, RANDOLPH: 0.188}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out else None), err


def base(path, cols="rebs,points"):
    return ["--input", str(path), "--id-col", "player name", "--cols", cols]


def test_solve_distance_golden(capsys, nba_csv_path):
    code, rep, _ = run(capsys, "solve", *base(nba_csv_path), "--k", "2", "--m", "2",
                       "--tau", "0.5", "--metric", "distance")
    assert code == 0
    assert rep["algorithm"] == "sweep2d" and rep["cost"] == 0.0
    assert {c["id"] for c in rep["chosen"]} == {DURANT, STOUDEMIRE}
    durant = next(c for c in rep["chosen"] if c["id"] == DURANT)
    assert durant["tuple"] == [623.0, 2472.0]
    assert rep["exactness"] == "exact" and rep["max_ratio"] == 0.0
    assert "wall_time_s" not in rep


def test_solve_round_trip(capsys, nba_csv_path):
    code, rep, _ = run(capsys, "solve", *base(nba_csv_path), "--k", "1", "--m", "1")
    assert code == 0
    ids = ",".join(c["id"] for c in rep["chosen"])
    code, ev, _ = run(capsys, "evaluate", *base(nba_csv_path), "--k", "1", "--ids", ids)
    assert code == 0 and ev["max_ratio"] == pytest.approx(rep["max_ratio"], abs=1e-9)
    assert ev["max_ratio"] == pytest.approx(rep["cost"], abs=1e-6)


def test_solve_full_dataset_every_algorithm(capsys, nba_csv_path):
    for algo in ("sweep", "greedy", "oracle", "auto"):
        code, rep, _ = run(capsys, "solve", *base(nba_csv_path), "--m", "8", "--algo", algo)
        assert code == 0 and len(rep["chosen"]) == 8 and rep["max_ratio"] == 0.0


def test_solve_auto_greedy_high_dim(capsys, nba_csv_path):
    code, rep, _ = run(capsys, "solve", *base(nba_csv_path, "points,rebs,steals,fouls"),
                       "--m", "2", "--samples", "500")
    assert code == 0 and rep["algorithm"] == "greedy"
    assert rep["exactness"] == "sampled(505)"


def test_solve_timing_flag(capsys, nba_csv_path):
    code, rep, _ = run(capsys, "solve", *base(nba_csv_path), "--timing")
    assert code == 0 and rep["wall_time_s"] >= 0


def test_evaluate_examples(capsys, nba_csv_path):
    cols = "points,rebs"
    _, rep, _ = run(capsys, "evaluate", *base(nba_csv_path, cols), "--ids",
                    f"{BRYANT},{DURANT},{WADE}")
    assert rep["max_ratio"] >= 0.345 - 1e-3
    _, rep, _ = run(capsys, "evaluate", *base(nba_csv_path, cols), "--k", "2", "--ids",
                    f"{DURANT},{STOUDEMIRE}")
    assert rep["max_ratio"] <= 1e-9
    everyone = ",".join(Y_AXIS_GAPS)
    _, rep, _ = run(capsys, "evaluate", *base(nba_csv_path, cols), "--ids", everyone)
    assert rep["max_ratio"] == 0.0


def test_evaluate_unknown_ids(capsys, nba_csv_path):
    code, rep, err = run(capsys, "evaluate", *base(nba_csv_path), "--ids", "Ghost,Kevin Durant")
    assert code == 2 and rep is None
    error = json.loads(err)["error"]
    assert error["type"] == "InputError" and "Ghost" in error["message"]


def test_contour_command(capsys, nba_csv_path):
    code, rep, _ = run(capsys, "contour", *base(nba_csv_path), "--k", "2", "--tau", "0.5")
    assert code == 0 and rep["partition_ok"]
    assert rep["segments"][0]["id"] == JAMES
    code, rep1, _ = run(capsys, "contour", *base(nba_csv_path), "--k", "1")
    assert [s["id"] for s in rep1["segments"]] == [DURANT, RANDOLPH]
    code, _, err = run(capsys, "contour", *base(nba_csv_path, "points,rebs,steals"))
    assert code == 3 and "UnsupportedDimensionError" in err


def test_plot_data(capsys, nba_csv_path, tmp_path):
    code, rep, _ = run(capsys, "plot-data", *base(nba_csv_path), "--k", "2", "--tau", "0.5",
                       "--ids", f"{DURANT},{STOUDEMIRE}")
    assert code == 0
    gaps = {l["id"]: l["y_gap_to_contour"] for l in rep["lines"]}
    for pid, v in Y_AXIS_GAPS.items():
        assert gaps[pid] == pytest.approx(v, abs=1e-3)
    slopes = {tuple(sorted(c["lines"])): c["slope"] for c in rep["intersections"]}
    assert slopes[tuple(sorted((ANTHONY, STOUDEMIRE)))] == pytest.approx(15.39, abs=1e-2)
    assert slopes[tuple(sorted((BRYANT, ANTHONY)))] == pytest.approx(6.07, abs=1e-2)
    assert slopes[tuple(sorted((STOUDEMIRE, RANDOLPH)))] == pytest.approx(2.64, abs=1e-2)
    assert rep["envelope"]["ids"] == [DURANT, STOUDEMIRE]

    single = tmp_path / "one.csv"
    single.write_text("a,b\n1,1\n")
    code, rep, _ = run(capsys, "plot-data", "--input", str(single))
    assert code == 0 and len(rep["lines"]) == 1 and rep["intersections"] == []


@pytest.mark.parametrize("argv, exit_code, kind", [
    (["solve", "--input", "/no/such/file.csv"], 2, "InputError"),
    (["solve", "--k", "0"], 3, "DomainError"),
    (["solve", "--algo", "sweep", "--cols", "points,rebs,steals"], 3, "UnsupportedDimensionError"),
    (["solve", "--algo", "oracle", "--m", "5"], 4, "GuardError"),
    (["solve", "--k", "9"], 3, "DomainError"),
    (["solve", "--algo", "greedy", "--metric", "distance"], 3, "DomainError"),
])
def test_error_exit_codes(capsys, nba_csv_path, argv, exit_code, kind):
    if "--input" not in argv:
        argv = argv + ["--input", str(nba_csv_path), "--id-col", "player name"]
        if "--cols" not in argv:
            argv += ["--cols", "points,rebs"]
    code, _, err = run(capsys, *argv)
    assert code == exit_code
    assert json.loads(err)["error"]["type"] == kind


def test_parse_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,x\n")
    code, _, err = run(capsys, "solve", "--input", str(bad))
    assert code == 2 and json.loads(err)["error"]["type"] == "ParseError"


def test_env_overrides(monkeypatch, nba_csv_path):
    monkeypatch.setenv("KREGRET_K", "2")
    monkeypatch.setenv("KREGRET_ID_COL", "player name")
    monkeypatch.setenv("KREGRET_INPUT", str(nba_csv_path))
    cfg = config_from_args(build_parser().parse_args(["solve", "--m", "3"]))
    assert (cfg.k, cfg.m, cfg.id_col, cfg.input) == (2, 3, "player name", str(nba_csv_path))
    cfg = config_from_args(build_parser().parse_args(["solve", "--k", "1"]))
    assert cfg.k == 1


def test_out_file_and_determinism(capsys, nba_csv_path, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["solve", *base(nba_csv_path), "--k", "2", "--m", "2"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert capsys.readouterr().out == ""
    text = a.read_text()
    assert json.loads(text)["k"] == 2
    # six-decimal floats only
    assert all(len(t.split(".")[1].rstrip(",")) <= 6 for t in text.split()
               if t.rstrip(",").replace(".", "", 1).replace("-", "", 1).isdigit() and "." in t)


def test_module_entry_point(nba_csv_path):
    proc = subprocess.run([sys.executable, "-m", "kregret", "contour", *base(nba_csv_path)],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["command"] == "contour"


def test_normalize_off(capsys, tmp_path):
    f = tmp_path / "unit.csv"
    f.write_text("a,b\n0.5,1\n1,0.5\n0.8,0.8\n")
    _, on, _ = run(capsys, "evaluate", "--input", str(f), "--ids", "3")
    _, off, _ = run(capsys, "evaluate", "--input", str(f), "--ids", "3", "--normalize", "off")
    assert on["max_ratio"] == off["max_ratio"]
