import json
import shutil
import subprocess
import sys

import pytest

from pdyn.cli import build_parser, main

SUBCOMMANDS = ["chebyshev", "lattes", "s1", "tower", "cancel", "degree-growth", "lemma21-replay",
               "separability", "classify", "check-invariant", "corpus"]

SQUARE = '["x^2"]'
FIXED_ONE = '{"n": 1, "h": "X1 - Y1"}'


def run_cli(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


def test_chebyshev(capsys):
    code, rep = run_cli(capsys, "chebyshev", "--degree", "3")
    assert code == 0
    assert rep["result"]["poly"] == "4*x^3 - 3*x"
    assert rep["subcommand"] == "chebyshev" and rep["params"] == {"degree": 3, "sign": 1}


def test_lattes_negative_coefficient(capsys):
    code, rep = run_cli(capsys, "lattes", "--a=-1", "--b", "1", "--m", "2")
    assert code == 0
    assert rep["result"]["degree"] == 4


def test_s1_both_forms(capsys):
    assert run_cli(capsys, "s1", "--d", "6", "--B", "4")[1]["result"]["s1"] == 3
    code, rep = run_cli(capsys, "s1", "--d", "2", "--ext-degree", "1", "--n", "1")
    assert code == 0 and rep["result"]["B"] == 2
    code, rep = run_cli(capsys, "s1", "--d", "2")
    assert code == 1 and rep["error"]["type"] == "ParseError"


def test_tower_exit_codes(capsys):
    code, rep = run_cli(capsys, "tower", "--map", SQUARE, "--variety", FIXED_ONE, "--height", "10", "--smax", "3")
    assert code == 0 and rep["result"]["empirical_s0"] == 1
    # a window ending at the last level with new points has not stabilized
    code, rep = run_cli(capsys, "tower", "--map", SQUARE, "--variety", FIXED_ONE, "--height", "10", "--smax", "1")
    assert code == 3 and not rep["result"]["stabilized_in_window"]


def test_budget_exit_code_and_partial(capsys, monkeypatch):
    monkeypatch.setenv("PDYN_MONOMIAL_BUDGET", "100")
    code, rep = run_cli(capsys, "tower", "--map", SQUARE, "--variety", FIXED_ONE, "--height", "5", "--smax", "20")
    assert code == 2
    assert rep["error"]["type"] == "DegreeOverflow"
    assert rep["partial"]["complete"] is False
    assert rep["partial"]["levels"][0]["level"] == 0


def test_input_errors_list_every_bad_input(capsys):
    code, rep = run_cli(capsys, "check-invariant", "--map", '{"P": ["0", "1", "1"], "Q": ["0", "1", "0"]}',
                        "--variety", '{"n": 1, "h": "X1^2 - Y1"}')
    assert code == 1
    assert rep["error"]["type"] == "InputErrors"
    assert {e["input"] for e in rep["error"]["errors"]} == {"map", "variety"}


def test_missing_file_is_input_error(capsys, tmp_path):
    code, rep = run_cli(capsys, "classify", "--map", str(tmp_path / "nope.json"))
    assert code == 1 and "error" in rep


def test_file_inputs_are_digested(capsys, tmp_path):
    path = tmp_path / "map.json"
    path.write_text(json.dumps({"P": ["-2", "0", "1"], "Q": ["1", "0", "0"]}))
    code, rep = run_cli(capsys, "classify", "--map", str(path))
    assert code == 0
    assert len(rep["inputs"]["map"]["sha256"]) == 64
    assert rep["result"]["kind"] == "chebyshev"


@pytest.mark.parametrize("argv", [
    ["cancel", "--map", '{"num": "x^2 - 1"}', "--height", "5", "--nmax", "3"],
    ["degree-growth", "--map", '["x^2", "x^2"]', "--variety", '{"n": 2, "h": "X1*Y2 - X2*Y1"}', "--mmax", "3"],
    ["separability", "--poly", "x1*x2 - x3", "--n", "3", "--left", "1,2"],
    ["tower", "--map", '["x^2", "x^2"]', "--variety", '{"n": 2, "h": "X1*Y2 - X2*Y1"}', "--height", "5",
     "--smax", "3", "--threads", "2"],
])
def test_reports_are_deterministic(capsys, argv):
    first = run_cli(capsys, *argv)
    second = run_cli(capsys, *argv)
    assert first == second
    assert json.loads(json.dumps(first[1])) == first[1]


def test_replay_table(capsys, tmp_path):
    table = {"n": 2, "k": 1, "d": 1, "d1": 1, "d2": 1, "d1_prime": 1, "degrees": [2, 2],
             "intersections": [{"indices": [2], "value": 1}, {"indices": [1], "value": 1}], "m_max": 2}
    path = tmp_path / "t.json"
    path.write_text(json.dumps(table))
    code, rep = run_cli(capsys, "lemma21-replay", "--table", str(path))
    assert code == 0 and rep["result"]["routes_agree"]


def test_output_file(capsys, tmp_path):
    out = tmp_path / "r.json"
    assert main(["--output", str(out), "--seed", "7", "chebyshev", "--degree", "2"]) == 0
    assert capsys.readouterr().out == ""
    rep = json.loads(out.read_text())
    assert rep["seed"] == 7 and rep["result"]["map"]["P"] == ["-1", "0", "2"]


def test_corpus_subcommand(capsys):
    code, summary = run_cli(capsys, "corpus")
    assert code == 0 and summary["failed"] == 0 and summary["passed"] > 0


@pytest.mark.parametrize("sub", SUBCOMMANDS)
def test_help(sub, capsys):
    with pytest.raises(SystemExit) as err:
        build_parser().parse_args([sub, "--help"])
    assert err.value.code == 0
    assert "usage" in capsys.readouterr().out


def test_console_script():
    exe = shutil.which("pdyn")
    cmd = [exe] if exe else [sys.executable, "-m", "pdyn.cli"]
    proc = subprocess.run(cmd + ["s1", "--d", "3", "--B", "2"], capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["orders"] == [1, 3]
