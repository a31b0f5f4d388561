import json

import pytest

from kolysys.cli import build_report, emit_report, main


def write(tmp_path, obj, name="s.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def test_module_scenario(tmp_path, capsys):
    path = write(tmp_path, {"kind": "kolylfun", "route": "module", "n": 1, "F_L": [["3/1"]], "r_max": 4})
    assert main(["verify", path]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert [row["r"] for row in rep["rows"]] == [0, 1, 2, 3, 4]
    assert rep["rows"][0]["lhs"] == "4/9" and rep["summary"] == {"pass": True, "failures": 0}


def test_kappa_command(capsys):
    assert main(["kappa", "--n", "4"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["details"]["kappa"] == "-1/1"


def test_csv_output(tmp_path):
    path = write(tmp_path, {"kind": "kolylfun", "n": 1, "F_L": [[2]], "r_max": 2})
    out = tmp_path / "o.csv"
    assert main(["verify", path, "--format", "csv", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "r,lhs,rhs,equal" and len(lines) == 4


def test_lambda_override_recorded_and_failing(tmp_path, capsys):
    path = write(tmp_path, {"kind": "kolylfun", "n": 1, "F_L": [[3]], "lambda_override": "1/2"})
    assert main(["verify", path]) == 1
    rep = json.loads(capsys.readouterr().out)
    assert rep["details"]["externally_supplied"] == ["lambda"]


@pytest.mark.parametrize(
    "scenario",
    [
        {"kind": "nope"},
        {"kind": "kolylfun", "n": 2, "F_L": [[1]]},
        {"kind": "kolylfun", "n": 1, "F_L": [[0]]},
        {"kind": "kolylfun", "n": 1},
        {"kind": "kappa", "n": 1},
        {"kind": "pin-lift", "n": 1, "eigenvalues": ["2"]},
        {"kind": "kolylfun", "n": 1, "F_L": [["x"]]},
    ],
)
def test_bad_input_exit_code(tmp_path, scenario):
    assert main(["verify", write(tmp_path, scenario)]) == 2


def test_unreadable_file(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{")
    assert main(["verify", str(p)]) == 2
    assert main(["verify", str(tmp_path / "missing.json")]) == 2


def test_random_instance_is_reproducible():
    sc = {"kind": "kolylfun", "n": 2, "random": {"seed": 7, "bound": 5}, "r_max": 4}
    a, b = build_report(sc), build_report(sc)
    assert a["params"]["F_L"] == b["params"]["F_L"] and a["summary"]["pass"]


def test_pin_and_selmer(tmp_path, capsys):
    sc = {"kind": "kolylfun", "route": "pin", "n": 2, "eigenvalues": ["9/4"], "det": -1, "r_max": 6, "q_list": ["2", "3"]}
    assert build_report(sc)["summary"]["pass"]
    assert build_report({"kind": "pin-lift", "n": 2, "eigenvalues": ["4", "1/9"]})["summary"]["pass"]
    path = write(tmp_path, {"kind": "selmer-order", "n": 2})
    assert main(["selmer", "--spec", path]) == 0


def test_fuzz_command(capsys):
    assert main(["fuzz", "--seed", "1", "--iters", "2"]) == 0


def test_emit_is_byte_stable():
    sc = {"kind": "kolylfun", "n": 2, "random": {"seed": 3}}
    assert emit_report(build_report(sc)) == emit_report(build_report(sc))
