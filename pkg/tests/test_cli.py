import json

import pytest

from powerinv.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err


def test_index(capsys, tmp_path):
    assert call(capsys, "index", "--game", "[2;2,1,1]", "--index", "js", "--normalized")[:2] == (0, "3/4 1/8 1/8")
    f = tmp_path / "g.json"
    f.write_text(json.dumps({"n": 3, "winning": [3, 5, 6, 7]}))
    assert call(capsys, "index", "--game", str(f), "--index", "bz")[:2] == (0, "1/2 1/2 1/2")
    assert call(capsys, "index", "--game", '{"quota": 3, "weights": [2, 1, 1]}', "--index", "ssi")[1] == "2/3 1/6 1/6"


def test_bound_and_enumerate(capsys, tmp_path):
    assert call(capsys, "bound", "--sigma", "(3/4,1/4,0,0)", "--index", "bz", "--k", "2",
                "--class", "simple")[:2] == (0, "1/8")
    f = tmp_path / "s.json"
    f.write_text('["29/40", "9/40", "1/40", "1/40"]')
    assert call(capsys, "bound", "--sigma", str(f), "--k", "2")[:2] == (0, "3/80")
    assert call(capsys, "enumerate", "--n", "3", "--class", "simple", "--count")[:2] == (0, "18")
    code, out, _ = call(capsys, "enumerate", "--n", "2")
    assert code == 0 and len(out.splitlines()) == 4


def test_round(capsys):
    code, out, _ = call(capsys, "round", "--game", "[2;1,1,1]", "--k", "2")
    assert code == 0 and json.loads(out) == {"n": 3, "winning": [3, 7]}
    code, out, _ = call(capsys, "round", "--game", "[2;1,1,1]", "--k", "2", "--up")
    assert json.loads(out)["winning"] == [1, 2, 3, 5, 6, 7]
    assert call(capsys, "round", "--game", "[2;1,1,1]", "--k", "2", "--up", "--p", "1/3")[0] == 2


def test_inverse_methods_agree(capsys):
    args = ("inverse", "--sigma", "(1/2,1/3,1/6)", "--index", "bz", "--n", "3")
    code, out, _ = call(capsys, *args)
    ex = json.loads(out)
    code2, out2, _ = call(capsys, *args, "--method", "bisect")
    bi = json.loads(out2)
    assert code == code2 == 0
    assert ex["best_deviation"] == bi["best_deviation"] == "4/15"


def test_emit_ilp(capsys, tmp_path):
    out = tmp_path / "m.lp"
    code, _, _ = call(capsys, "emit-ilp", "--sigma", "(1/2,1/2,0)", "--index", "bz", "--alpha", "1/10",
                      "--out", str(out))
    assert code == 0
    text = out.read_text()
    assert text.startswith("Minimize\n obj:\nSubject To\n") and text.endswith("End\n")
    code, text2, _ = call(capsys, "emit-ilp", "--sigma", "(1/2,1/2,0)", "--index", "bz", "--alpha", "1/10")
    assert text2 + "\n" == text


def test_parametric(capsys):
    code, out, _ = call(capsys, "parametric", "--k", "2", "--l", "1", "--m", "2", "--n", "3", "--index", "js")
    assert code == 0 and out.count("match") == 3 and "MISMATCH" not in out


def test_verify(capsys):
    code, out, _ = call(capsys, "verify", "--suite", "examples")
    assert code == 0 and out.startswith("PASS")
    code, out, _ = call(capsys, "verify", "--suite", "preservation")
    assert code == 1 and "FAIL k-rounding preserves strong_simple" in out


@pytest.mark.parametrize("argv", [
    [],
    ["bogus"],
    ["index", "--game", "[2;2,1,1]", "--index", "nope"],
    ["index", "--game", "not a game", "--index", "bz"],
    ["bound", "--sigma", "(1/2,1/3)", "--k", "1"],
    ["inverse", "--sigma", "(1/2,1/2)", "--n", "3"],
    ["inverse", "--sigma", "(1/2,1/2)", "--absolute", "--method", "bisect"],
    ["enumerate", "--n", "9"],
    ["verify", "--suite", "nope"],
    ["index", "--game", "[1;0,0]", "--index", "bz", "--normalized"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert call(capsys, *argv)[0] == 2


def test_threads_env(capsys, monkeypatch):
    monkeypatch.setenv("POWERINV_THREADS", "many")
    assert call(capsys, "verify", "--suite", "sweep")[0] == 2
