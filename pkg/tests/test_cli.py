import io
import json

import pytest

from smallideals.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_norm_commands(capsys):
    code, out, _ = run(capsys, "norm", "--input", '{"space":"schlumprecht","entries":[[1,"1"],[2,"1"],[3,"1"]]}')
    assert code == 0 and json.loads(out)["value"] == pytest.approx(1.5)
    code, out, _ = run(capsys, "norm", "--input", '{"space":{"schreier":1},"entries":[[1,"1"],[2,"1"],[3,"1"]]}')
    assert code == 0 and json.loads(out)["value"] == "2"
    code, out, _ = run(capsys, "norm", "--input", '{"entries":[]}')
    assert code == 0 and json.loads(out)["value"] == 0


def test_stdin_and_output_file(capsys, monkeypatch, tmp_path):
    monkeypatch.setattr("sys.stdin", io.StringIO('{"entries":[[4,"1/2"]]}'))
    target = tmp_path / "out.json"
    code, out, _ = run(capsys, "--command", "norm", "--input", "-", "--output", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["value"] == pytest.approx(0.5)


def test_input_errors(capsys):
    assert run(capsys, "norm", "--input", "{broken")[0] == 2
    assert run(capsys, "norm")[0] == 2
    assert run(capsys, "verify", "--suite", "bogus")[0] == 2
    assert run(capsys, "construct", "nothing")[0] == 2
    assert run(capsys, "norm", "--tolerance", "0", "--input", '{"entries":[]}')[0] == 2


def test_scale_errors(capsys):
    assert run(capsys, "verify", "--suite", "witness", "--k", "3")[0] == 3
    assert run(capsys, "construct", "params", "--depth", "5")[0] == 3
    assert run(capsys, "construct", "dyadic-family", "--depth", "2", "--level", "2")[0] == 3


def test_construct_targets(capsys):
    code, out, _ = run(capsys, "construct", "params", "--depth", "1")
    assert code == 0 and json.loads(out)["m"] == [{"pow2m1": 4}]
    code, out, _ = run(capsys, "construct", "dyadic-family", "--depth", "1", "--level", "1")
    assert code == 0 and json.loads(out)["nodes"][""]["F"] == [[1, 1]]
    code, out, _ = run(capsys, "construct", "averages", "--count", "2")
    assert [e["E"] for e in json.loads(out)] == [[1, 1], [3, 5]]
    code, out, _ = run(capsys, "construct", "witness", "--k", "1")
    assert code == 0 and json.loads(out)["passed"]
    code, out, _ = run(capsys, "construct", "tree-vector", "--depth", "1", "--input", '{"m":[3]}')
    assert code == 0 and len(json.loads(out)["vector"]["entries"]) == 3


def test_schreier_and_tree_commands(capsys):
    code, out, _ = run(capsys, "schreier", "--input", '{"set":[2,3,4,5,6,7],"N":2}')
    body = json.loads(out)
    assert body["is_maximal"] and body["decomposition"] == [[2, 3], [4, 5, 6, 7]]
    code, out, _ = run(capsys, "tree", "--input", '{"m":[3,15,15,15]}')
    assert code == 1
    params = run(capsys, "construct", "params", "--depth", "2")[1]
    code, out, _ = run(capsys, "tree", "--input", json.dumps({**json.loads(params), "uniform": True}))
    assert code == 0


def test_verify_and_separate(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "witness")
    assert code == 0 and all(r["verdict"] == "pass" for r in json.loads(out)["reports"])
    code, out, _ = run(capsys, "verify", "--suite", "separation", "--depth", "4", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "level,N,bound_upper_log2"
    code, out, _ = run(capsys, "separate", "--depth", "2", "--format", "csv")
    assert code == 0 and out.splitlines()[1].startswith("2,2,")


def test_reports_are_deterministic(capsys):
    first = run(capsys, "verify", "--suite", "est-functionals2", "--seed", "5")[1]
    second = run(capsys, "verify", "--suite", "est-functionals2", "--seed", "5")[1]
    assert first == second


def test_constructed_artifacts_round_trip(capsys):
    from smallideals.constructions import DyadicFamily, validate_dyadic_family
    from smallideals.trees import DyadicScheme, check_scheme

    out = run(capsys, "construct", "dyadic-family", "--depth", "2", "--level", "1")[1]
    assert validate_dyadic_family(DyadicFamily.from_json(json.loads(out))) == []
    out = run(capsys, "construct", "params", "--depth", "2", "--mode", "dyadic_scheme")[1]
    assert check_scheme(DyadicScheme.from_json(json.loads(out)))["passed"]
