import json

import pytest

from canonext.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_lattice(capsys):
    code, out, _ = run(capsys, "check", "--in", "n5")
    assert code == 0 and "not distributive" in out


def test_check_algebra_reports_non_operator(capsys):
    code, out, _ = run(capsys, "check", "--in", "n5_meet")
    assert code == 0
    assert "join/2: operator" in out and "meet/2: not an operator" in out


def test_check_empty_document_exits_2(tmp_path, capsys):
    path = tmp_path / "empty.json"
    path.write_text("{}")
    code, _, err = run(capsys, "check", "--in", str(path))
    assert code == 2 and "kind" in err


def test_unknown_input_and_bad_usage(capsys):
    assert run(capsys, "check", "--in", "no_such_thing")[0] == 2
    assert run(capsys, "check")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "present", "enumerate", "--in", "b2")[0] == 2
    assert run(capsys, "present", "close", "--in", "pres1", "--set", "zz")[0] == 2
    assert run(capsys, "present", "verify-universal", "--in", "pres1")[0] == 2
    assert run(capsys, "canon", "check-eq", "--in", "b2_diamond")[0] == 2


def test_help_exits_0(capsys):
    assert main(["--help"]) == 0


def test_complete(capsys):
    code, out, _ = run(capsys, "complete", "--in", "b2")
    assert code == 0 and out.startswith("4 elements") and "meet-density: ok" in out
    code, out, _ = run(capsys, "complete", "--in", "b2", "--ideals")
    assert code == 0 and "↓a" in out


def test_complete_size_limit(capsys):
    code, _, err = run(capsys, "complete", "--in", "b3", "--max-size", "3")
    assert code == 2 and err


def test_present(capsys):
    code, out, _ = run(capsys, "present", "enumerate", "--in", "pres1")
    assert code == 0 and out.startswith("7 C-ideals")
    code, out, _ = run(capsys, "present", "close", "--in", "pres1", "--set", "a,b")
    assert out.strip() == "{a, b, t}"
    code, out, _ = run(capsys, "present", "free", "--in", "pres2")
    assert "⟨y⟩ = {x, y}" in out
    code, out, _ = run(capsys, "present", "verify-universal", "--in", "pres1", "--target", "ch2")
    assert code == 0 and "7 cover-preserving" in out


def test_canon(capsys):
    code, out, _ = run(capsys, "canon", "ext", "--in", "b2")
    assert code == 0 and "e is an isomorphism" in out
    code, out, _ = run(capsys, "canon", "verify", "--in", "n5")
    assert code == 0 and "density: ok" in out


@pytest.mark.parametrize("ineq,code,status", [
    ("(leq (dia (join x y)) (join (dia x) (dia y)))", 0, "canonical"),
    ("(leq (dia x) x)", 0, "not applicable"),
])
def test_check_eq(capsys, ineq, code, status):
    got, out, _ = run(capsys, "canon", "check-eq", "--in", "b2_diamond", "--ineq", ineq)
    assert got == code and out.strip() == status


def test_check_eq_errors(capsys):
    code, _, err = run(capsys, "canon", "check-eq", "--in", "n5_meet", "--ineq", "(leq (meet x y) x)")
    assert code == 2 and "meet" in err
    code, _, err = run(capsys, "canon", "check-eq", "--in", "b2_diamond", "--ineq", "(leq x")
    assert code == 2


def test_json_and_out(tmp_path, capsys):
    code, out, _ = run(capsys, "present", "enumerate", "--in", "pres1", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and len(rep["info"]["c_ideals"]) == 7
    dest = tmp_path / "r.json"
    code, out, _ = run(capsys, "canon", "ext", "--in", "m3", "--json", "--out", str(dest))
    assert out == "" and json.loads(dest.read_text())["passed"]


def test_emit_dot(capsys, tmp_path):
    code, out, _ = run(capsys, "emit", "dot", "--in", "b2")
    assert code == 0 and out.count("->") == 4 and out.startswith('digraph "b2"')
    path = tmp_path / "ch2.json"
    path.write_text('{"kind": "lattice", "elements": ["0", "1"], "leq": [["0", "1"]]}')
    code, out, _ = run(capsys, "emit", "dot", "--in", str(path), "--name", "two")
    assert 'digraph "two"' in out and out.count("->") == 1


def test_constant_top_map_is_not_applicable(tmp_path, capsys):
    path = tmp_path / "alg.json"
    path.write_text(json.dumps({
        "kind": "algebra",
        "lattice": {"elements": ["0", "1"], "leq": [["0", "1"]]},
        "ops": {"f": {"arity": 1, "table": ["1", "1"]}}}))
    assert run(capsys, "check", "--in", str(path))[0] == 0
    code, out, _ = run(capsys, "canon", "check-eq", "--in", str(path), "--ineq", "(leq (f x) x)")
    assert code == 0 and out.strip() == "not applicable"


def test_failed_report_exits_1_with_witness(monkeypatch, capsys):
    # no shipped input breaks a property, so force a failing report through
    # the driver to check the exit status and witness rendering
    from canonext import cli
    from canonext.report import Report

    def broken(args):
        rep = Report("forced")
        rep.record("density", False, ("u", "v"))
        return rep, ["density: FAILED"]

    monkeypatch.setitem(cli.COMMANDS, "check", broken)
    code, out, _ = run(capsys, "check", "--in", "ch2")
    assert code == 1 and "FAILED: density: ('u', 'v')" in out
    code, out, _ = run(capsys, "check", "--in", "ch2", "--json")
    rep = json.loads(out)
    assert code == 1 and not rep["passed"]


def test_corpus_run_is_deterministic(capsys):
    code, first, _ = run(capsys, "corpus", "run", "--only", "7,9", "--seed", "3", "--json")
    _, second, _ = run(capsys, "corpus", "run", "--only", "7,9", "--seed", "3", "--json")
    strip = lambda s: {k: {kk: vv for kk, vv in v["info"].items() if kk != "seconds"}
                       for k, v in json.loads(s)["info"]["criteria"].items()}
    assert code == 0 and strip(first) == strip(second)
    code, out, _ = run(capsys, "corpus", "run", "--only", "9")
    assert code == 0 and out.startswith("[PASS] criterion 9")
