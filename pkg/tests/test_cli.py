import json
import pathlib
import subprocess
import sys

import jsonschema
import pytest
from hypothesis import given, strategies as st

from bitwisted.cli import run_command

SCHEMAS = pathlib.Path(__file__).resolve().parent.parent / "docs" / "schemas"
POLY = "poly A=[[2,1],[1,1]]"


def run(capsys, *argv):
    code = run_command(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, "--json", *argv)
    return code, json.loads(out)


def schema(name):
    return json.loads((SCHEMAS / f"{name}.json").read_text())


def test_reidemeister_example(capsys):
    code, out, _ = run(capsys, "reidemeister", "--group", "abelian invariants=[12]", "--phi", "[5]", "--psi", "[1]")
    assert (code, out.strip()) == (0, "4")


def test_verify_bf_example(capsys):
    code, out, _ = run(capsys, "verify-bf", "--group", "abelian invariants=[12]", "--phi", "[5]", "--psi", "[1]")
    assert code == 0 and out.startswith("4 = 4 = 4") and "PASS" in out


def test_bs_eval_example(capsys):
    code, out, _ = run(capsys, "bs", "eval", "-n", "2", "a^2 b a^-2")
    assert (code, out.strip()) == (0, "(1/4, 0)")


def test_reidemeister_infinite_and_finite_groups(capsys):
    code, out, _ = run(capsys, "reidemeister", "-g", "abelian invariants=[2] rank=1")
    assert (code, out.strip()) == (0, "infinite")
    code, out, _ = run(capsys, "reidemeister", "-g", "S3")
    assert (code, out.strip()) == (0, "3")
    code, out, _ = run(capsys, "reidemeister", "-g", "finite-perm gens=[(0 1 2),(0 1)]", "--phi", "trivial",
                       "--psi", "trivial")
    assert (code, out.strip()) == (0, "6")


def test_classes(capsys):
    code, data = run_json(capsys, "classes", "-g", "D4")
    assert code == 0 and data["schema"] == "bitwisted.classes/1" and data["count"] == 5
    assert sorted(len(c) for c in data["classes"]) == [1, 1, 2, 2, 2]


def test_verify_bf_json_schema(capsys):
    s = schema("verify-bf")
    for argv in (["verify-bf", "-g", "abelian invariants=[2,4]", "--phi", "[[1,0],[2,3]]", "--psi", "1"],
                 ["verify-bf", "--finite", "-g", "Q8", "--phi", "inner=1"],
                 ["verify-bf", "--finite", "--all-pairs", "-g", "S3"],
                 ["verify-bf", "--counterexample", "-g", "D4"]):
        code, data = run_json(capsys, *argv)
        assert code == 0, argv
        jsonschema.validate(data, s)
        assert data["status"] == "PASS"


def test_counterexample_text(capsys):
    code, out, _ = run(capsys, "verify-bf", "--counterexample", "-g", "S3")
    assert code == 0 and "R = 6, #Coin = 3" in out and "INEQUALITY" in out


def test_chartab(capsys):
    code, out, _ = run(capsys, "chartab", "-g", "S3")
    assert code == 0
    lines = out.rstrip("\n").splitlines()
    assert len(lines) == 2 + 3 and len({len(l) for l in lines}) == 1
    code, data = run_json(capsys, "chartab", "-g", "A4")
    assert sorted(data["degrees"]) == [1, 1, 1, 3]


def test_snf(capsys):
    code, data = run_json(capsys, "snf", "[[2,4,4],[-6,6,12],[10,-4,-16]]")
    assert code == 0 and data["diagonal"] == [2, 6, 12] and data["verified"]


def test_bs_endo_check_and_certify(capsys):
    code, data = run_json(capsys, "bs", "endo-check", "-n", "2", "--a", "a b", "--b", "b^3")
    assert code == 0 and data["degree_constraint"] == "Consistent" and data["injective_admissible"]
    code, data = run_json(capsys, "bs", "certify", "-n", "2", "--phi-a", "(1, 1)", "--phi-b", "(3/4, 0)",
                          "--samples", "200")
    assert code == 0
    jsonschema.validate(data, schema("certify"))
    assert data["checks"]["passed"] == 200
    code, _, err = run(capsys, "bs", "endo-check", "-n", "2", "--a", "a^2", "--b", "b")
    assert code == 2 and "RelationViolated" in err


def test_certify_rejects_non_injective(capsys):
    code, _, err = run(capsys, "bs", "certify", "-n", "2", "--phi-a", "a^2", "--phi-b", "(0, 0)")
    assert code == 2


def test_decide_outputs(capsys):
    s = schema("decide")
    code, data = run_json(capsys, "decide", "-g", POLY, "-U", "((0,0),0)", "-V", "((1,0),0)")
    assert code == 0 and data["verdict"] == "NO" and data["modulus"] == 2
    jsonschema.validate(data, s)
    code, data = run_json(capsys, "decide", "-g", POLY, "--phi", "M=[[0,1],[-1,0]] eps=-1",
                          "-U", "((1,0),0)", "-V", "((2,3),0)")
    jsonschema.validate(data, s)
    assert data["certificate_verified"]
    code, data = run_json(capsys, "decide", "-g", POLY, "-U", "((0,0),0)", "-V", "((1,0),0)",
                          "--shells", "0", "--max-modulus", "1")
    assert code == 0 and data["verdict"] == "EXHAUSTED"
    jsonschema.validate(data, s)


def test_quotient_bound(capsys):
    code, data = run_json(capsys, "quotient-bound", "-g", POLY, "--phi", "M=[[0,1],[-1,0]] eps=-1",
                          "--moduli", "2..8")
    assert code == 0 and data["bound"] == 4
    code, out, _ = run(capsys, "quotient-bound", "-g", POLY, "--search", "--moduli", "2..7", "--window", "3")
    assert code == 0 and "14 compatible automorphisms" in out


@pytest.mark.parametrize("argv", [
    ["reidemeister", "-g", "abelian invariants=[2,3]"],
    ["reidemeister", "-g", "abelian invariants=[12]", "--phi", "[[1,2]]"],
    ["classes", "-g", "bs n=2"],
    ["chartab", "-g", "X7"],
    ["snf", "[[1,2],[3]]"],
    ["bs", "eval", "-n", "2", "a^2 c"],
    ["bs", "eval", "-n", "1", "a"],
    ["decide", "-g", "abelian invariants=[2]", "-U", "((0,0),0)", "-V", "((0,0),0)"],
    ["decide", "-g", POLY, "-U", "((0,0),0)", "-V", "(0,0)"],
    ["quotient-bound", "-g", POLY, "--moduli", "x..y"],
    ["nonsense"],
    [],
])
def test_input_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2


_VALID = ["abelian invariants=[12]", "bs n=2", POLY, "finite-perm gens=[(0 1 2),(0 1)]"]


@given(st.sampled_from(_VALID), st.integers(1, 40), st.text(alphabet="[](),=/ ^-0123456789abxyz", max_size=6))
def test_malformed_specs_exit_2(text, cut, junk):
    broken = text[:cut % len(text)] + junk
    from bitwisted.parsing import parse_group_spec
    try:
        parse_group_spec(broken)
    except Exception:
        code = run_command(["reidemeister", "-g", broken])
        assert code == 2


@given(st.text(max_size=30))
def test_exit_codes_never_crash(text):
    for argv in (["reidemeister", "-g", text], ["bs", "eval", "-n", "3", text], ["snf", text]):
        assert run_command(argv) in (0, 2)


def test_deterministic_output():
    cmd = [sys.executable, "-m", "bitwisted.cli", "--json", "chartab", "-g", "D6"]
    a = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    assert a == b


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "bitwisted.cli", "bs", "eval", "-n", "3", "a b^5 a^-1"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip() == "(5/3, 0)"
