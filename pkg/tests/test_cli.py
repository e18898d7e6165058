import io
import json
import os

from loy.cli import EXIT_BUDGET, EXIT_FAIL, EXIT_OK, EXIT_USAGE, main, parse_scope

from loygen import fixture_path, fixture_text

EXAMPLES = fixture_path("examples.loy")
RELAXED = fixture_path("examples_relaxed.loy")
VACUOUS = fixture_path("vacuous.loy")


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_parse_scope():
    s = parse_scope(["2", "Id=1"])
    assert s.default == 2 and s.bound("Id") == 1
    assert parse_scope([]).default == 3


def test_check_examples_fails():
    code, out, _ = run("check", EXAMPLES)
    assert code == EXIT_FAIL
    lines = out.splitlines()
    assert lines[0] == "core: satisfiable (scope 3)"
    assert "Employee.assign: unsatisfiable (scope 3)" in lines
    assert "ManagedEmployee.assign: unsatisfiable (scope 3)" in lines


def test_check_relaxed_ok_with_models():
    code, out, _ = run("check", RELAXED, "--format", "json")
    assert code == EXIT_OK
    doc = json.loads(out)
    targets = {t["target"]: t for t in doc["targets"]}
    assert targets["Employee.assign"]["verdict"] == "sat"
    assert "p" in targets["Employee.assign"]["model"]["vars"]


def test_check_without_inputs_is_usage_error():
    code, _, err = run("check")
    assert code == EXIT_USAGE and "no input files" in err


def test_check_missing_file():
    assert run("check", "/nonexistent/x.loy")[0] == EXIT_USAGE


def test_check_diagnostics_exit_two(tmp_path):
    bad = tmp_path / "bad.loy"
    bad.write_text("class P { x : P  m () modifies salary }")
    code, _, err = run("check", str(bad))
    assert code == EXIT_USAGE and "unknown field in modifies" in err


def test_check_budget_exhausted():
    assert run("check", EXAMPLES, "--budget", "0")[0] == EXIT_BUDGET


def test_bad_scope_is_usage_error():
    assert run("check", EXAMPLES, "--scope", "zero")[0] == EXIT_USAGE


def test_diagnose_core_on_consistent_spec():
    code, out, _ = run("diagnose", EXAMPLES)
    assert code == EXIT_OK
    assert out.strip() == "core constraints .. satisfiable"


def test_diagnose_method_trace():
    code, out, _ = run("diagnose", EXAMPLES, "--target", "method Employee.assign", "--scope", "2")
    assert code == EXIT_FAIL
    assert "[clash with Project_I, Employee_I]" in out


def test_diagnose_unknown_target():
    assert run("diagnose", EXAMPLES, "--target", "method Employee.fire")[0] == EXIT_USAGE
    assert run("diagnose", EXAMPLES, "--target", "everything")[0] == EXIT_USAGE


def test_diagnose_inline_formula():
    code, out, _ = run("diagnose", VACUOUS, "--target",
                       "formula all c : C | some c.b implies (some c.a or some c.r)")
    assert code == EXIT_FAIL
    assert out.rstrip().splitlines()[-1].strip() == "warning (unsatisfiable antecedent)"


def test_diagnose_invariant_json():
    code, out, _ = run("diagnose", fixture_path("pool.loy"), "--target", "invariant Pool#2",
                       "--format", "json")
    assert code == EXIT_FAIL
    assert json.loads(out)["tree"]["verdict"] == "unsat"


def test_encode_writes_golden(tmp_path):
    code, out, _ = run("encode", EXAMPLES, "--emit-alloy", str(tmp_path))
    assert code == EXIT_OK
    path = out.strip()
    assert path == os.path.join(str(tmp_path), "examples.als")
    with open(path, encoding="utf-8") as fh:
        first = fh.read()
    assert first == fixture_text("examples.als")
    run("encode", EXAMPLES, "--emit-alloy", str(tmp_path))
    with open(path, encoding="utf-8") as fh:
        assert fh.read() == first


def test_check_output_is_deterministic():
    assert run("check", RELAXED, "--models") == run("check", RELAXED, "--models")
