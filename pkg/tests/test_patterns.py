import random

from hypothesis import given, settings, strategies as st

from loy.encoder import encode_spec
from loy.frontend import load
from loy.patterns import (
    WarningKind, apply_pattern, check_core_first, diagnose_method, localize_invariants,
    problem_for, render_text, to_json,
)
from loy.relcore import ast as R
from loy.relcore import eval_formula, solve
from loy.relcore.solver import SAT, UNKNOWN, UNSAT

from loygen import encoded, random_spec

S1, S2 = R.Scope(1), R.Scope(2)
NOENV = R.TypeEnv()


def spec(src):
    return encode_spec(load(src)).problem


def join(v, rel):
    return R.Join(R.Var(v), R.Rel(rel))


def kinds(node):
    return [w.warning for w in node.warnings()]


def replays(problem, node, scope):
    """Every node verdict is reproduced by a direct solve of its query."""
    for n in node.walk():
        if n.verdict == UNKNOWN:
            continue
        r = solve(problem_for(problem, n.core), n.formula, n.env, scope)
        want = UNSAT if n.is_warning else n.verdict
        assert r.status == want, n.line()
        if n.model is not None:
            assert eval_formula(n.model, n.formula)


EXAMPLES = encoded("examples.loy").problem
PROJECT = R.TypeEnv((("x", "Project"),))
HAS_MANAGER = R.NonEmpty(join("x", "Project.manager"))

PLAIN = spec("class P { } class E { project : P }")
EMP = R.TypeEnv((("x", "E"),))
NO_PROJECT = R.Empty(join("x", "E.project"))


# atomic


def test_atomic_valid_under_invariant():
    n = apply_pattern(HAS_MANAGER, PROJECT, EXAMPLES, S2)
    assert n.verdict == SAT and n.note == "valid"
    assert n.children[0].verdict == UNSAT


def test_atomic_true_valid():
    assert apply_pattern(R.TRUE, NOENV, PLAIN, S2).note == "valid"


def test_atomic_contingent():
    n = apply_pattern(NO_PROJECT, EMP, PLAIN, S2)
    assert n.note == "contingent"
    assert n.children[0].verdict == SAT


# negation


def test_negation_of_true():
    n = apply_pattern(R.Not(R.TRUE), NOENV, PLAIN, S2)
    assert n.pattern == 1 and n.verdict == UNSAT
    child = n.children[0]
    assert child.question == "Q: Why is true valid?"
    assert child.note == "valid"


def test_negation_of_valid_atom():
    n = apply_pattern(R.Not(HAS_MANAGER), PROJECT, EXAMPLES, S2)
    assert n.verdict == UNSAT
    assert n.children[0].question == "Q: Why is some x.manager valid?"
    assert n.children[0].note == "valid"


def test_negation_of_contingent_atom():
    n = apply_pattern(R.Not(NO_PROJECT), EMP, PLAIN, S2)
    assert n.verdict == SAT
    assert n.children[0].verdict == SAT and n.children[0].note == "contingent"


# conjunction


def test_conjunction_of_trues():
    n = apply_pattern(R.And((R.TRUE, R.TRUE)), NOENV, PLAIN, S2)
    assert n.pattern == 2 and n.verdict == SAT
    assert [c.verdict for c in n.children] == [SAT, SAT]
    assert all(c.question == "Q: Is true vacuously satisfiable?" for c in n.children)


def test_conjunction_contradiction():
    n = apply_pattern(R.And((NO_PROJECT, R.Not(NO_PROJECT))), EMP, PLAIN, S1)
    assert n.verdict == UNSAT
    assert [c.verdict for c in n.children] == [SAT, SAT]
    assert n.children[0].question.startswith("Q: Why is")


def test_conjunction_marks_minimal_region():
    a = R.NonEmpty(join("x", "E.project"))
    n = apply_pattern(R.And((R.TRUE, NO_PROJECT, a, R.TRUE)), EMP, PLAIN, S2)
    regions = [c for c in n.children if c.note == "inconsistent region"]
    assert len(regions) == 1
    assert regions[0].query == "no x.project and some x.project"


# disjunction


def test_disjunction_of_contradictions():
    n = apply_pattern(R.Or((R.FALSE, R.FALSE)), NOENV, PLAIN, S2)
    assert n.pattern == 3 and n.verdict == UNSAT
    assert [c.verdict for c in n.children] == [UNSAT, UNSAT]


def test_disjunction_flags_valid_disjunct():
    n = apply_pattern(R.Or((NO_PROJECT, R.TRUE)), EMP, PLAIN, S2)
    assert n.verdict == SAT
    assert [c.note for c in n.children] == ["contingent", "valid"]


# implication


def test_implication_valid_consequent():
    n = apply_pattern(R.Implies(R.TRUE, R.TRUE), NOENV, PLAIN, S2)
    assert n.pattern == 4 and n.verdict == SAT
    assert kinds(n) == [WarningKind.VALID_CONSEQUENT]


def test_implication_independent_contingent_atoms():
    prob = spec("class P { q : P } class E { project : P }")
    env = R.TypeEnv((("x", "E"), ("y", "P")))
    a = R.Empty(join("x", "E.project"))
    b = R.Empty(join("y", "P.q"))
    n = apply_pattern(R.Implies(a, b), env, prob, S2)
    assert n.verdict == SAT and not n.warnings()
    notes = [c.note for c in n.children if c.note]
    assert notes == ["contingent", "contingent"]


def test_implication_unsat_antecedent():
    prob = spec("class P { } class E { project : P  invariant some project }")
    n = apply_pattern(R.Implies(NO_PROJECT, R.TRUE), EMP, prob, S2)
    assert kinds(n) == [WarningKind.UNSAT_ANTECEDENT]


# universal


def test_universal_empty_domain():
    prob = spec("class X { f : X  invariant no X }")
    n = apply_pattern(R.ForAll("x", "X", R.FALSE), NOENV, prob, S2)
    assert n.pattern == 5 and n.verdict == SAT
    assert kinds(n) == [WarningKind.EMPTY_DOMAIN_UNIVERSAL]
    assert n.warnings()[0].warning_text() == "warning (domain X is empty)"


def test_universal_counterexample():
    prob = spec("class X { f : X  invariant some f  invariant some X }")
    n = apply_pattern(R.ForAll("x", "X", R.Empty(join("x", "X.f"))), NOENV, prob, S2)
    assert n.verdict == UNSAT
    probe = n.children[0]
    assert probe.verdict == SAT and probe.model is not None
    assert probe.query == "not no x.f"


def test_universal_nonempty_domain_recurses():
    prob = spec("class X { f : X }")
    n = apply_pattern(R.ForAll("x", "X", R.Empty(join("x", "X.f"))), NOENV, prob, S2)
    assert [c.query for c in n.children] == ["X ≠ {}"]
    inner = n.children[0].children[0]
    assert inner.question == "Q: Is no x.f vacuously satisfiable?"


# existential


def test_existential_true():
    n = apply_pattern(R.Exists("x", "X", R.TRUE), NOENV, spec("class X { }"), S2)
    assert n.pattern == 6 and n.verdict == SAT


def test_existential_unsat_atom():
    prob = spec("class X { f : X  invariant some f }")
    n = apply_pattern(R.Exists("x", "X", R.Empty(join("x", "X.f"))), NOENV, prob, S2)
    assert n.verdict == UNSAT
    probe = n.children[0]
    assert probe.query == "X ≠ {}" and probe.verdict == SAT
    atom = probe.children[0]
    assert atom.question == "Q: Why is no x.f unsatisfiable?"
    assert atom.note == "unsatisfiable"


def test_existential_empty_domain():
    prob = spec("class X { f : X  invariant no X }")
    n = apply_pattern(R.Exists("x", "X", R.TRUE), NOENV, prob, S2)
    assert kinds(n) == [WarningKind.EMPTY_DOMAIN_EXISTENTIAL]
    assert n.warnings()[0].warning_text() == "warning (specification for X is unsatisfiable)"


# core check and methods


def test_core_sat_leaf():
    n = check_core_first(EXAMPLES, R.Scope(3))
    assert n.verdict == SAT and not n.children
    assert check_core_first(R.RelProblem()).verdict == SAT


def test_core_pool_regions():
    n = check_core_first(encoded("pool.loy").problem, R.Scope(3))
    assert n.verdict == UNSAT
    assert n.children[0].warning == WarningKind.INCONSISTENT_CORE
    assert n.regions == [("Employee_I", "Pool_I1", "Pool_I2")]


def test_diagnose_employee_assign():
    d = diagnose_method(encoded("examples.loy"), "Employee", "assign")
    assert d.core.verdict == SAT and d.tree.verdict == UNSAT and not d.ok
    regions = [n for n in d.tree.walk() if n.note and "inconsistent region" in n.note]
    assert [n.query for n in regions] == ["Employee_assign_Q"]
    clash = regions[0].children[-1]
    assert clash.note == "clash with Project_I, Employee_I"


def test_diagnose_relaxed_assign_sat_with_model():
    d = diagnose_method(encoded("examples_relaxed.loy"), "Employee", "assign")
    assert d.tree.verdict == SAT
    assert d.tree.model is not None


def test_diagnose_trivial_method_flags_valid_conjuncts():
    es = encode_spec(load("class A { x : A  noop () }"))
    d = diagnose_method(es, "A", "noop")
    assert d.tree.verdict == SAT
    assert any(n.note == "valid" for n in d.tree.walk())


def test_localize_invariants():
    es = encoded("examples.loy")
    f, env = es.method("Employee", "assign").query()
    assert localize_invariants(es.problem, f, env) == ("Project_I", "Employee_I")


def test_tree_renderings():
    n = apply_pattern(R.Implies(R.TRUE, R.TRUE), NOENV, PLAIN, S2)
    text = render_text(n)
    assert text.splitlines()[0] == "Pattern 4 -- Implication."
    assert text.splitlines()[-1].strip() == "warning (valid consequent)"
    doc = to_json(n)
    assert doc["pattern"] == 4 and doc["verdict"] == SAT
    assert doc["children"][1]["children"][0]["warning"] == "ValidConsequent"


def test_replay_fixture_trees():
    es = encoded("examples.loy")
    d = diagnose_method(es, "Employee", "assign", R.Scope(2))
    replays(es.problem, d.tree, R.Scope(2))
    pool = encoded("pool.loy").problem
    replays(pool, check_core_first(pool, R.Scope(2)), R.Scope(2))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_invariant_trees(seed):
    rng = random.Random(seed)
    es = encode_spec(load(random_spec(rng)))
    invs = [c for c in es.problem.core if c.kind == "invariant"]
    if not invs:
        return
    c = rng.choice(invs)
    rest = es.problem.with_core([d for d in es.problem.core if d is not c])
    n = apply_pattern(c.formula, NOENV, rest, S1)
    assert n.depth() <= 2 * R.height(c.formula) + 2
    replays(rest, n, S1)
