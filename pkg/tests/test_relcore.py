import random

import pytest
from hypothesis import given, settings, strategies as st

from loy.errors import InternalFault
from loy.relcore import ast as R
from loy.relcore import (
    Binding, all_models, check_consistent, check_valid, eval_formula, render, solve,
)
from loy.relcore.enumerate import brute_models, brute_solve
from loy.relcore.solver import UNKNOWN

from relgen import random_problem


def pool_problem():
    doms = (R.Domain("Project"), R.Domain("Employee"), R.Domain("Pool", parent="Employee"))
    rels = (R.Relation("project", ("Employee", "Project"), (R.ANY, R.LONE)),)
    pj = lambda v: R.Join(R.Var(v), R.Rel("project"))
    core = (
        R.Constraint("Employee_I", R.ForAll("x", "Employee", R.NonEmpty(pj("x"))), "invariant"),
        R.Constraint("Pool_I", R.ForAll("x", "Pool", R.Empty(pj("x"))), "invariant"),
        R.Constraint("some_Pool", R.NonEmpty(R.Rel("Pool")), "invariant"),
    )
    return R.RelProblem(doms, rels, core)


def manager_binding():
    return Binding(
        {"Employee": frozenset({"e1"}), "Project": frozenset({"p1"}), "Manager": frozenset({"m1"})},
        {"project": frozenset({("e1", "p1")}), "manager": frozenset({("p1", "m1")})},
        {"e": "e1"}, {"project": 2, "manager": 2},
    )


# evalFormula


def test_eval_nonempty_pool_false():
    b = Binding({"Pool": frozenset()}, {}, {}, {})
    assert eval_formula(b, R.NonEmpty(R.Rel("Pool"))) is False


def test_eval_true_on_any_binding():
    assert eval_formula(Binding(), R.TRUE)
    assert eval_formula(manager_binding(), R.TRUE)
    assert not eval_formula(Binding(), R.FALSE)


def test_eval_two_step_join():
    f = R.Empty(R.Join(R.Join(R.Var("e"), R.Rel("project")), R.Rel("manager")))
    assert eval_formula(manager_binding(), f) is False


def test_eval_unbound_variable_is_fault():
    with pytest.raises(InternalFault):
        eval_formula(Binding(), R.NonEmpty(R.Var("ghost")))


def test_eval_arity_mismatch_is_fault():
    b = manager_binding()
    with pytest.raises(InternalFault):
        eval_formula(b, R.SetEqual(R.Rel("project"), R.Var("e")))


# solve


def test_solve_pool_unsat():
    r = solve(pool_problem(), scope=R.Scope(3))
    assert r.unsat
    assert str(r) == "unsatisfiable (scope 3)"


def test_solve_empty_problem():
    r = solve(R.RelProblem())
    assert r.sat


def test_solve_exists_scope_one():
    p = R.RelProblem((R.Domain("D"),), (), (R.Constraint("c", R.NonEmpty(R.Rel("D"))),))
    r = solve(p, R.Exists("x", "D", R.TRUE), scope=R.Scope(1))
    assert r.sat and len(r.model.elements["D"]) == 1


def test_solve_free_var_without_type_is_fault():
    with pytest.raises(InternalFault):
        solve(R.RelProblem((R.Domain("D"),)), R.NonEmpty(R.Var("x")))


def test_solve_notes_defaulted_scope():
    p = R.RelProblem((R.Domain("D"), R.Domain("E")))
    r = solve(p, scope=R.Scope.of(2, D=1))
    assert r.notes == ["scope for E defaulted to 2"]


def test_solve_budget_reports_unknown():
    r = solve(pool_problem(), scope=R.Scope(3), budget=0)
    assert r.status == UNKNOWN


def test_subdomains_share_pool_and_are_disjoint():
    doms = (R.Domain("A"), R.Domain("B", parent="A"), R.Domain("C", parent="A"))
    both = R.Exists("x", "B", R.Subset(R.Var("x"), R.Rel("C")))
    assert solve(R.RelProblem(doms), both).unsat
    big = R.And((R.CardEq(R.Rel("B"), 2), R.CardEq(R.Rel("C"), 2)))
    assert solve(R.RelProblem(doms), big, scope=R.Scope(3)).unsat
    assert solve(R.RelProblem(doms), big, scope=R.Scope(4)).sat


def test_lone_column():
    p = R.RelProblem((R.Domain("D"),), (R.Relation("r", ("D", "D"), (R.ANY, R.LONE)),))
    two = R.Exists("x", "D", R.CardEq(R.Join(R.Var("x"), R.Rel("r")), 2))
    assert solve(p, two).unsat


def test_model_is_deterministic():
    p, f, env = random_problem(random.Random(7))
    a = solve(p, f, env, R.Scope(2))
    b = solve(p, f, env, R.Scope(2))
    assert a.status == b.status
    if a.sat:
        assert a.model.dump() == b.model.dump()


# checkConsistent / checkValid


def test_consistent_property_test_against_pool():
    f = R.Exists("e", "Employee", R.Not(R.Subset(R.Var("e"), R.Rel("Pool"))))
    assert check_consistent(pool_problem(), f).unsat


def test_consistent_true():
    assert check_consistent(R.RelProblem((R.Domain("D"),)), R.TRUE).sat


def test_consistent_nonempty_scope_two():
    r = check_consistent(R.RelProblem((R.Domain("D"),)), R.NonEmpty(R.Rel("D")),
                         scope=R.Scope.of(3, D=2))
    assert r.sat


def test_consistent_unknown_predicate():
    with pytest.raises(KeyError):
        check_consistent(R.RelProblem(), "nope")


def test_named_predicate_and_assert():
    pred = R.Predicate((("x", "D"),), R.TRUE)
    p = R.RelProblem((R.Domain("D"),), predicates=(("P", pred),), asserts=(("A", pred),))
    assert check_consistent(p, "P").sat
    assert check_valid(p, "A").unsat


def test_valid_true():
    assert check_valid(R.RelProblem((R.Domain("D"),)), R.TRUE).unsat


def test_valid_nonempty_counterexample():
    r = check_valid(R.RelProblem((R.Domain("D"),)), R.NonEmpty(R.Rel("D")))
    assert r.sat and r.model.elements["D"] == frozenset()


def test_valid_no_manager_counterexample():
    doms = (R.Domain("Manager"), R.Domain("Project"), R.Domain("Employee"))
    rels = (R.Relation("manager", ("Project", "Manager"), (R.ANY, R.LONE)),
            R.Relation("project", ("Employee", "Project"), (R.ANY, R.LONE)))
    core = (R.Constraint("Project_I", R.ForAll(
        "x", "Project", R.NonEmpty(R.Join(R.Var("x"), R.Rel("manager")))), "invariant"),
        R.Constraint("holds", R.Exists(
            "e", "Employee", R.NonEmpty(R.Join(R.Var("e"), R.Rel("project"))))))
    claim = R.ForAll("x", "Employee", R.Empty(
        R.Join(R.Join(R.Var("x"), R.Rel("project")), R.Rel("manager"))))
    r = check_valid(R.RelProblem(doms, rels, core), claim, scope=R.Scope(2))
    assert r.sat and not eval_formula(r.model, claim)


# properties against the brute-force oracle


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 2))
def test_solve_agrees_with_brute_force(seed, k):
    p, f, env = random_problem(random.Random(seed))
    r = solve(p, f, env, R.Scope(k))
    assert r.sat == (brute_solve(p, f, env, R.Scope(k)) is not None)
    if r.sat:
        assert eval_formula(r.model, R.conj(p.core_formula, f))
        assert r.model.violations(p, R.Scope(k)) == []


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_sat_is_monotone_in_scope(seed):
    p, f, env = random_problem(random.Random(seed))
    seen = False
    for k in (1, 2, 3):
        s = solve(p, f, env, R.Scope(k)).sat
        assert s or not seen
        seen = seen or s


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_valid_agrees_with_brute_force(seed):
    p, f, env = random_problem(random.Random(seed))
    if len(env):
        return
    sc = R.Scope(2)
    valid = all(eval_formula(b, f) for b in brute_models(p, sc))
    assert check_valid(p, f, scope=sc).unsat == valid


def test_all_models_matches_brute_force_projection():
    p, _, _ = random_problem(random.Random(3))
    sc = R.Scope(2)
    doms = [d.name for d in p.domains]
    rels = [r.name for r in p.relations]
    got = {m.dump() for m in all_models(p, sc, doms, rels)}
    want = {Binding(dict(b.elements), dict(b.tuples), {}, b.arities).dump()
            for b in brute_models(p, sc)}
    assert got == want


def test_render_state_map_and_quantifier():
    p = R.RelProblem((R.Domain("State"), R.Domain("Id"), R.Domain("E")),
                     (R.Relation("State.e", ("State", "Id", "E"), (R.ANY, R.LONE, R.LONE), "e"),))
    f = R.ForAll("x", "Id", R.NonEmpty(R.Join(R.Var("x"), R.Join(R.Var("s"), R.Rel("State.e")))))
    assert render(f, p) == "all x : Id | some s.e[x]"
    assert render(R.Implies(R.TRUE, R.Or((R.TRUE, R.FALSE)))) == "true implies (true or false)"

