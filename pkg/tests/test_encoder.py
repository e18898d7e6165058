import pytest

from loy.encoder import (
    StateContext, build_frame_condition, depends_closure, encode_formula, encode_spec,
)
from loy.encoder.alloy import emit_alloy_text
from loy.errors import InternalFault, LoyError
from loy.frontend import load
from loy.frontend import ast as A
from loy.relcore import ast as R
from loy.relcore import eval_formula, render, solve

from loygen import encoded, fixture_text

S2 = R.Scope(2)


def core(es, label):
    return next(c for c in es.problem.core if c.label == label)


def state_read(state, cls, ident="i"):
    return R.Join(R.Var(ident), R.Join(R.Var(state), R.Rel(f"State.{cls}")))


def test_domains_and_relations():
    es = encoded("examples.loy")
    p = es.problem
    assert p.domain("Obj").abstract
    assert p.domain("ManagedEmployee").parent == "Employee"
    assert p.domain("Employee").parent == "Obj"
    assert p.domain("Idx").exact == 2
    assert p.relation("Employee.project").mults == (R.ANY, R.LONE)
    assert p.relation("State.managedEmployee").columns == ("State", "Id", "ManagedEmployee")
    assert p.relation("State.managedEmployee").mults == (R.ANY, R.LONE, R.LONE)
    assert p.relation("Obj.fields").columns == ("Obj", "Idx", "Obj")


def test_field_tables_order():
    es = encoded("examples.loy")
    assert es.field_tables["ManagedEmployee"] == ["manager", "project"]
    assert es.field_tables["Employee"] == ["project"]


def test_depends_pair_and_cardinality():
    c = core(encoded("examples.loy"), "ManagedEmployee_depends")
    body = c.formula.body
    pair = R.Lit.of(("Idx$0", "Idx$1"))
    deps = R.Join(R.Var("o"), R.Rel("Obj.depends"))
    assert c.formula.domain == "ManagedEmployee"
    assert R.Subset(pair, deps) in body.args
    assert R.CardEq(deps, 1) in body.args


def test_empty_class_has_no_depends():
    es = encode_spec(load("class A { }"))
    labels = [c.label for c in es.problem.core]
    assert labels == ["A_fieldtable"]
    assert es.field_tables["A"] == []


def test_employee_invariant_predicate():
    es = encoded("examples.loy")
    c = core(es, "Employee_I")
    x = R.Var("x")
    want = R.ForAll("x", "Employee", R.Empty(
        R.Join(R.Join(x, R.Rel("Employee.project")), R.Rel("Project.manager"))))
    assert c.kind == "invariant" and c.formula == want
    assert render(c.formula, es.problem) == "all x : Employee | no x.project.manager"


def test_project_invariant_direct_mapping():
    c = core(encoded("examples.loy"), "Project_I")
    assert c.formula == R.ForAll("x", "Project", R.NonEmpty(R.Join(R.Var("x"), R.Rel("Project.manager"))))


def test_several_invariants_are_numbered_and_global_ones_unquantified():
    es = encoded("pool.loy")
    labels = [c.label for c in es.problem.core if c.kind == "invariant"]
    assert labels == ["Employee_I", "Pool_I1", "Pool_I2"]
    assert core(es, "Pool_I2").formula == R.NonEmpty(R.Rel("Pool"))


def test_reserved_class_name():
    with pytest.raises(LoyError):
        encode_spec(load("class State { }"))


def test_encode_primed_receiver_field():
    es = encoded("examples.loy")
    em = es.method("ManagedEmployee", "assign")
    post = es.resolved["ManagedEmployee"].methods["assign"].item.post
    ctx = StateContext(es.resolved, "ManagedEmployee", {"p": "Project"},
                       state_read("s0", "managedEmployee"), state_read("s1", "managedEmployee"))
    f = encode_formula(post[0].formula, ctx)
    assert f == R.SetEqual(R.Join(state_read("s1", "managedEmployee"),
                                  R.Rel("Employee.project")), R.Var("p"))
    g = encode_formula(post[1].formula, ctx)
    assert g.right == R.Join(R.Var("p"), R.Rel("Project.manager"))
    assert render(em.post, es.problem) == (
        "s1.managedEmployee[i].project = p and s1.managedEmployee[i].manager = p.manager")


def test_prime_in_stateless_context_is_fault():
    es = encoded("examples.loy")
    f = A.SomeExpr(A.FieldAccess(None, "manager", primed=True))
    with pytest.raises(InternalFault):
        encode_formula(f, StateContext.stateless(es.resolved, "Project"))


def test_method_pre_mentions_only_before_state():
    em = encoded("examples.loy").method("Employee", "assign")
    assert "s1" not in R.free_vars(em.pre)
    assert {"s0", "s1"} <= R.free_vars(em.frame)


def test_unknown_method():
    with pytest.raises(KeyError):
        encoded("examples.loy").method("Employee", "fire")


# frame conditions


def test_depends_closure():
    rs = encoded("examples.loy").resolved
    assert depends_closure(rs["ManagedEmployee"], ["project"]) == {"project", "manager"}
    assert depends_closure(rs["Employee"], ["project"]) == {"project"}


def _changed(state_cls, fld, ident="i"):
    before = R.Join(state_read("s0", state_cls, ident), R.Rel(fld))
    after = R.Join(state_read("s1", state_cls, ident), R.Rel(fld))
    return R.Not(R.SetEqual(before, after))


def test_frame_exempts_dependent_field():
    es = encoded("examples_relaxed.loy")
    f, env = es.method("ManagedEmployee", "assign").query()
    probe = _changed("managedEmployee", "ManagedEmployee.manager")
    r = solve(es.problem, R.And((f, probe)), env, S2)
    assert r.sat


FRAMED = """
class M { }
class E {
  project : M
  other : M
  move () modifies project
  pure ()
}
"""


def test_frame_pins_unmodified_field():
    es = encode_spec(load(FRAMED))
    f, env = es.method("E", "move").query()
    assert solve(es.problem, R.And((f, _changed("e", "E.project"))), env, S2).sat
    assert solve(es.problem, R.And((f, _changed("e", "E.other"))), env, S2).unsat


def test_frame_pins_other_ids():
    es = encode_spec(load(FRAMED))
    f, env = es.method("E", "move").query()
    env = env.extend("y", "Id")
    other = R.And((R.Not(R.SetEqual(R.Var("y"), R.Var("i"))),
                   R.Not(R.SetEqual(state_read("s0", "e", "y"), state_read("s1", "e", "y")))))
    assert solve(es.problem, R.And((f, other)), env, S2).unsat
    m = R.Not(R.SetEqual(state_read("s0", "m", "y"), state_read("s1", "m", "y")))
    assert solve(es.problem, R.And((f, m)), env, S2).unsat


def test_empty_modifies_pins_everything():
    es = encode_spec(load(FRAMED))
    em = es.method("E", "pure")
    f, env = em.query()
    env = env.extend("y", "Id")
    moved = R.Not(R.SetEqual(state_read("s0", "e", "y"), state_read("s1", "e", "y")))
    assert solve(es.problem, R.And((f, moved)), env, S2).unsat
    assert solve(es.problem, f, env, S2).sat


def test_frame_models_satisfy_frame():
    es = encode_spec(load(FRAMED))
    em = es.method("E", "move")
    frame = build_frame_condition(es.resolved, "E", es.resolved["E"].methods["move"].item,
                                  ident=em.ident, s0=em.s0, s1=em.s1)
    f, env = em.query()
    r = solve(es.problem, f, env, S2)
    assert r.sat and eval_formula(r.model, frame)


def test_path_modifies_lets_intermediate_change():
    src = """
class M { }
class P { boss : M }
class E {
  project : P
  promote (m : M) ensures project.boss' = m modifies project.boss
}
"""
    es = encode_spec(load(src))
    f, env = es.method("E", "promote").query()
    assert solve(es.problem, f, env, S2).sat


# method queries


def test_employee_assign_unsat_with_invariants():
    es = encoded("examples.loy")
    f, env = es.method("Employee", "assign").query()
    assert solve(es.problem, f, env).unsat


def test_employee_assign_sat_without_project_invariant():
    es = encoded("examples_relaxed.loy")
    f, env = es.method("Employee", "assign").query()
    assert env.names() == ("this", "p", "i", "s0", "s1")
    r = solve(es.problem, f, env)
    assert r.sat
    assert {"this", "p"} <= set(r.model.vars)


def test_trivial_method_sat():
    es = encode_spec(load("class A { x : A  noop () }"))
    f, env = es.method("A", "noop").query()
    assert solve(es.problem, f, env).sat


# Alloy text


def squash(s):
    return "".join(s.split())


def test_emission_expected_lines():
    text = squash(emit_alloy_text(encoded("examples.loy")))
    for line in (
        "pred Employee_I () { all x : Employee | no x.project.manager }",
        "sig ManagedEmployee extends Employee { manager : lone Manager }",
        "sig Obj { fields : Seq [Obj], depends : SeqIdx -> SeqIdx }",
        "at (o.fields, idx0) = o.manager",
        "# depends = 1",
        "managedEmployee : Id lone -> lone ManagedEmployee",
        "s1.managedEmployee[i].project = p",
        "s1.managedEmployee[i].manager = p.manager",
    ):
        assert squash(line) in text, line


def test_emission_empty_class():
    text = emit_alloy_text(encode_spec(load("class A { }")))
    assert "sig A extends Obj { } { }" in text
    assert "fact A_fieldtable { }" in text


def test_emission_matches_golden_and_is_deterministic():
    text = emit_alloy_text(encoded("examples.loy"))
    assert squash(text) == squash(fixture_text("examples.als"))
    assert emit_alloy_text(encoded("examples.loy")) == text
