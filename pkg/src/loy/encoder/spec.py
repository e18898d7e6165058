"""Encoding of a resolved Loy specification as a relational problem."""

from __future__ import annotations

from dataclasses import replace
from typing import Dict, List

from loy.errors import LoyError
from loy.encoder.formula import (
    StateContext, bound_names, encode_clauses, encode_formula, mentions_receiver,
)
from loy.encoder.frame import build_frame_condition, exact_member
from loy.encoder.model import (
    DEPENDS, FIELDS, ID, IDX, OBJ, RESERVED, STATE, EncodedInvariant, EncodedMethod,
    EncodedSpec, field_rel, fresh, idx_atom, map_rel, lower_first, state_read,
)
from loy.frontend import ast as A
from loy.frontend.resolve import ResolvedSpec
from loy.relcore import ast as R
from loy.relcore.binding import atom_name


def _domains(rs: ResolvedSpec, n_idx: int) -> List[R.Domain]:
    out = [R.Domain(OBJ, abstract=True)]
    for name in rs.order():
        out.append(R.Domain(name, rs[name].superclass or OBJ))
    out += [R.Domain(IDX, exact=n_idx), R.Domain(ID), R.Domain(STATE)]
    return out


def _relations(rs: ResolvedSpec) -> List[R.Relation]:
    out = []
    any_set = False
    for name in rs.order():
        for d in rs[name].spec.decls:
            mult = R.ANY if d.multiplicity == A.SET else R.LONE
            any_set = any_set or d.multiplicity == A.SET
            out.append(R.Relation(field_rel(name, d.name), (name, d.target), (R.ANY, mult), d.name))
    out.append(R.Relation(FIELDS, (OBJ, IDX, OBJ), (R.ANY, R.ANY, R.ANY if any_set else R.LONE), "fields"))
    out.append(R.Relation(DEPENDS, (OBJ, IDX, IDX), (R.ANY, R.ANY, R.ANY), "depends"))
    for name in rs.order():
        out.append(R.Relation(map_rel(name), (STATE, ID, name), (R.ANY, R.LONE, R.LONE),
                              lower_first(name)))
    return out


def _fieldtable(rs: ResolvedSpec, name: str, n_idx: int) -> R.RelFormula:
    o = R.Var("o")
    table = R.Join(o, R.Rel(FIELDS))
    parts: List[R.RelFormula] = []
    rc = rs[name]
    for k in range(n_idx):
        at = R.Join(idx_atom(k), table)
        if k < len(rc.fields):
            f = rc.fields[k].name
            parts.append(R.SetEqual(at, R.Join(o, R.Rel(field_rel(rc.field_owner[f], f)))))
        else:
            parts.append(R.Empty(at))
    body = R.conj(*parts)
    if rc.subclasses:
        body = R.Implies(exact_member(rs, o, name), body)
    return R.ForAll("o", name, body)


def _depends(rs: ResolvedSpec, name: str):
    rc = rs[name]
    pairs = []
    for dep in rc.depends:
        for src in dep.sources:
            pair = (atom_name(IDX, rc.index_of(dep.dependent)), atom_name(IDX, rc.index_of(src)))
            if pair not in pairs:
                pairs.append(pair)
    if not pairs:
        return None
    own = R.Join(R.Var("o"), R.Rel(DEPENDS))
    body = R.Subset(R.Lit.of(*pairs, arity=2), own)
    if rs.is_leaf(name):
        body = R.And((body, R.CardEq(own, len(pairs))))
    return R.ForAll("o", name, body)


def _invariants(rs: ResolvedSpec) -> List[EncodedInvariant]:
    out = []
    for name in rs.order():
        invs = rs[name].declared_invariants()
        for k, inv in enumerate(invs, 1):
            label = f"{name}_I" if len(invs) == 1 else f"{name}_I{k}"
            if mentions_receiver(inv.formula):
                x = fresh("x", bound_names(inv.formula))
                body = encode_formula(inv.formula, StateContext.stateless(rs, name, x))
                f = R.ForAll(x, name, body)
            else:
                f = encode_formula(inv.formula, StateContext.stateless(rs, None))
            out.append(EncodedInvariant(label, name, k, f))
    return out


def encode_method(rs: ResolvedSpec, cls: str, m: A.MethodSpec) -> EncodedMethod:
    taken = {p.name for p in m.params}
    for c in m.pre + m.post:
        taken |= bound_names(c.formula)
    names = {}
    for base in ("this", "i", "s0", "s1", "x"):
        names[base] = fresh(base, taken)
        taken.add(names[base])
    i, s0, s1 = names["i"], names["s0"], names["s1"]
    ctx = StateContext(rs, cls, {p.name: p.target for p in m.params},
                       state_read(s0, cls, i), state_read(s1, cls, i))
    return EncodedMethod(
        cls, m.name, tuple((p.name, p.target) for p in m.params), names["this"], i, s0, s1,
        link=R.SetEqual(state_read(s0, cls, i), R.Var(names["this"])),
        pre=encode_clauses(m.pre, replace(ctx, after=None)),
        post=encode_clauses(m.post, ctx),
        frame=build_frame_condition(rs, cls, m, i, s0, s1, names["x"]))


def encode_spec(rs: ResolvedSpec) -> EncodedSpec:
    """Domains, relations and core constraints for ``rs``; methods are encoded too."""
    for name in rs.order():
        if name in RESERVED:
            raise LoyError(f"class name {name} is reserved by the encoding")
    n_idx = max([len(rs[c].fields) for c in rs.order()] + [1])
    core: List[R.Constraint] = []
    tables: Dict[str, List[str]] = {}
    for name in rs.order():
        tables[name] = [f.name for f in rs[name].fields]
        core.append(R.Constraint(f"{name}_fieldtable", _fieldtable(rs, name, n_idx)))
        dep = _depends(rs, name)
        if dep is not None:
            core.append(R.Constraint(f"{name}_depends", dep))
    invs = _invariants(rs)
    core += [R.Constraint(inv.label, inv.formula, "invariant") for inv in invs]
    methods = {}
    preds = [(inv.label, R.Predicate((), inv.formula)) for inv in invs]
    for name in rs.order():
        for m in rs[name].spec.methods:
            em = encode_method(rs, name, m)
            methods[(name, m.name)] = em
            env = em.env().pairs
            preds += [(f"{em.label}_P", R.Predicate(env, em.pre)),
                      (f"{em.label}_Q", R.Predicate(env, em.post)),
                      (f"{em.label}_F", R.Predicate(env, em.frame))]
    problem = R.RelProblem(tuple(_domains(rs, n_idx)), tuple(_relations(rs)), tuple(core),
                           tuple(preds))
    return EncodedSpec(rs, problem, tables, invs, methods)
