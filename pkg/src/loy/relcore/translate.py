"""Grounding of relational formulas into a boolean circuit.

Every candidate domain membership and relation tuple gets a circuit input.
Quantified variables are expanded over candidate atoms; free variables of
a query are represented symbolically by one-hot selector inputs.
"""

from __future__ import annotations

import itertools
from typing import Dict, List, Mapping, Set, Tuple

from loy.errors import InternalFault
from loy.relcore.ast import (
    LONE, And, CardEq, Empty, Exists, ForAll, Implies, Join, Lit, Named,
    NonEmpty, Not, Or, Rel, RelExpr, RelFormula, RelProblem, Scope, SetEqual,
    Subset, TypeEnv, Var,
)
from loy.relcore.binding import Binding, Universe
from loy.relcore.circuit import F, T, Circuit

Matrix = Dict[Tuple[str, ...], int]


class Translation:
    """Ground core of one problem at one scope; reused across queries."""

    def __init__(self, problem: RelProblem, scope: Scope):
        self.problem = problem
        self.scope = scope
        self.universe = Universe(problem, scope)
        self.c = Circuit()
        self.member: Dict[str, Dict[str, int]] = {}
        self.tuple_lit: Dict[str, Dict[Tuple[str, ...], int]] = {}
        self.arity: Dict[str, int] = {}
        self._selectors: Dict[Tuple[str, str], Tuple[Dict[str, int], int]] = {}
        self.structural: List[int] = []
        self._build_vocabulary()
        self.core_root = self.c.and_(
            [self.formula(con.formula, {}) for con in problem.core])
        self.core_visited: Set[int] = set()
        self.core_clauses = self.c.clauses_for(
            self.structural + [self.core_root], self.core_visited)

    # ----------------------------------------------------------- vocabulary

    def _build_vocabulary(self):
        p, u, c = self.problem, self.universe, self.c
        order = self._topo_domains()
        for name in order:
            d = p.domain(name)
            cands = u.candidates[name]
            if d.abstract:
                m = {}
                for kid in p.children_of(name):
                    m.update(self.member[kid.name])
                self.member[name] = {a: m[a] for a in cands}
            elif d.exact is not None:
                self.member[name] = {a: T for a in cands}
            else:
                self.member[name] = {a: c.var() for a in cands}
        for name in order:
            d = p.domain(name)
            if d.abstract:
                continue
            m = self.member[name]
            if d.parent is not None and not p.domain(d.parent).abstract:
                pm = self.member[d.parent]
                for a, lit in m.items():
                    self.structural.append(c.implies(lit, pm[a]))
                if u.bound(name) < len(m):
                    self.structural.append(c.at_most(list(m.values()), u.bound(name)))
            kids = [k for k in p.children_of(name)]
            if kids and not d.abstract:
                for a in u.candidates[name]:
                    lits = [self.member[k.name][a] for k in kids]
                    for x, y in itertools.combinations(lits, 2):
                        self.structural.append(c.or_((-x, -y)))
        for r in p.relations:
            for col in r.columns:
                if not p.has_domain(col):
                    raise InternalFault(f"relation {r.name}: unknown domain {col}")
            self.arity[r.name] = r.arity
            lits = {}
            for t in itertools.product(*(u.candidates[col] for col in r.columns)):
                v = c.var()
                lits[t] = v
                for col, a in zip(r.columns, t):
                    self.structural.append(c.implies(v, self.member[col][a]))
            self.tuple_lit[r.name] = lits
            for j, m in enumerate(r.mults):
                if m != LONE:
                    continue
                groups: Dict[tuple, List[int]] = {}
                for t, v in lits.items():
                    groups.setdefault(t[:j] + t[j + 1:], []).append(v)
                for vs in groups.values():
                    for x, y in itertools.combinations(vs, 2):
                        self.structural.append(c.or_((-x, -y)))

    def _topo_domains(self) -> List[str]:
        p = self.problem
        done: List[str] = []

        def visit(n):
            if n in done:
                return
            d = p.domain(n)
            if d.abstract:
                for k in p.children_of(n):
                    visit(k.name)
            elif d.parent is not None and not p.domain(d.parent).abstract:
                visit(d.parent)
            done.append(n)

        for d in p.domains:
            visit(d.name)
        return done

    def selector(self, var: str, domain: str) -> Tuple[Dict[str, int], int]:
        """One-hot selector inputs for a free variable and their constraint."""
        key = (var, domain)
        if key not in self._selectors:
            if not self.problem.has_domain(domain):
                raise InternalFault(f"unknown domain {domain} for {var}")
            c = self.c
            sel = {a: c.var() for a in self.universe.candidates[domain]}
            parts = [c.or_(sel.values())]
            for x, y in itertools.combinations(sel.values(), 2):
                parts.append(c.or_((-x, -y)))
            for a, s in sel.items():
                parts.append(c.implies(s, self.member[domain][a]))
            self._selectors[key] = (sel, c.and_(parts))
        return self._selectors[key]

    # ---------------------------------------------------------- expressions

    def expr(self, e: RelExpr, env: Mapping[str, object]) -> Tuple[Matrix, int]:
        c = self.c
        if isinstance(e, Var):
            if e.name not in env:
                raise InternalFault(f"unbound variable {e.name}")
            val = env[e.name]
            if isinstance(val, str):
                return {(val,): T}, 1
            return {(a,): s for a, s in val.items()}, 1
        if isinstance(e, Rel):
            if e.name in self.tuple_lit:
                return dict(self.tuple_lit[e.name]), self.arity[e.name]
            if e.name in self.member:
                return {(a,): l for a, l in self.member[e.name].items()}, 1
            raise InternalFault(f"unknown relation or domain {e.name}")
        if isinstance(e, Lit):
            return {t: T for t in e.tuples}, e.arity
        if isinstance(e, Join):
            left, la = self.expr(e.left, env)
            right, ra = self.expr(e.right, env)
            if la + ra - 2 < 1:
                raise InternalFault(f"join of arity {la} and {ra} has no columns")
            by_head: Dict[str, List[Tuple[Tuple[str, ...], int]]] = {}
            for t, l in right.items():
                if l != F:
                    by_head.setdefault(t[0], []).append((t, l))
            acc: Dict[Tuple[str, ...], List[int]] = {}
            for t, l in left.items():
                if l == F:
                    continue
                for u, r in by_head.get(t[-1], ()):
                    acc.setdefault(t[:-1] + u[1:], []).append(c.and_((l, r)))
            return {t: c.or_(ls) for t, ls in acc.items()}, la + ra - 2
        raise InternalFault(f"not an expression: {e!r}")

    # ------------------------------------------------------------- formulas

    def formula(self, f: RelFormula, env: Mapping[str, object]) -> int:
        c = self.c
        if isinstance(f, Named):
            return self.formula(f.body, env)
        if isinstance(f, And):
            out = []
            for a in f.args:
                l = self.formula(a, env)
                if l == F:
                    return F
                out.append(l)
            return c.and_(out)
        if isinstance(f, Or):
            out = []
            for a in f.args:
                l = self.formula(a, env)
                if l == T:
                    return T
                out.append(l)
            return c.or_(out)
        if isinstance(f, Implies):
            return c.implies(self.formula(f.left, env), self.formula(f.right, env))
        if isinstance(f, Not):
            return -self.formula(f.arg, env)
        if isinstance(f, (ForAll, Exists)):
            if f.domain not in self.member:
                raise InternalFault(f"unknown domain {f.domain}")
            parts = []
            for a, m in self.member[f.domain].items():
                sub = dict(env)
                sub[f.var] = a
                body = self.formula(f.body, sub)
                if isinstance(f, ForAll):
                    parts.append(c.implies(m, body))
                else:
                    parts.append(c.and_((m, body)))
            return c.and_(parts) if isinstance(f, ForAll) else c.or_(parts)
        if isinstance(f, Empty):
            m, _ = self.expr(f.expr, env)
            return c.and_(-l for l in m.values())
        if isinstance(f, NonEmpty):
            m, _ = self.expr(f.expr, env)
            return c.or_(m.values())
        if isinstance(f, CardEq):
            m, _ = self.expr(f.expr, env)
            return c.exactly([m[k] for k in sorted(m)], f.k)
        if isinstance(f, (SetEqual, Subset)):
            left, la = self.expr(f.left, env)
            right, ra = self.expr(f.right, env)
            if la != ra:
                raise InternalFault(f"arity mismatch {la} vs {ra} in {f!r}")
            keys = sorted(set(left) | set(right))
            if isinstance(f, SetEqual):
                return c.and_(c.iff(left.get(k, F), right.get(k, F)) for k in keys)
            return c.and_(c.implies(left.get(k, F), right.get(k, F)) for k in keys)
        raise InternalFault(f"not a formula: {f!r}")

    # --------------------------------------------------------------- models

    def query(self, extra: RelFormula, env: TypeEnv):
        """Root literal and selector map for SAT(core and extra) under env."""
        sels = {}
        constraints = []
        for v, d in env:
            sel, con = self.selector(v, d)
            sels[v] = sel
            constraints.append(con)
        root = self.formula(extra, sels)
        return self.c.and_([root] + constraints), sels

    def extract(self, value, sels) -> Binding:
        elements = {d: frozenset(a for a, l in m.items() if _holds(value, l))
                    for d, m in self.member.items()}
        tuples = {r: frozenset(t for t, l in m.items() if _holds(value, l))
                  for r, m in self.tuple_lit.items()}
        vars_ = {}
        for v, sel in sels.items():
            for a, l in sel.items():
                if _holds(value, l):
                    vars_[v] = a
                    break
        return Binding(elements, tuples, vars_, dict(self.arity))


def _holds(value, lit: int) -> bool:
    if lit == T:
        return True
    if lit == F:
        return False
    v = value(abs(lit))
    return v if lit > 0 else not v
