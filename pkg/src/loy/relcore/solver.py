"""Scope-bounded satisfiability, consistency and validity queries."""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence, Union

from loy.errors import BudgetExceeded, InternalFault
from loy.relcore.ast import (
    TRUE, Not, RelFormula, RelProblem, Scope, TypeEnv, conj, free_vars,
)
from loy.relcore.binding import Binding
from loy.relcore.circuit import T
from loy.relcore.evaluate import eval_formula
from loy.relcore.sat import SatSolver
from loy.relcore.translate import Translation

DEFAULT_BUDGET = 10 ** 7

SAT = "sat"
UNSAT = "unsat"
UNKNOWN = "unknown"


@dataclass
class SatResult:
    status: str
    model: Optional[Binding] = None
    scope: Optional[Scope] = None
    notes: List[str] = field(default_factory=list)

    @property
    def sat(self) -> bool:
        return self.status == SAT

    @property
    def unsat(self) -> bool:
        return self.status == UNSAT

    def __str__(self) -> str:
        word = {SAT: "satisfiable", UNSAT: "unsatisfiable", UNKNOWN: "unknown"}[self.status]
        if self.status == UNSAT and self.scope is not None:
            return f"{word} ({self.scope})"
        return word


@functools.lru_cache(maxsize=32)
def translation(problem: RelProblem, scope: Scope) -> Translation:
    return Translation(problem, scope)


def _check_env(extra: RelFormula, env: TypeEnv):
    missing = free_vars(extra) - set(env.names())
    if missing:
        raise InternalFault(f"free variables without type: {sorted(missing)}")


def _notes(tr: Translation) -> List[str]:
    return [f"scope for {d} defaulted to {tr.scope.default}" for d in tr.universe.defaulted]


def _new_solver(tr: Translation, root: int) -> SatSolver:
    s = SatSolver(tr.c.n)
    s.add_clause([T])
    for cl in tr.core_clauses:
        s.add_clause(cl)
    s.add_clause([tr.core_root])
    for lit in tr.structural:
        s.add_clause([lit])
    for cl in tr.c.clauses_for([root], set(tr.core_visited)):
        s.add_clause(cl)
    s.add_clause([root])
    s.ensure_vars(tr.c.n)
    return s


def solve(problem: RelProblem, extra: RelFormula = TRUE, env: TypeEnv = TypeEnv(),
          scope: Scope = Scope(), budget: int = DEFAULT_BUDGET) -> SatResult:
    """Find a binding of core constraints and ``extra`` with env existential."""
    _check_env(extra, env)
    tr = translation(problem, scope)
    root, sels = tr.query(extra, env)
    s = _new_solver(tr, root)
    try:
        ok = s.solve(budget)
    except BudgetExceeded:
        return SatResult(UNKNOWN, scope=scope, notes=_notes(tr))
    if not ok:
        return SatResult(UNSAT, scope=scope, notes=_notes(tr))
    model = tr.extract(s.model_value, sels)
    if not eval_formula(model, conj(problem.core_formula, extra)):
        raise InternalFault("solver produced a binding that fails evaluation")
    return SatResult(SAT, model, scope, _notes(tr))


def _lookup(problem: RelProblem, pred, env: Optional[TypeEnv], getter):
    if isinstance(pred, str):
        p = getter(pred)
        return p.formula, TypeEnv(p.params) if env is None else env
    return pred, env if env is not None else TypeEnv()


def check_consistent(problem: RelProblem, pred: Union[str, RelFormula],
                     env: Optional[TypeEnv] = None, scope: Scope = Scope(),
                     budget: int = DEFAULT_BUDGET) -> SatResult:
    f, env = _lookup(problem, pred, env, problem.predicate)
    return solve(problem, f, env, scope, budget)


def check_valid(problem: RelProblem, assertion: Union[str, RelFormula],
                env: Optional[TypeEnv] = None, scope: Scope = Scope(),
                budget: int = DEFAULT_BUDGET) -> SatResult:
    """Unsat means valid within scope; Sat carries a counterexample."""
    f, env = _lookup(problem, assertion, env, problem.assertion)
    return solve(problem, Not(f), env, scope, budget)


def all_models(problem: RelProblem, scope: Scope, project_domains: Sequence[str],
               project_relations: Sequence[str], extra: RelFormula = TRUE,
               budget: int = DEFAULT_BUDGET) -> Iterator[Binding]:
    """Every distinct projection of a model onto the given vocabulary."""
    tr = translation(problem, scope)
    root, _ = tr.query(extra, TypeEnv())
    s = _new_solver(tr, root)
    lits = []
    for d in project_domains:
        lits.extend(l for l in tr.member[d].values() if abs(l) != T)
    for r in project_relations:
        lits.extend(tr.tuple_lit[r].values())
    while s.solve(budget):
        model = tr.extract(s.model_value, {})
        yield Binding({d: model.elements[d] for d in project_domains},
                      {r: model.tuples[r] for r in project_relations},
                      {}, {r: tr.arity[r] for r in project_relations})
        block = [(-l if s.model_value(abs(l)) == (l > 0) else l) for l in lits]
        if not block:
            return
        s.add_clause(block)
