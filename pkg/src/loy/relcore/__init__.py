"""Scope-bounded relational logic: formulas, bindings, solver and oracle."""

from loy.relcore.ast import (
    ANY, FALSE, LONE, TRUE, And, CardEq, Constraint, Domain, Empty, Exists,
    ForAll, Implies, Join, Lit, Named, NonEmpty, Not, Or, Predicate, Rel,
    RelExpr, RelFormula, Relation, RelProblem, Scope, SetEqual, Subset,
    TypeEnv, Var, conj, disj, free_vars, height, is_atomic, join, unwrap,
)
from loy.relcore.binding import Binding, Universe
from loy.relcore.evaluate import eval_expr, eval_formula
from loy.relcore.render import render, render_expr
from loy.relcore.solver import (
    SAT, UNKNOWN, UNSAT, SatResult, all_models, check_consistent, check_valid,
    solve,
)

__all__ = [
    "ANY", "FALSE", "LONE", "TRUE", "And", "Binding", "CardEq", "Constraint",
    "Domain", "Empty", "Exists", "ForAll", "Implies", "Join", "Lit", "Named",
    "NonEmpty", "Not", "Or", "Predicate", "Rel", "RelExpr", "RelFormula",
    "Relation", "RelProblem", "SAT", "SatResult", "Scope", "SetEqual",
    "Subset", "TypeEnv", "UNKNOWN", "UNSAT", "Universe", "Var", "all_models",
    "check_consistent", "check_valid", "conj", "disj", "eval_expr",
    "eval_formula", "free_vars", "height", "is_atomic", "join", "render", "render_expr",
    "solve",
    "unwrap",
]
