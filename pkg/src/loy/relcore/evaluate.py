"""Direct finite-model evaluation of relational formulas over a Binding."""

from __future__ import annotations

from typing import FrozenSet, Tuple

from loy.errors import InternalFault
from loy.relcore.ast import (
    And, CardEq, Empty, Exists, ForAll, Implies, Join, Lit, Named, NonEmpty,
    Not, Or, Rel, RelExpr, RelFormula, SetEqual, Subset, Var,
)
from loy.relcore.binding import Binding, sort_atoms

TupleSet = FrozenSet[Tuple[str, ...]]


def _arity(ts: TupleSet, hint: int) -> int:
    for t in ts:
        return len(t)
    return hint


def eval_expr(b: Binding, e: RelExpr) -> Tuple[TupleSet, int]:
    """Value of ``e`` with its arity (needed for empty sets)."""
    if isinstance(e, Var):
        if e.name not in b.vars:
            raise InternalFault(f"unbound variable {e.name}")
        return frozenset({(b.vars[e.name],)}), 1
    if isinstance(e, Rel):
        if e.name in b.tuples:
            ts = b.tuples[e.name]
            return ts, b.arities.get(e.name) or _arity(ts, 2)
        if e.name in b.elements:
            return frozenset((a,) for a in b.elements[e.name]), 1
        raise InternalFault(f"unknown relation or domain {e.name}")
    if isinstance(e, Lit):
        return e.tuples, e.arity
    if isinstance(e, Join):
        left, la = eval_expr(b, e.left)
        right, ra = eval_expr(b, e.right)
        if la + ra - 2 < 1:
            raise InternalFault(f"join of arity {la} and {ra} has no columns")
        out = set()
        by_head = {}
        for t in right:
            by_head.setdefault(t[0], []).append(t)
        for t in left:
            for u in by_head.get(t[-1], ()):
                out.add(t[:-1] + u[1:])
        return frozenset(out), la + ra - 2
    raise InternalFault(f"not an expression: {e!r}")


def _same_arity(la: int, ra: int, f: RelFormula):
    if la != ra:
        raise InternalFault(f"arity mismatch {la} vs {ra} in {f!r}")


def eval_formula(b: Binding, f: RelFormula) -> bool:
    if isinstance(f, Named):
        return eval_formula(b, f.body)
    if isinstance(f, And):
        return all(eval_formula(b, a) for a in f.args)
    if isinstance(f, Or):
        return any(eval_formula(b, a) for a in f.args)
    if isinstance(f, Implies):
        return (not eval_formula(b, f.left)) or eval_formula(b, f.right)
    if isinstance(f, Not):
        return not eval_formula(b, f.arg)
    if isinstance(f, ForAll):
        return all(eval_formula(b.bind(f.var, a), f.body)
                   for a in sort_atoms(_domain(b, f.domain)))
    if isinstance(f, Exists):
        return any(eval_formula(b.bind(f.var, a), f.body)
                   for a in sort_atoms(_domain(b, f.domain)))
    if isinstance(f, Empty):
        return not eval_expr(b, f.expr)[0]
    if isinstance(f, NonEmpty):
        return bool(eval_expr(b, f.expr)[0])
    if isinstance(f, CardEq):
        return len(eval_expr(b, f.expr)[0]) == f.k
    if isinstance(f, (SetEqual, Subset)):
        left, la = eval_expr(b, f.left)
        right, ra = eval_expr(b, f.right)
        if left or right:
            _same_arity(_arity(left, la), _arity(right, ra), f)
        else:
            _same_arity(la, ra, f)
        return left == right if isinstance(f, SetEqual) else left <= right
    raise InternalFault(f"not a formula: {f!r}")


def _domain(b: Binding, name: str):
    if name not in b.elements:
        raise InternalFault(f"unknown domain {name}")
    return b.elements[name]
