"""Translation of Loy formulas into relational formulas.

Receiver fields read through the receiver expression of the context:
``s0.c[i]`` for unprimed chains and ``s1.c[i]`` when any field of the chain
is primed.  Invariants use a plain bound variable as receiver and have no
after state.  Parameters and quantified variables read instances directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional

from loy.errors import InternalFault
from loy.frontend import ast as A
from loy.frontend.resolve import ResolvedSpec
from loy.frontend.typecheck import TypeCtx, is_receiver_chain, primes
from loy.encoder.model import field_rel
from loy.relcore import ast as R


@dataclass(frozen=True)
class StateContext:
    rs: ResolvedSpec
    cls: Optional[str] = None
    params: Dict[str, str] = field(default_factory=dict)
    before: Optional[R.RelExpr] = None    # receiver in the before state
    after: Optional[R.RelExpr] = None     # receiver in the after state, None when stateless
    vars: Dict[str, str] = field(default_factory=dict)

    @staticmethod
    def stateless(rs: ResolvedSpec, cls: Optional[str] = None, receiver: str = "x") -> "StateContext":
        before = R.Var(receiver) if cls else None
        return StateContext(rs, cls, {}, before, None)

    def types(self) -> TypeCtx:
        return TypeCtx(self.rs, self.cls, self.params, self.vars)

    def with_var(self, v: str, c: str) -> "StateContext":
        vs = dict(self.vars)
        vs[v] = c
        return replace(self, vars=vs)


def encode_expr(e: A.Expr, ctx: StateContext) -> R.RelExpr:
    if isinstance(e, (A.Var, A.ParamRef)):
        return R.Var(e.name)
    if isinstance(e, A.ClassRef):
        return R.Rel(e.name)
    if isinstance(e, A.FieldAccess):
        after = primes(e) > 0
        if after and not is_receiver_chain(e):
            raise InternalFault(f"primed field {e.field} not reached from the receiver")
        return _chain(e, ctx, after)
    raise InternalFault(f"unresolved name in formula: {e!r}")


def _chain(e: A.FieldAccess, ctx: StateContext, after: bool) -> R.RelExpr:
    tc = ctx.types()
    if e.base is None:
        if ctx.cls is None:
            raise InternalFault(f"field {e.field} used without a receiver")
        if after and ctx.after is None:
            raise InternalFault("prime in a stateless context")
        base_expr = ctx.after if after else ctx.before
        base_cls = ctx.cls
    else:
        base_cls = tc.type_of(e.base)
        if isinstance(e.base, A.FieldAccess):
            base_expr = _chain(e.base, ctx, after)
        else:
            base_expr = encode_expr(e.base, ctx)
    if base_cls is None:
        raise InternalFault(f"ill-typed field access {e!r}")
    owner = ctx.rs[base_cls].field_owner[e.field]
    return R.Join(base_expr, R.Rel(field_rel(owner, e.field)))


def _flatten(f: A.Formula, kind) -> List[A.Formula]:
    if isinstance(f, kind):
        return _flatten(f.left, kind) + _flatten(f.right, kind)
    return [f]


def encode_formula(f: A.Formula, ctx: StateContext) -> R.RelFormula:
    """Relational counterpart of a type-correct Loy formula.

    Chains of ``and``/``or`` become single n-ary nodes so the conjunction and
    disjunction patterns see every operand at once.
    """
    if isinstance(f, A.And):
        return R.And(tuple(encode_formula(g, ctx) for g in _flatten(f, A.And)))
    if isinstance(f, A.Or):
        return R.Or(tuple(encode_formula(g, ctx) for g in _flatten(f, A.Or)))
    if isinstance(f, A.Implies):
        return R.Implies(encode_formula(f.left, ctx), encode_formula(f.right, ctx))
    if isinstance(f, A.Not):
        return R.Not(encode_formula(f.arg, ctx))
    if isinstance(f, (A.All, A.Exists)):
        body = encode_formula(f.body, ctx.with_var(f.var, f.cls))
        node = R.ForAll if isinstance(f, A.All) else R.Exists
        return node(f.var, f.cls, body)
    if isinstance(f, A.NoExpr):
        return R.Empty(encode_expr(f.expr, ctx))
    if isinstance(f, A.SomeExpr):
        return R.NonEmpty(encode_expr(f.expr, ctx))
    if isinstance(f, A.Equal):
        return R.SetEqual(encode_expr(f.left, ctx), encode_expr(f.right, ctx))
    raise InternalFault(f"cannot encode formula {f!r}")


def encode_clauses(clauses, ctx: StateContext) -> R.RelFormula:
    """Conjunction of clause formulas; a single clause stays unwrapped."""
    fs = [encode_formula(c.formula, ctx) for c in clauses]
    if not fs:
        return R.TRUE
    return fs[0] if len(fs) == 1 else R.And(tuple(fs))


def mentions_receiver(f: A.Formula) -> bool:
    if isinstance(f, (A.And, A.Or, A.Implies)):
        return mentions_receiver(f.left) or mentions_receiver(f.right)
    if isinstance(f, A.Not):
        return mentions_receiver(f.arg)
    if isinstance(f, (A.All, A.Exists)):
        return mentions_receiver(f.body)
    exprs = (f.expr,) if isinstance(f, (A.NoExpr, A.SomeExpr)) else (f.left, f.right)
    return any(is_receiver_chain(e) for e in exprs)


def bound_names(f: A.Formula) -> set:
    if isinstance(f, (A.And, A.Or, A.Implies)):
        return bound_names(f.left) | bound_names(f.right)
    if isinstance(f, A.Not):
        return bound_names(f.arg)
    if isinstance(f, (A.All, A.Exists)):
        return {f.var} | bound_names(f.body)
    return set()
