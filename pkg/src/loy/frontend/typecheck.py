"""Static checks over a resolved specification.

Diagnostics are returned, never raised.  ``TypeCtx.type_of`` is shared with
the encoder, which needs the static class of every field-access base.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from loy.frontend import ast as A
from loy.frontend.resolve import ResolvedSpec


@dataclass(frozen=True)
class Diagnostic:
    message: str
    loc: A.Loc = A.NOLOC
    where: str = ""

    def __str__(self) -> str:
        prefix = f"{self.loc}: " if self.loc != A.NOLOC else ""
        ctx = f" [{self.where}]" if self.where else ""
        return f"{prefix}{self.message}{ctx}"


@dataclass
class TypeCtx:
    rs: ResolvedSpec
    cls: Optional[str] = None
    params: Dict[str, str] = field(default_factory=dict)
    vars: Dict[str, str] = field(default_factory=dict)
    allow_prime: bool = False
    where: str = ""

    def with_var(self, v: str, c: str) -> "TypeCtx":
        vs = dict(self.vars)
        vs[v] = c
        return TypeCtx(self.rs, self.cls, self.params, vs, self.allow_prime, self.where)

    def field_decl(self, cls: str, name: str) -> Optional[A.FieldDecl]:
        if cls not in self.rs:
            return None
        return self.rs[cls].field(name)

    def type_of(self, e: A.Expr) -> Optional[str]:
        """Static class of ``e``, or None when ill-typed."""
        if isinstance(e, A.Var):
            return self.vars.get(e.name)
        if isinstance(e, A.ParamRef):
            return self.params.get(e.name)
        if isinstance(e, A.ClassRef):
            return e.name if e.name in self.rs else None
        if isinstance(e, A.FieldAccess):
            base = self.cls if e.base is None else self.type_of(e.base)
            if base is None:
                return None
            d = self.field_decl(base, e.field)
            return d.target if d else None
        return None


def chain_root(e: A.Expr) -> A.Expr:
    while isinstance(e, A.FieldAccess) and e.base is not None:
        e = e.base
    return e


def is_receiver_chain(e: A.Expr) -> bool:
    r = chain_root(e)
    return isinstance(r, A.FieldAccess) and r.base is None


def primes(e: A.Expr) -> int:
    n = 0
    while isinstance(e, (A.FieldAccess, A.Name)):
        n += 1 if e.primed else 0
        if isinstance(e, A.Name) or e.base is None:
            break
        e = e.base
    return n


class Checker:
    def __init__(self):
        self.diags: List[Diagnostic] = []

    def report(self, msg: str, loc: A.Loc, ctx: TypeCtx):
        self.diags.append(Diagnostic(msg, loc, ctx.where))

    def expr(self, e: A.Expr, ctx: TypeCtx) -> Optional[str]:
        if isinstance(e, A.Name):
            if e.primed:
                self.report("prime on a non-field reference", e.loc, ctx)
            self.report(f"unknown name '{e.name}'", e.loc, ctx)
            return None
        if isinstance(e, A.FieldAccess):
            if e.base is None:
                if ctx.cls is None:
                    self.report(f"field '{e.field}' used without a receiver", e.loc, ctx)
                    return None
                base = ctx.cls
            else:
                base = self.expr(e.base, ctx)
                if base is None:
                    return None
            if e.primed:
                if not ctx.allow_prime:
                    self.report("prime outside postcondition", e.loc, ctx)
                elif not is_receiver_chain(e):
                    self.report("prime on a field not reached from the receiver", e.loc, ctx)
            d = ctx.field_decl(base, e.field)
            if d is None:
                self.report(f"unknown field '{e.field}' on {base}", e.loc, ctx)
                return None
            return d.target
        t = ctx.type_of(e)
        if t is None:
            self.report(f"ill-typed expression {e!r}", getattr(e, "loc", A.NOLOC), ctx)
        return t

    def chain(self, e: A.Expr, ctx: TypeCtx):
        if primes(e) > 1:
            self.report("more than one prime in a field chain", getattr(e, "loc", A.NOLOC), ctx)

    def formula(self, f: A.Formula, ctx: TypeCtx) -> None:
        if isinstance(f, (A.And, A.Or, A.Implies)):
            self.formula(f.left, ctx)
            self.formula(f.right, ctx)
        elif isinstance(f, A.Not):
            self.formula(f.arg, ctx)
        elif isinstance(f, (A.All, A.Exists)):
            if f.cls not in ctx.rs:
                self.report(f"quantifier over unknown class {f.cls}", f.loc, ctx)
            if f.var in ctx.vars or f.var in ctx.params:
                self.report(f"variable '{f.var}' shadows an enclosing name", f.loc, ctx)
            elif ctx.cls is not None and ctx.field_decl(ctx.cls, f.var) is not None:
                self.report(f"variable '{f.var}' shadows field '{f.var}'", f.loc, ctx)
            elif f.var in ctx.rs:
                self.report(f"variable '{f.var}' shadows class '{f.var}'", f.loc, ctx)
            self.formula(f.body, ctx.with_var(f.var, f.cls))
        elif isinstance(f, (A.NoExpr, A.SomeExpr)):
            self.chain(f.expr, ctx)
            self.expr(f.expr, ctx)
        elif isinstance(f, A.Equal):
            self.chain(f.left, ctx)
            self.chain(f.right, ctx)
            lt = self.expr(f.left, ctx)
            rt = self.expr(f.right, ctx)
            if lt and rt and ctx.rs.root(lt) != ctx.rs.root(rt):
                self.report(f"incompatible types {lt} and {rt} in equality", f.loc, ctx)


def check_formula(rs: ResolvedSpec, f: A.Formula, cls: Optional[str] = None,
                  params: Sequence[A.FieldDecl] = (), allow_prime: bool = False,
                  where: str = "") -> List[Diagnostic]:
    ch = Checker()
    ch.formula(f, TypeCtx(rs, cls, {p.name: p.target for p in params}, {}, allow_prime, where))
    return ch.diags


def check_path(rs: ResolvedSpec, cls: str, path: A.Path) -> Optional[str]:
    """Error message for an ill-typed modifies path, else None."""
    cur = cls
    for name in path.fields:
        d = rs[cur].field(name)
        if d is None:
            return f"unknown field in modifies: '{path}'"
        cur = d.target
    return None


def typecheck(rs: ResolvedSpec) -> List[Diagnostic]:
    ch = Checker()
    for name in rs.order():
        rc = rs[name]
        for inv in rc.declared_invariants():
            ctx = TypeCtx(rs, name, where=f"{name} invariant")
            ch.formula(inv.formula, ctx)
        for dep in rc.spec.depends:
            where = f"{name} depends"
            for fname in (dep.dependent,) + dep.sources:
                if rc.field(fname) is None:
                    ch.diags.append(Diagnostic(f"unknown field in depends: '{fname}'", dep.loc, where))
            if dep.dependent in dep.sources:
                ch.diags.append(Diagnostic(f"field '{dep.dependent}' depends on itself", dep.loc, where))
        for m in rc.spec.methods:
            where = f"{name}.{m.name}"
            params = {}
            for p in m.params:
                if p.name in params:
                    ch.diags.append(Diagnostic(f"duplicate parameter '{p.name}'", p.loc, where))
                if rc.field(p.name) is not None:
                    ch.diags.append(Diagnostic(f"parameter '{p.name}' collides with a field", p.loc, where))
                params[p.name] = p.target
            for c in m.pre:
                ch.formula(c.formula, TypeCtx(rs, name, params, {}, False, where))
            for c in m.post:
                ch.formula(c.formula, TypeCtx(rs, name, params, {}, True, where))
            for path in m.modifies:
                msg = check_path(rs, name, path)
                if msg:
                    ch.diags.append(Diagnostic(msg, path.loc, where))
    return ch.diags
