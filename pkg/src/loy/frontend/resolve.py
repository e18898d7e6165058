"""Inheritance resolution and name binding.

``resolve`` builds the class table: visible fields (declared first, then
inherited in the parent's order), inherited plus declared invariants, the
merged depends relation and the effective method table.  Bare identifiers
in formulas are classified as bound variables, parameters, receiver fields
or class names.  Identifiers that cannot be classified are left as
``Name`` nodes for the type checker to report.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

from loy.errors import ResolveError
from loy.frontend import ast as A


@dataclass(frozen=True)
class Owned:
    """An item together with the class that declared it."""

    owner: str
    item: object


@dataclass
class ResolvedClass:
    spec: A.ClassSpec
    fields: List[A.FieldDecl] = field(default_factory=list)
    field_owner: Dict[str, str] = field(default_factory=dict)
    invariants: List[Owned] = field(default_factory=list)
    depends: List[A.DependsClause] = field(default_factory=list)
    methods: Dict[str, Owned] = field(default_factory=dict)
    subclasses: List[str] = field(default_factory=list)

    @property
    def name(self) -> str:
        return self.spec.name

    @property
    def superclass(self) -> Optional[str]:
        return self.spec.superclass

    def field(self, name: str) -> Optional[A.FieldDecl]:
        for f in self.fields:
            if f.name == name:
                return f
        return None

    def index_of(self, name: str) -> int:
        for i, f in enumerate(self.fields):
            if f.name == name:
                return i
        raise KeyError(name)

    def declared_invariants(self) -> List[A.Clause]:
        return [o.item for o in self.invariants if o.owner == self.name]


@dataclass
class ResolvedSpec:
    spec: A.LoySpec
    classes: Dict[str, ResolvedClass]

    def __getitem__(self, name: str) -> ResolvedClass:
        return self.classes[name]

    def __contains__(self, name: str) -> bool:
        return name in self.classes

    def order(self) -> List[str]:
        return [c.name for c in self.spec.classes]

    def ancestors(self, name: str) -> List[str]:
        """``name`` and its superclasses, nearest first."""
        out = []
        cur: Optional[str] = name
        while cur is not None:
            out.append(cur)
            cur = self.classes[cur].superclass
        return out

    def is_subclass(self, sub: str, sup: str) -> bool:
        return sup in self.ancestors(sub)

    def descendants(self, name: str) -> List[str]:
        """``name`` and every transitive subclass, in declaration order."""
        return [c for c in self.order() if self.is_subclass(c, name)]

    def root(self, name: str) -> str:
        return self.ancestors(name)[-1]

    def is_leaf(self, name: str) -> bool:
        return not self.classes[name].subclasses


def _check_hierarchy(spec: A.LoySpec) -> Dict[str, A.ClassSpec]:
    by_name: Dict[str, A.ClassSpec] = {}
    for c in spec.classes:
        if c.name in by_name:
            raise ResolveError(f"{c.loc}: duplicate class {c.name}")
        by_name[c.name] = c
    for c in spec.classes:
        if c.superclass is not None and c.superclass not in by_name:
            raise ResolveError(f"{c.loc}: class {c.name} extends unknown class {c.superclass}")
    for c in spec.classes:
        seen = [c.name]
        cur = c.superclass
        while cur is not None:
            if cur in seen:
                raise ResolveError(f"{c.loc}: inheritance cycle {' -> '.join(seen + [cur])}")
            seen.append(cur)
            cur = by_name[cur].superclass
    return by_name


def resolve(spec: A.LoySpec) -> ResolvedSpec:
    """Build the class table; raises ResolveError on structural faults."""
    by_name = _check_hierarchy(spec)
    table: Dict[str, ResolvedClass] = {}

    def build(name: str) -> ResolvedClass:
        if name in table:
            return table[name]
        c = by_name[name]
        rc = ResolvedClass(c)
        parent = build(c.superclass) if c.superclass else None
        seen = set()
        for d in c.decls:
            if d.name in seen:
                raise ResolveError(f"{d.loc}: duplicate field {d.name} in {name}")
            if parent is not None and parent.field(d.name) is not None:
                raise ResolveError(f"{d.loc}: field {d.name} in {name} shadows an inherited field")
            if d.target not in by_name:
                raise ResolveError(f"{d.loc}: field {d.name} has unknown class {d.target}")
            seen.add(d.name)
            rc.fields.append(d)
            rc.field_owner[d.name] = name
        if parent is not None:
            rc.fields.extend(parent.fields)
            rc.field_owner.update(parent.field_owner)
            rc.invariants.extend(parent.invariants)
            rc.depends.extend(parent.depends)
            rc.methods.update(parent.methods)
        for m in c.methods:
            for p in m.params:
                if p.target not in by_name:
                    raise ResolveError(f"{p.loc}: parameter {p.name} has unknown class {p.target}")
            if m.name in rc.methods and rc.methods[m.name].owner == name:
                raise ResolveError(f"{m.loc}: duplicate method {m.name} in {name}")
            rc.methods[m.name] = Owned(name, _bind_method(m, rc, by_name))
        for inv in c.invariants:
            ctx = NameScope(set(by_name), {f.name for f in rc.fields}, set(), set())
            rc.invariants.append(Owned(name, A.Clause(bind(inv.formula, ctx), inv.loc)))
        rc.depends.extend(c.depends)
        rc.spec = A.ClassSpec(
            c.name, c.superclass, c.decls, c.depends,
            tuple(o.item for o in rc.invariants if o.owner == name),
            tuple(rc.methods[m.name].item for m in c.methods), c.loc)
        table[name] = rc
        return rc

    for c in spec.classes:
        build(c.name)
    for c in spec.classes:
        if c.superclass:
            table[c.superclass].subclasses.append(c.name)
    bound = A.LoySpec(tuple(table[c.name].spec for c in spec.classes))
    return ResolvedSpec(bound, {c.name: table[c.name] for c in spec.classes})


def _bind_method(m: A.MethodSpec, rc: ResolvedClass, classes) -> A.MethodSpec:
    ctx = NameScope(set(classes), {f.name for f in rc.fields}, {p.name for p in m.params}, set())
    pre = tuple(A.Clause(bind(c.formula, ctx), c.loc) for c in m.pre)
    post = tuple(A.Clause(bind(c.formula, ctx), c.loc) for c in m.post)
    return A.MethodSpec(m.name, m.params, pre, post, m.modifies, m.return_class, m.loc)


# ---------------------------------------------------------------- name binding


@dataclass(frozen=True)
class NameScope:
    classes: frozenset
    fields: frozenset
    params: frozenset
    vars: frozenset

    def __init__(self, classes, fields, params, vars):
        object.__setattr__(self, "classes", frozenset(classes))
        object.__setattr__(self, "fields", frozenset(fields))
        object.__setattr__(self, "params", frozenset(params))
        object.__setattr__(self, "vars", frozenset(vars))

    def with_var(self, v: str) -> "NameScope":
        return NameScope(self.classes, self.fields, self.params, self.vars | {v})


def formula_scope(classes, fields=(), params=()) -> NameScope:
    return NameScope(classes, fields, params, ())


def bind_expr(e: A.Expr, ctx: NameScope) -> A.Expr:
    if isinstance(e, A.Name):
        n = e.name
        if n in ctx.vars and not e.primed:
            return A.Var(n, e.loc)
        if n in ctx.params and not e.primed:
            return A.ParamRef(n, e.loc)
        if n in ctx.fields and n not in ctx.vars and n not in ctx.params:
            return A.FieldAccess(None, n, e.primed, e.loc)
        if n in ctx.classes and not e.primed and n not in ctx.vars:
            return A.ClassRef(n, e.loc)
        return e
    if isinstance(e, A.FieldAccess):
        base = None if e.base is None else bind_expr(e.base, ctx)
        return A.FieldAccess(base, e.field, e.primed, e.loc)
    return e


def bind(f: A.Formula, ctx: NameScope) -> A.Formula:
    if isinstance(f, (A.And, A.Or, A.Implies)):
        return type(f)(bind(f.left, ctx), bind(f.right, ctx))
    if isinstance(f, A.Not):
        return A.Not(bind(f.arg, ctx))
    if isinstance(f, (A.All, A.Exists)):
        return type(f)(f.var, f.cls, bind(f.body, ctx.with_var(f.var)), f.loc)
    if isinstance(f, A.NoExpr):
        return A.NoExpr(bind_expr(f.expr, ctx))
    if isinstance(f, A.SomeExpr):
        return A.SomeExpr(bind_expr(f.expr, ctx))
    if isinstance(f, A.Equal):
        return A.Equal(bind_expr(f.left, ctx), bind_expr(f.right, ctx), f.loc)
    return f


