"""Abstract syntax of Loy specifications."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

SCALAR = "scalar"
SET = "set"


@dataclass(frozen=True)
class Loc:
    line: int = 0
    col: int = 0

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


NOLOC = Loc()


# ---------------------------------------------------------------- expressions


class Expr:
    pass


@dataclass(frozen=True)
class Name(Expr):
    """An identifier not yet classified by name resolution."""

    name: str
    primed: bool = False
    loc: Loc = field(default=NOLOC, compare=False)


@dataclass(frozen=True)
class Var(Expr):
    """A quantifier-bound variable."""

    name: str
    loc: Loc = field(default=NOLOC, compare=False)


@dataclass(frozen=True)
class ParamRef(Expr):
    name: str
    loc: Loc = field(default=NOLOC, compare=False)


@dataclass(frozen=True)
class ClassRef(Expr):
    """A class name used as the set of all its instances."""

    name: str
    loc: Loc = field(default=NOLOC, compare=False)


@dataclass(frozen=True)
class FieldAccess(Expr):
    """``base.field``; a ``None`` base is the implicit receiver."""

    base: Optional[Expr]
    field: str
    primed: bool = False
    loc: Loc = field(default=NOLOC, compare=False)


# ------------------------------------------------------------------- formulas


class Formula:
    pass


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class All(Formula):
    var: str
    cls: str
    body: Formula
    loc: Loc = field(default=NOLOC, compare=False)


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    cls: str
    body: Formula
    loc: Loc = field(default=NOLOC, compare=False)


@dataclass(frozen=True)
class NoExpr(Formula):
    expr: Expr


@dataclass(frozen=True)
class SomeExpr(Formula):
    expr: Expr


@dataclass(frozen=True)
class Equal(Formula):
    left: Expr
    right: Expr
    loc: Loc = field(default=NOLOC, compare=False)


# ------------------------------------------------------------------ structure


@dataclass(frozen=True)
class FieldDecl:
    name: str
    target: str
    multiplicity: str = SCALAR
    loc: Loc = field(default=NOLOC, compare=False)


@dataclass(frozen=True)
class DependsClause:
    dependent: str
    sources: Tuple[str, ...]
    loc: Loc = field(default=NOLOC, compare=False)


@dataclass(frozen=True)
class Clause:
    """A formula with the location of the keyword that introduced it."""

    formula: Formula
    loc: Loc = field(default=NOLOC, compare=False)


@dataclass(frozen=True)
class Path:
    fields: Tuple[str, ...]
    loc: Loc = field(default=NOLOC, compare=False)

    def __str__(self) -> str:
        return ".".join(self.fields)


@dataclass(frozen=True)
class MethodSpec:
    name: str
    params: Tuple[FieldDecl, ...] = ()
    pre: Tuple[Clause, ...] = ()
    post: Tuple[Clause, ...] = ()
    modifies: Tuple[Path, ...] = ()
    return_class: Optional[str] = None
    loc: Loc = field(default=NOLOC, compare=False)


@dataclass(frozen=True)
class ClassSpec:
    name: str
    superclass: Optional[str] = None
    decls: Tuple[FieldDecl, ...] = ()
    depends: Tuple[DependsClause, ...] = ()
    invariants: Tuple[Clause, ...] = ()
    methods: Tuple[MethodSpec, ...] = ()
    loc: Loc = field(default=NOLOC, compare=False)

    def method(self, name: str) -> Optional[MethodSpec]:
        for m in self.methods:
            if m.name == name:
                return m
        return None


@dataclass(frozen=True)
class LoySpec:
    classes: Tuple[ClassSpec, ...] = ()

    def cls(self, name: str) -> Optional[ClassSpec]:
        for c in self.classes:
            if c.name == name:
                return c
        return None

    def __add__(self, other: "LoySpec") -> "LoySpec":
        return LoySpec(self.classes + other.classes)
