"""Relational formulas, expressions and problem descriptions.

Every node is a frozen dataclass so formulas can be hashed, compared and
used as memoization keys.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence, Tuple

Atom = str
Tuple_ = Tuple[Atom, ...]

ANY = "any"
LONE = "lone"


# ---------------------------------------------------------------- expressions


class RelExpr:
    """Base class of relational expressions."""


@dataclass(frozen=True)
class Var(RelExpr):
    name: str


@dataclass(frozen=True)
class Rel(RelExpr):
    """A relation or domain name; domains behave as unary relations."""

    name: str


@dataclass(frozen=True)
class Join(RelExpr):
    left: RelExpr
    right: RelExpr


@dataclass(frozen=True)
class Lit(RelExpr):
    tuples: frozenset
    arity: int

    @staticmethod
    def of(*tuples: Sequence[Atom], arity: Optional[int] = None) -> "Lit":
        ts = frozenset(tuple(t) for t in tuples)
        if arity is None:
            if not ts:
                raise ValueError("arity required for an empty literal")
            arity = len(next(iter(ts)))
        if any(len(t) != arity for t in ts):
            raise ValueError("literal tuples of mixed arity")
        return Lit(ts, arity)

    @staticmethod
    def empty(arity: int = 1) -> "Lit":
        return Lit(frozenset(), arity)


def join(*parts: RelExpr) -> RelExpr:
    """Left-associated join chain ``a.b.c``."""
    out = parts[0]
    for p in parts[1:]:
        out = Join(out, p)
    return out


# ------------------------------------------------------------------- formulas


class RelFormula:
    """Base class of relational formulas."""


@dataclass(frozen=True)
class And(RelFormula):
    args: Tuple[RelFormula, ...]


@dataclass(frozen=True)
class Or(RelFormula):
    args: Tuple[RelFormula, ...]


@dataclass(frozen=True)
class Implies(RelFormula):
    left: RelFormula
    right: RelFormula


@dataclass(frozen=True)
class Not(RelFormula):
    arg: RelFormula


@dataclass(frozen=True)
class ForAll(RelFormula):
    var: str
    domain: str
    body: RelFormula


@dataclass(frozen=True)
class Exists(RelFormula):
    var: str
    domain: str
    body: RelFormula


@dataclass(frozen=True)
class Empty(RelFormula):
    expr: RelExpr


@dataclass(frozen=True)
class NonEmpty(RelFormula):
    expr: RelExpr


@dataclass(frozen=True)
class SetEqual(RelFormula):
    left: RelExpr
    right: RelExpr


@dataclass(frozen=True)
class Subset(RelFormula):
    left: RelExpr
    right: RelExpr


@dataclass(frozen=True)
class CardEq(RelFormula):
    expr: RelExpr
    k: int


@dataclass(frozen=True)
class Named(RelFormula):
    """A labelled subformula (a predicate call); semantics are those of body."""

    label: str
    body: RelFormula = field(compare=True)


TRUE = Empty(Lit.empty(1))
FALSE = NonEmpty(Lit.empty(1))


def conj(*fs: RelFormula) -> RelFormula:
    parts = tuple(f for f in fs if f != TRUE)
    if not parts:
        return TRUE
    if len(parts) == 1:
        return parts[0]
    return And(parts)


def disj(*fs: RelFormula) -> RelFormula:
    parts = tuple(f for f in fs if f != FALSE)
    if not parts:
        return FALSE
    if len(parts) == 1:
        return parts[0]
    return Or(parts)


def unwrap(f: RelFormula) -> RelFormula:
    while isinstance(f, Named):
        f = f.body
    return f


def is_atomic(f: RelFormula) -> bool:
    return isinstance(unwrap(f), (Empty, NonEmpty, SetEqual, Subset, CardEq))


def children(f: RelFormula) -> Tuple[RelFormula, ...]:
    if isinstance(f, (And, Or)):
        return f.args
    if isinstance(f, Implies):
        return (f.left, f.right)
    if isinstance(f, Not):
        return (f.arg,)
    if isinstance(f, (ForAll, Exists)):
        return (f.body,)
    if isinstance(f, Named):
        return (f.body,)
    return ()


def height(f: RelFormula) -> int:
    """Connective/quantifier nesting depth; atoms have height 0."""
    f = unwrap(f)
    subs = children(f)
    if not subs:
        return 0
    return 1 + max(height(s) for s in subs)


def expr_vars(e: RelExpr) -> Iterator[str]:
    if isinstance(e, Var):
        yield e.name
    elif isinstance(e, Join):
        yield from expr_vars(e.left)
        yield from expr_vars(e.right)


def free_vars(f: RelFormula) -> frozenset:
    if isinstance(f, (Empty, NonEmpty, CardEq)):
        return frozenset(expr_vars(f.expr))
    if isinstance(f, (SetEqual, Subset)):
        return frozenset(expr_vars(f.left)) | frozenset(expr_vars(f.right))
    if isinstance(f, (ForAll, Exists)):
        return free_vars(f.body) - {f.var}
    out: frozenset = frozenset()
    for c in children(f):
        out |= free_vars(c)
    return out


# ------------------------------------------------------------------- problems


@dataclass(frozen=True)
class Domain:
    """A named domain.

    ``parent`` makes this a subdomain.  Children of an ``abstract`` domain
    draw atoms from their own pools and the abstract domain is exactly
    their union; children of a concrete domain share its pool and are
    pairwise disjoint.  ``exact`` fixes the element count regardless of
    scope.
    """

    name: str
    parent: Optional[str] = None
    abstract: bool = False
    exact: Optional[int] = None


@dataclass(frozen=True)
class Relation:
    name: str
    columns: Tuple[str, ...]
    mults: Tuple[str, ...]
    label: Optional[str] = None

    def __post_init__(self):
        if len(self.columns) != len(self.mults):
            raise ValueError(f"relation {self.name}: one multiplicity per column")
        for m in self.mults:
            if m not in (ANY, LONE):
                raise ValueError(f"relation {self.name}: bad multiplicity {m!r}")

    @property
    def arity(self) -> int:
        return len(self.columns)

    @property
    def display(self) -> str:
        return self.label or self.name


@dataclass(frozen=True)
class Constraint:
    label: str
    formula: RelFormula
    kind: str = "fact"  # "fact" | "invariant"


@dataclass(frozen=True)
class Predicate:
    params: Tuple[Tuple[str, str], ...]
    formula: RelFormula


@dataclass(frozen=True)
class RelProblem:
    domains: Tuple[Domain, ...] = ()
    relations: Tuple[Relation, ...] = ()
    core: Tuple[Constraint, ...] = ()
    predicates: Tuple[Tuple[str, Predicate], ...] = ()
    asserts: Tuple[Tuple[str, Predicate], ...] = ()

    def domain(self, name: str) -> Domain:
        for d in self.domains:
            if d.name == name:
                return d
        raise KeyError(name)

    def relation(self, name: str) -> Relation:
        for r in self.relations:
            if r.name == name:
                return r
        raise KeyError(name)

    def has_domain(self, name: str) -> bool:
        return any(d.name == name for d in self.domains)

    def has_relation(self, name: str) -> bool:
        return any(r.name == name for r in self.relations)

    def children_of(self, name: str) -> Tuple[Domain, ...]:
        return tuple(d for d in self.domains if d.parent == name)

    def predicate(self, name: str) -> Predicate:
        for n, p in self.predicates:
            if n == name:
                return p
        raise KeyError(f"unknown predicate {name!r}")

    def assertion(self, name: str) -> Predicate:
        for n, p in self.asserts:
            if n == name:
                return p
        raise KeyError(f"unknown assert {name!r}")

    @property
    def core_formula(self) -> RelFormula:
        return conj(*(c.formula for c in self.core))

    def with_core(self, core: Sequence[Constraint]) -> "RelProblem":
        return RelProblem(self.domains, self.relations, tuple(core),
                          self.predicates, self.asserts)

    def label_of(self, rel_name: str) -> str:
        for r in self.relations:
            if r.name == rel_name:
                return r.display
        return rel_name


@dataclass(frozen=True)
class Scope:
    default: int = 3
    per_domain: Tuple[Tuple[str, int], ...] = ()

    def __post_init__(self):
        if self.default < 1 or any(b < 1 for _, b in self.per_domain):
            raise ValueError("scope bounds must be >= 1")

    @staticmethod
    def of(default: int = 3, **bounds: int) -> "Scope":
        return Scope(default, tuple(sorted(bounds.items())))

    def bound(self, domain: str) -> int:
        for n, b in self.per_domain:
            if n == domain:
                return b
        return self.default

    def explicit(self, domain: str) -> bool:
        return any(n == domain for n, _ in self.per_domain)

    def __str__(self) -> str:
        extra = "".join(f", {n}={b}" for n, b in self.per_domain)
        return f"scope {self.default}{extra}"


@dataclass(frozen=True)
class TypeEnv:
    """Ordered (variable, domain) pairs."""

    pairs: Tuple[Tuple[str, str], ...] = ()

    def __post_init__(self):
        names = [v for v, _ in self.pairs]
        if len(names) != len(set(names)):
            raise ValueError(f"duplicate variable in type environment: {names}")

    def extend(self, var: str, domain: str) -> "TypeEnv":
        return TypeEnv(self.pairs + ((var, domain),))

    def names(self) -> Tuple[str, ...]:
        return tuple(v for v, _ in self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)

    def __str__(self) -> str:
        return ", ".join(f"<{v}, {d}>" for v, d in self.pairs)
