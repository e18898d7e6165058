"""Names and result containers shared by the encoder modules."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from loy.frontend.resolve import ResolvedSpec
from loy.relcore import ast as R

OBJ = "Obj"
IDX = "Idx"
ID = "Id"
STATE = "State"
RESERVED = (OBJ, IDX, ID, STATE)

FIELDS = "Obj.fields"
DEPENDS = "Obj.depends"


def lower_first(name: str) -> str:
    return name[:1].lower() + name[1:]


def field_rel(owner: str, fname: str) -> str:
    return f"{owner}.{fname}"


def map_rel(cls: str) -> str:
    return f"{STATE}.{lower_first(cls)}"


def idx_atom(k: int) -> R.Lit:
    from loy.relcore.binding import atom_name
    return R.Lit.of((atom_name(IDX, k),))


def state_read(state: str, cls: str, ident: str) -> R.RelExpr:
    """``state.map[ident]``: the snapshot referenced by ``ident``."""
    return R.Join(R.Var(ident), R.Join(R.Var(state), R.Rel(map_rel(cls))))


def fresh(base: str, taken) -> str:
    name, n = base, 0
    while name in taken:
        n += 1
        name = f"{base}{n}"
    return name


@dataclass
class EncodedInvariant:
    label: str
    owner: str
    ordinal: int            # 1-based within the owner's declared invariants
    formula: R.RelFormula


@dataclass
class EncodedMethod:
    cls: str
    name: str
    params: Tuple[Tuple[str, str], ...]    # declared parameters, in order
    receiver: str                          # variable linked to s0.c[i]
    ident: str
    s0: str
    s1: str
    link: R.RelFormula
    pre: R.RelFormula
    post: R.RelFormula
    frame: R.RelFormula

    @property
    def label(self) -> str:
        return f"{self.cls}_{self.name}"

    def env(self) -> R.TypeEnv:
        return R.TypeEnv(((self.receiver, self.cls),) + self.params +
                         ((self.ident, ID), (self.s0, STATE), (self.s1, STATE)))

    def body(self) -> R.RelFormula:
        return R.And((R.Named(f"{self.label}_this", self.link),
                      R.Named(f"{self.label}_P", self.pre),
                      R.Named(f"{self.label}_Q", self.post),
                      R.Named(f"{self.label}_F", self.frame)))

    def query(self) -> Tuple[R.RelFormula, R.TypeEnv]:
        return self.body(), self.env()

    def closure(self) -> R.RelFormula:
        """The query with every parameter existentially bound, receiver first."""
        f = self.body()
        for v, d in reversed(self.env().pairs):
            f = R.Exists(v, d, f)
        return f


@dataclass
class EncodedSpec:
    resolved: ResolvedSpec
    problem: R.RelProblem
    field_tables: Dict[str, List[str]]
    invariants: List[EncodedInvariant] = field(default_factory=list)
    methods: Dict[Tuple[str, str], EncodedMethod] = field(default_factory=dict)

    def method(self, cls: str, name: str) -> EncodedMethod:
        try:
            return self.methods[(cls, name)]
        except KeyError:
            raise KeyError(f"unknown method {cls}.{name}") from None

    def invariant(self, cls: str, k: int) -> EncodedInvariant:
        for inv in self.invariants:
            if inv.owner == cls and inv.ordinal == k:
                return inv
        raise KeyError(f"unknown invariant {cls}#{k}")

    def facts_only(self) -> R.RelProblem:
        """The problem with every invariant constraint removed."""
        return self.problem.with_core([c for c in self.problem.core if c.kind != "invariant"])

    def find_invariant(self, label: str) -> Optional[EncodedInvariant]:
        for inv in self.invariants:
            if inv.label == label:
                return inv
        return None
