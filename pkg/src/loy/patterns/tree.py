"""Diagnosis trees and their text and JSON renderings."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Tuple

from loy.relcore import ast as R
from loy.relcore.binding import Binding
from loy.relcore.solver import SAT, UNKNOWN, UNSAT


class WarningKind(enum.Enum):
    UNSAT_ANTECEDENT = "UnsatAntecedent"
    VALID_CONSEQUENT = "ValidConsequent"
    EMPTY_DOMAIN_UNIVERSAL = "EmptyDomainUniversal"
    EMPTY_DOMAIN_EXISTENTIAL = "EmptyDomainExistential"
    INCONSISTENT_CORE = "InconsistentCore"

    def message(self, subject: str = "") -> str:
        return {
            WarningKind.UNSAT_ANTECEDENT: "unsatisfiable antecedent",
            WarningKind.VALID_CONSEQUENT: "valid consequent",
            WarningKind.EMPTY_DOMAIN_UNIVERSAL: f"domain {subject} is empty",
            WarningKind.EMPTY_DOMAIN_EXISTENTIAL: f"specification for {subject} is unsatisfiable",
            WarningKind.INCONSISTENT_CORE: "core constraints are inconsistent",
        }[self]


PATTERN_TITLES = {
    1: "Negation",
    2: "Conjunction",
    3: "Disjunction",
    4: "Implication",
    5: "Universal quantification",
    6: "Existential quantification",
}

VERDICT_WORDS = {SAT: "satisfiable", UNSAT: "unsatisfiable", UNKNOWN: "unknown"}


@dataclass
class DiagnosisNode:
    """One SAT query of a diagnosis run, or a warning leaf.

    ``formula``/``env``/``core`` identify the query exactly, so the verdict
    can be replayed.  For a warning the triple is the evidence query,
    which must be unsatisfiable.  ``core`` names the invariants kept in the
    core constraints; None means the full specification.
    """

    query: str
    formula: R.RelFormula
    env: R.TypeEnv = R.TypeEnv()
    verdict: str = SAT
    model: Optional[Binding] = None
    pattern: Optional[int] = None
    question: Optional[str] = None
    warning: Optional[WarningKind] = None
    subject: str = ""
    note: Optional[str] = None
    core: Optional[Tuple[str, ...]] = None
    detail: Optional[str] = None
    regions: Optional[List[Tuple[str, ...]]] = None
    children: List["DiagnosisNode"] = field(default_factory=list)

    @property
    def is_warning(self) -> bool:
        return self.warning is not None

    @property
    def sat(self) -> bool:
        return self.verdict == SAT and not self.is_warning

    def walk(self) -> Iterator["DiagnosisNode"]:
        yield self
        for c in self.children:
            yield from c.walk()

    def warnings(self) -> List["DiagnosisNode"]:
        return [n for n in self.walk() if n.is_warning]

    def depth(self) -> int:
        """Longest chain of query nodes from this node down."""
        below = max((c.depth() for c in self.children), default=0)
        return below + (0 if self.is_warning else 1)

    def warning_text(self) -> str:
        return f"warning ({self.warning.message(self.subject)})"

    def line(self) -> str:
        if self.is_warning:
            return self.warning_text()
        s = f"{self.query} .. {VERDICT_WORDS[self.verdict]}"
        if len(self.env):
            s += f", {self.env}"
        if self.note:
            s += f"  [{self.note}]"
        return s


def render_text(node: DiagnosisNode, show_models: bool = False) -> str:
    return "\n".join(_text(node, "", show_models))


def _text(node: DiagnosisNode, indent: str, show_models: bool) -> List[str]:
    out = []
    if node.question:
        out.append(indent + node.question)
    if node.pattern:
        out.append(f"{indent}Pattern {node.pattern} -- {PATTERN_TITLES[node.pattern]}.")
    out.append(indent + node.line())
    if show_models and node.model is not None:
        out += [f"{indent}    {ln}" for ln in node.model.dump().splitlines()]
    sub = indent if len(node.children) == 1 else indent + "  "
    for c in node.children:
        out.append(indent + "|")
        out += _text(c, sub, show_models)
    return out


def to_json(node: DiagnosisNode) -> dict:
    d = {
        "query": node.query,
        "typeEnv": [[v, dom] for v, dom in node.env],
        "verdict": node.verdict,
    }
    if node.detail:
        d["formula"] = node.detail
    if node.pattern:
        d["pattern"] = node.pattern
    if node.model is not None:
        d["model"] = node.model.to_dict()
    if node.is_warning:
        d["annotation"] = node.warning_text()
        d["warning"] = node.warning.value
    elif node.question:
        d["annotation"] = node.question
    if node.note:
        d["note"] = node.note
    if node.core is not None:
        d["core"] = list(node.core)
    if node.regions is not None:
        d["regions"] = [list(r) for r in node.regions]
    d["children"] = [to_json(c) for c in node.children]
    return d
