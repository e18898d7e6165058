"""Core-consistency checking and whole-method diagnosis."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from loy.patterns.engine import DEFAULT_RANGE_CAP, Engine
from loy.patterns.tree import DiagnosisNode, WarningKind
from loy.relcore import ast as R
from loy.relcore.solver import DEFAULT_BUDGET, SAT, UNSAT

FACTS_ONLY: Tuple[str, ...] = ()


def facts_problem(problem: R.RelProblem) -> R.RelProblem:
    return problem.with_core([c for c in problem.core if c.kind != "invariant"])


def problem_for(problem: R.RelProblem, core: Optional[Tuple[str, ...]]) -> R.RelProblem:
    """The problem a node's ``core`` tag refers to."""
    if core is None:
        return problem
    keep = set(core)
    return problem.with_core([c for c in problem.core if c.kind != "invariant" or c.label in keep])


def _conj_named(invs: Sequence[R.Constraint]) -> R.RelFormula:
    parts = tuple(R.Named(c.label, c.formula) for c in invs)
    return parts[0] if len(parts) == 1 else R.And(parts)


def _subsets(n: int, cap: int) -> List[Tuple[int, ...]]:
    """Pairs, then contiguous runs of length three or more, shortest first."""
    out = list(combinations(range(n), 2))
    for k in range(3, n + 1):
        out += [tuple(range(i, i + k)) for i in range(0, n - k + 1)]
    return out[:cap]


def check_core_first(problem: R.RelProblem, scope: R.Scope = R.Scope(),
                     budget: int = DEFAULT_BUDGET, range_cap: int = DEFAULT_RANGE_CAP,
                     memo=None) -> DiagnosisNode:
    """SAT(true) against the core; on failure, localize the clashing invariants.

    Each invariant is diagnosed on its own against the declarations, then
    in combination with the others.  The minimal unsatisfiable
    combinations found are listed in ``root.regions``.
    """
    memo = {} if memo is None else memo
    full = Engine(problem, scope, budget, range_cap, memo=memo)
    root = full.query(R.TRUE, R.TypeEnv(), "core constraints")
    if root.verdict != UNSAT:
        return root
    root.children.append(full.warn(WarningKind.INCONSISTENT_CORE, R.TRUE, R.TypeEnv()))
    invs = [c for c in problem.core if c.kind == "invariant"]
    eng = Engine(facts_problem(problem), scope, budget, range_cap, core=FACTS_ONLY, memo=memo)
    decl = eng.query(R.TRUE, R.TypeEnv(), "declarations")
    if decl.verdict == UNSAT:
        decl.note = "inconsistent region"
        root.children.append(decl)
        root.regions = [()]
        return root
    for c in invs:
        root.children.append(eng.apply(R.Named(c.label, c.formula), R.TypeEnv(), 0,
                                       f"Q: Is {c.label} consistent with the declarations?"))
    found: List[Tuple[str, ...]] = []
    for c in invs:
        if eng.sat(R.Named(c.label, c.formula), R.TypeEnv()).unsat:
            found.append((c.label,))
    for idx in _subsets(len(invs), range_cap):
        chosen = [invs[i] for i in idx]
        labels = tuple(c.label for c in chosen)
        q = f"Q: Are {', '.join(labels)} consistent together?"
        child = eng.query(_conj_named(chosen), R.TypeEnv(), question=q)
        if child.verdict == UNSAT and not any(set(s) <= set(labels) for s in found):
            child.note = "inconsistent region"
            found.append(labels)
        root.children.append(child)
    if not found and invs:
        labels = _deletion_core(eng, invs)
        if labels:
            child = eng.query(_conj_named([c for c in invs if c.label in labels]), R.TypeEnv(),
                              question="Q: Which invariants clash?", note="inconsistent region")
            root.children.append(child)
            found.append(labels)
    root.regions = found
    if found:
        root.note = "clash: " + "; ".join("{" + ", ".join(s) + "}" for s in found)
    return root


def _deletion_core(eng: Engine, invs: Sequence[R.Constraint]) -> Tuple[str, ...]:
    keep = list(invs)
    if not eng.sat(_conj_named(keep), R.TypeEnv()).unsat:
        return ()
    for c in list(invs):
        trial = [d for d in keep if d is not c]
        if trial and eng.sat(_conj_named(trial), R.TypeEnv()).unsat:
            keep = trial
    return tuple(c.label for c in keep)


@dataclass
class Diagnosis:
    core: DiagnosisNode
    tree: DiagnosisNode

    @property
    def ok(self) -> bool:
        """Both roots satisfiable and no warning anywhere."""
        return (self.core.verdict == SAT and self.tree.verdict == SAT and
                not self.core.warnings() and not self.tree.warnings())


def diagnose_formula(problem: R.RelProblem, f: R.RelFormula, env: R.TypeEnv = R.TypeEnv(),
                     scope: R.Scope = R.Scope(), budget: int = DEFAULT_BUDGET,
                     range_cap: int = DEFAULT_RANGE_CAP) -> Diagnosis:
    memo = {}
    core = check_core_first(problem, scope, budget, range_cap, memo)
    tree = Engine(problem, scope, budget, range_cap, memo=memo).run(f, env)
    return Diagnosis(core, tree)


def diagnose_method(es, cls: str, method: str, scope: R.Scope = R.Scope(),
                    budget: int = DEFAULT_BUDGET, range_cap: int = DEFAULT_RANGE_CAP) -> Diagnosis:
    """Core check, then the patterns on the existential closure of the method query."""
    em = es.method(cls, method)
    return diagnose_formula(es.problem, em.closure(), R.TypeEnv(), scope, budget, range_cap)


def localize_invariants(problem: R.RelProblem, f: R.RelFormula, env: R.TypeEnv,
                        scope: R.Scope = R.Scope(), budget: int = DEFAULT_BUDGET) -> Tuple[str, ...]:
    """A minimal set of invariants that, with the declarations, makes ``f`` unsatisfiable."""
    invs = [c for c in problem.core if c.kind == "invariant"]
    eng = Engine(facts_problem(problem), scope, budget, core=FACTS_ONLY)
    g = R.And((f, _conj_named(invs))) if invs else f
    if not eng.sat(g, env).unsat:
        return ()
    keep = list(invs)
    for c in list(invs):
        trial = [d for d in keep if d is not c]
        g = R.And((f, _conj_named(trial))) if trial else f
        if eng.sat(g, env).unsat:
            keep = trial
    return tuple(c.label for c in keep)
