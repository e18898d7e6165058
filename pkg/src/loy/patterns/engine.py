"""The patterns of analysis.

``Engine.apply`` dispatches on the root connective of a formula, records
every SAT query it issues as a tree node and recurses into strict
subformulas.  ``Named`` nodes are transparent to dispatch but print as
their label.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from loy.errors import InternalFault
from loy.patterns.tree import DiagnosisNode, WarningKind
from loy.relcore import ast as R
from loy.relcore.render import Renderer
from loy.relcore.solver import DEFAULT_BUDGET, SAT, UNKNOWN, UNSAT, SatResult, solve

DEFAULT_RANGE_CAP = 32


class Engine:
    def __init__(self, problem: R.RelProblem, scope: R.Scope = R.Scope(),
                 budget: int = DEFAULT_BUDGET, range_cap: int = DEFAULT_RANGE_CAP,
                 depth_cap: Optional[int] = None, core: Optional[Tuple[str, ...]] = None,
                 memo: Optional[Dict] = None):
        self.problem = problem
        self.scope = scope
        self.budget = budget
        self.range_cap = range_cap
        self.depth_cap = depth_cap
        self.core = core
        self.memo = {} if memo is None else memo
        self.rend = Renderer(problem)
        self.plain = Renderer(problem, labels=False)
        self.solver_calls = 0
        self._facts: Optional["Engine"] = None

    # ------------------------------------------------------------ queries

    def show(self, f: R.RelFormula) -> str:
        return self.rend.formula(f)

    def sat(self, f: R.RelFormula, env: R.TypeEnv) -> SatResult:
        key = (self.core, f, env)
        if key not in self.memo:
            self.solver_calls += 1
            self.memo[key] = solve(self.problem, f, env, self.scope, self.budget)
        return self.memo[key]

    def query(self, f: R.RelFormula, env: R.TypeEnv, text: Optional[str] = None,
              **kw) -> DiagnosisNode:
        r = self.sat(f, env)
        detail = self.plain.formula(f) if isinstance(f, R.Named) else None
        return DiagnosisNode(text or self.show(f), f, env, r.status, r.model if r.sat else None,
                             core=self.core, detail=detail, **kw)

    def warn(self, kind: WarningKind, evidence: R.RelFormula, env: R.TypeEnv,
             subject: str = "") -> DiagnosisNode:
        return DiagnosisNode(kind.message(subject), evidence, env, UNSAT, warning=kind,
                             subject=subject, core=self.core)

    def nonempty(self, domain: str) -> DiagnosisNode:
        return self.query(R.NonEmpty(R.Rel(domain)), R.TypeEnv(), f"{domain} ≠ {{}}")

    # ----------------------------------------------------------- dispatch

    def run(self, f: R.RelFormula, env: R.TypeEnv = R.TypeEnv()) -> DiagnosisNode:
        """Apply the patterns to ``f`` with the default depth cap."""
        saved = self.depth_cap
        if self.depth_cap is None:
            self.depth_cap = R.height(f)
        try:
            return self.apply(f, env, 0)
        finally:
            self.depth_cap = saved

    def apply(self, f: R.RelFormula, env: R.TypeEnv, depth: int = 0,
              question: Optional[str] = None) -> DiagnosisNode:
        if not R.free_vars(f) <= set(env.names()):
            raise InternalFault(f"free variables of {self.show(f)} not typed by <{env}>")
        g = R.unwrap(f)
        if self.depth_cap is not None and depth > self.depth_cap:
            return DiagnosisNode(self.show(f), f, env, UNKNOWN, question=question,
                                 note="depth limit reached", core=self.core)
        if isinstance(g, R.And) and len(g.args) == 1:
            return self.apply(g.args[0], env, depth, question)
        if isinstance(g, R.Not):
            node = self.negation(f, g, env, depth)
        elif isinstance(g, R.And):
            node = self.conjunction(f, g, env, depth)
        elif isinstance(g, R.Or):
            node = self.disjunction(f, g, env, depth)
        elif isinstance(g, R.Implies):
            node = self.implication(f, g, env, depth)
        elif isinstance(g, R.ForAll):
            node = self.universal(f, g, env, depth)
        elif isinstance(g, R.Exists):
            node = self.existential(f, g, env, depth)
        else:
            node = self.atomic(f, env)
        node.question = question
        return node

    def _stopped(self, node: DiagnosisNode) -> bool:
        if node.verdict == UNKNOWN:
            node.note = "search budget exhausted"
            return True
        return False

    def localize(self, node: DiagnosisNode) -> None:
        """Attach the minimal set of invariants that makes ``node`` unsatisfiable."""
        invs = [c for c in self.problem.core if c.kind == "invariant"]
        if self.core is not None or not invs:
            return
        if self._facts is None:
            facts = self.problem.with_core([c for c in self.problem.core if c.kind != "invariant"])
            self._facts = Engine(facts, self.scope, self.budget, core=(), memo=self.memo)

        def clash(keep):
            parts = (node.formula,) + tuple(R.Named(c.label, c.formula) for c in keep)
            return R.And(parts) if len(parts) > 1 else node.formula

        if not self._facts.sat(clash(invs), node.env).unsat:
            return
        keep = list(invs)
        for c in invs:
            trial = [d for d in keep if d is not c]
            if self._facts.sat(clash(trial), node.env).unsat:
                keep = trial
        labels = ", ".join(c.label for c in keep) or "the declarations alone"
        node.children.append(self._facts.query(
            clash(keep), node.env, f"{node.query} with {labels}",
            question="Q: Which invariants does this region clash with?",
            note=f"clash with {labels}"))

    # ----------------------------------------------------------- patterns

    def atomic(self, f: R.RelFormula, env: R.TypeEnv) -> DiagnosisNode:
        node = self.query(f, env)
        if self._stopped(node):
            return node
        neg = self.query(R.Not(f), env)
        node.children.append(neg)
        if neg.verdict == UNKNOWN:
            node.note = "classification unknown"
        elif node.verdict == UNSAT and neg.verdict == UNSAT:
            node.note = "core inconsistent"
        elif node.verdict == UNSAT:
            node.note = "unsatisfiable"
        elif neg.verdict == UNSAT:
            node.note = "valid"
        else:
            node.note = "contingent"
        return node

    def negation(self, f, g: R.Not, env, depth) -> DiagnosisNode:
        node = self.query(f, env, pattern=1)
        if self._stopped(node):
            return node
        a = g.arg
        q = None if node.verdict == SAT else f"Q: Why is {self.show(a)} valid?"
        node.children.append(self.apply(a, env, depth + 1, q))
        return node

    def conjunction(self, f, g: R.And, env, depth) -> DiagnosisNode:
        node = self.query(f, env, pattern=2)
        if self._stopped(node):
            return node
        args = g.args
        if node.verdict == SAT:
            for a in args:
                node.children.append(self.apply(
                    a, env, depth + 1, f"Q: Is {self.show(a)} vacuously satisfiable?"))
            return node
        q = f"Q: Why is {node.query} unsatisfiable?"
        n = len(args)
        ranges = [(i, i + k) for k in range(1, n) for i in range(0, n - k + 1)]
        unsat_ranges: List[Tuple[int, int]] = []
        for i, j in ranges[:self.range_cap]:
            if j - i == 1:
                child = self.apply(args[i], env, depth + 1, q)
            else:
                child = self.query(R.And(args[i:j]), env, question=q)
            if child.verdict == UNSAT:
                if not any(a >= i and b <= j for a, b in unsat_ranges):
                    child.note = (child.note + "; " if child.note else "") + "inconsistent region"
                    self.localize(child)
                unsat_ranges.append((i, j))
            node.children.append(child)
        if len(ranges) > self.range_cap:
            node.note = f"{len(ranges) - self.range_cap} sub-conjunctions skipped"
        return node

    def disjunction(self, f, g: R.Or, env, depth) -> DiagnosisNode:
        node = self.query(f, env, pattern=3)
        if self._stopped(node):
            return node
        for a in g.args:
            q = (f"Q: Is {self.show(a)} vacuously satisfiable?" if node.verdict == SAT
                 else f"Q: Why is {node.query} unsatisfiable?")
            node.children.append(self.apply(a, env, depth + 1, q))
        return node

    def implication(self, f, g: R.Implies, env, depth) -> DiagnosisNode:
        node = self.query(f, env, pattern=4)
        if self._stopped(node):
            return node
        a, b = g.left, g.right
        if node.verdict == UNSAT:
            node.children.append(self.apply(a, env, depth + 1, f"Q: Why is {self.show(a)} valid?"))
            node.children.append(self.apply(
                b, env, depth + 1, f"Q: Why is {self.show(b)} unsatisfiable?"))
            return node
        probe_a = self.query(a, env)
        node.children.append(probe_a)
        if probe_a.verdict == UNSAT:
            probe_a.children.append(self.warn(WarningKind.UNSAT_ANTECEDENT, a, env))
            return node
        probe_b = self.query(R.Not(b), env)
        node.children.append(probe_b)
        if probe_b.verdict == UNSAT:
            probe_b.children.append(self.warn(WarningKind.VALID_CONSEQUENT, R.Not(b), env))
            return node
        if UNKNOWN in (probe_a.verdict, probe_b.verdict):
            node.note = "search budget exhausted"
            return node
        node.children.append(self.apply(a, env, depth + 1))
        node.children.append(self.apply(b, env, depth + 1))
        return node

    def _bind(self, g, env: R.TypeEnv) -> R.TypeEnv:
        if g.var in env.names():
            raise InternalFault(f"quantified variable {g.var} already typed in <{env}>")
        return env.extend(g.var, g.domain)

    def universal(self, f, g: R.ForAll, env, depth) -> DiagnosisNode:
        node = self.query(f, env, pattern=5)
        if self._stopped(node):
            return node
        inner = self._bind(g, env)
        body = self.show(g.body)
        if node.verdict == SAT:
            probe = self.nonempty(g.domain)
            node.children.append(probe)
            if probe.verdict == UNSAT:
                probe.children.append(self.warn(WarningKind.EMPTY_DOMAIN_UNIVERSAL,
                                                probe.formula, probe.env, g.domain))
            elif probe.verdict == SAT:
                probe.children.append(self.apply(
                    g.body, inner, depth + 1, f"Q: Is {body} vacuously satisfiable?"))
            return node
        cex = self.query(R.Not(g.body), inner, note="counterexample")
        node.children.append(cex)
        cex.children.append(self.apply(g.body, inner, depth + 1, f"Q: Is {body} satisfiable?"))
        return node

    def existential(self, f, g: R.Exists, env, depth) -> DiagnosisNode:
        node = self.query(f, env, pattern=6)
        if self._stopped(node):
            return node
        inner = self._bind(g, env)
        body = self.show(g.body)
        if node.verdict == SAT:
            node.children.append(self.apply(
                g.body, inner, depth + 1, f"Q: Is {body} vacuously satisfiable?"))
            return node
        probe = self.nonempty(g.domain)
        node.children.append(probe)
        if probe.verdict == UNSAT:
            probe.children.append(self.warn(WarningKind.EMPTY_DOMAIN_EXISTENTIAL,
                                            probe.formula, probe.env, g.domain))
        elif probe.verdict == SAT:
            probe.children.append(self.apply(
                g.body, inner, depth + 1, f"Q: Why is {body} unsatisfiable?"))
        return node


def apply_pattern(f: R.RelFormula, env: R.TypeEnv, problem: R.RelProblem,
                  scope: R.Scope = R.Scope(), **kw) -> DiagnosisNode:
    return Engine(problem, scope, **kw).run(f, env)
