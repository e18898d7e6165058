"""Human-readable rendering of relational formulas.

Two dialects share one printer: ``loy`` (used in diagnosis traces) and
``alloy`` (used by the Alloy text emitter).  They differ only in the
existential keyword.  ``s.m[x]`` is printed for ``x.(s.m)`` when ``m`` is
ternary, following the state-map notation.
"""

from __future__ import annotations

from typing import Optional

from loy.relcore import ast as R

_PREC = {R.Implies: 1, R.Or: 2, R.And: 3, R.Not: 4}


class Renderer:
    def __init__(self, problem: Optional[R.RelProblem] = None, dialect: str = "loy",
                 labels: bool = True):
        self.problem = problem
        self.dialect = dialect
        self.labels = labels

    def rel(self, name: str) -> str:
        return self.problem.label_of(name) if self.problem else name

    def ternary(self, name: str) -> bool:
        if self.problem is None or not self.problem.has_relation(name):
            return False
        return self.problem.relation(name).arity == 3

    def expr(self, e: R.RelExpr) -> str:
        if isinstance(e, R.Var):
            return e.name
        if isinstance(e, R.Rel):
            return self.rel(e.name)
        if isinstance(e, R.Lit):
            if not e.tuples:
                return "none"
            tuples = sorted(e.tuples)
            return " + ".join(" -> ".join(t) for t in tuples)
        if isinstance(e, R.Join):
            r = e.right
            if (isinstance(r, R.Join) and isinstance(r.right, R.Rel) and
                    self.ternary(r.right.name) and isinstance(e.left, (R.Var, R.Lit))):
                return f"{self.expr(r.left)}.{self.rel(r.right.name)}[{self.expr(e.left)}]"
            left = self.expr(e.left)
            if isinstance(e.left, R.Lit) and len(e.left.tuples) != 1:
                left = f"({left})"
            return f"{left}.{self.expr(e.right)}"
        raise TypeError(e)

    def formula(self, f: R.RelFormula, ctx: int = 0) -> str:
        if f == R.TRUE:
            return "true"
        if f == R.FALSE:
            return "false"
        if isinstance(f, R.Named):
            return f.label if self.labels else self.formula(f.body, ctx)
        if isinstance(f, (R.ForAll, R.Exists)):
            kw = "all" if isinstance(f, R.ForAll) else ("some" if self.dialect == "alloy" else "exists")
            s = f"{kw} {f.var} : {f.domain} | {self.formula(f.body)}"
            return f"({s})" if ctx > 0 else s
        if isinstance(f, R.Empty):
            return f"no {self.expr(f.expr)}"
        if isinstance(f, R.NonEmpty):
            return f"some {self.expr(f.expr)}"
        if isinstance(f, R.SetEqual):
            return f"{self.expr(f.left)} = {self.expr(f.right)}"
        if isinstance(f, R.Subset):
            return f"{self.expr(f.left)} in {self.expr(f.right)}"
        if isinstance(f, R.CardEq):
            return f"# {self.expr(f.expr)} = {f.k}"
        p = _PREC[type(f)]
        if isinstance(f, R.Not):
            s = f"not {self.formula(f.arg, p + 1)}"
        elif isinstance(f, R.Implies):
            # compound operands are always bracketed for readability
            s = f"{self.formula(f.left, 4)} implies {self.formula(f.right, 4)}"
        else:
            kw = " and " if isinstance(f, R.And) else " or "
            s = kw.join(self.formula(a, p + 1) for a in f.args)
        return f"({s})" if p < ctx else s


def render(f: R.RelFormula, problem: Optional[R.RelProblem] = None, dialect: str = "loy",
           labels: bool = True) -> str:
    return Renderer(problem, dialect, labels).formula(f)


def render_expr(e: R.RelExpr, problem: Optional[R.RelProblem] = None) -> str:
    return Renderer(problem).expr(e)
