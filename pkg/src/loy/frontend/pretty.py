"""Render Loy syntax trees back to source text."""

from __future__ import annotations

from typing import List

from loy.frontend import ast as A

# binding strength; higher binds tighter
_PREC = {A.Implies: 1, A.Or: 2, A.And: 3, A.Not: 4}


def expr(e: A.Expr) -> str:
    if isinstance(e, A.Name):
        return e.name + ("'" if e.primed else "")
    if isinstance(e, (A.Var, A.ParamRef, A.ClassRef)):
        return e.name
    if isinstance(e, A.FieldAccess):
        tail = e.field + ("'" if e.primed else "")
        return tail if e.base is None else f"{expr(e.base)}.{tail}"
    raise TypeError(e)


def formula(f: A.Formula, ctx: int = 0) -> str:
    if isinstance(f, (A.All, A.Exists)):
        kw = "all" if isinstance(f, A.All) else "exists"
        s = f"{kw} {f.var} : {f.cls} | {formula(f.body)}"
        return f"({s})" if ctx > 0 else s
    if isinstance(f, A.NoExpr):
        return f"no {expr(f.expr)}"
    if isinstance(f, A.SomeExpr):
        return f"some {expr(f.expr)}"
    if isinstance(f, A.Equal):
        return f"{expr(f.left)} = {expr(f.right)}"
    p = _PREC[type(f)]
    if isinstance(f, A.Not):
        s = f"not {formula(f.arg, p)}"
    elif isinstance(f, A.Implies):
        s = f"{formula(f.left, p + 1)} implies {formula(f.right, p)}"
    else:
        kw = "and" if isinstance(f, A.And) else "or"
        s = f"{formula(f.left, p)} {kw} {formula(f.right, p + 1)}"
    return f"({s})" if p < ctx else s


def _decl(d: A.FieldDecl) -> str:
    mult = "set " if d.multiplicity == A.SET else ""
    return f"{d.name} : {mult}{d.target}"


def class_spec(c: A.ClassSpec) -> str:
    head = f"class {c.name}" + (f" ext {c.superclass}" if c.superclass else "") + " {"
    lines: List[str] = [head]
    for d in c.decls:
        lines.append("  " + _decl(d))
    for dep in c.depends:
        lines.append(f"  depends {dep.dependent} <- {' '.join(dep.sources)}")
    for inv in c.invariants:
        lines.append(f"  invariant {formula(inv.formula)}")
    for m in c.methods:
        lines.append("")
        ret = f"{m.return_class} " if m.return_class else ""
        lines.append(f"  {ret}{m.name} ({', '.join(_decl(p) for p in m.params)})")
        for cl in m.pre:
            lines.append(f"    requires {formula(cl.formula)}")
        for cl in m.post:
            lines.append(f"    ensures {formula(cl.formula)}")
        if m.modifies:
            lines.append(f"    modifies {', '.join(str(p) for p in m.modifies)}")
    lines.append("}")
    return "\n".join(lines)


def spec(s: A.LoySpec) -> str:
    return "\n\n".join(class_spec(c) for c in s.classes) + ("\n" if s.classes else "")
