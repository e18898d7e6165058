"""Alloy surface text for an encoded specification.

Emitted in order: the Obj signature, class signatures, field-table facts,
invariant predicates, Id/State and the P/Q/F method predicates.  Set
fields, multi-source depends clauses and subclass-aware frames use the
same style.  The text is for interoperability only;
analysis runs on the relational problem.
"""

from __future__ import annotations

from typing import List

from loy.encoder.frame import depends_closure
from loy.encoder.model import EncodedMethod, EncodedSpec, lower_first
from loy.frontend import ast as A
from loy.relcore import ast as R
from loy.relcore.render import Renderer

HEADER = [
    "// generated from Loy class specifications",
    "open util/sequniv as Seq",
    "open util/ordering [Seq/SeqIdx] as Ord_",
    "",
]


def _conjuncts(f: R.RelFormula) -> List[R.RelFormula]:
    if f == R.TRUE:
        return []
    if isinstance(f, R.And):
        return [g for a in f.args for g in _conjuncts(a)]
    return [f]


def _block(head: str, lines: List[str], indent: str = "") -> List[str]:
    if not lines:
        return [f"{indent}{head} {{ }}"]
    return [f"{indent}{head} {{"] + [f"{indent}  {ln}" for ln in lines] + [f"{indent}}}"]


def _signature(es: EncodedSpec, name: str) -> List[str]:
    rc = es.resolved[name]
    decls = ", ".join(f"{d.name} : {'set' if d.multiplicity == A.SET else 'lone'} {d.target}"
                      for d in rc.spec.decls)
    head = f"sig {name} extends {rc.superclass or 'Obj'} {{ {decls} }}" if decls else \
        f"sig {name} extends {rc.superclass or 'Obj'} {{ }}"
    facts: List[str] = []
    n = 0
    for dep in rc.depends:
        facts.append(f"// depends {dep.dependent} <- {' '.join(dep.sources)}")
        for src in dep.sources:
            facts.append(f"idxOf (fields, {dep.dependent}) -> idxOf (fields, {src}) in depends")
            n += 1
    if es.resolved.is_leaf(name) and n:
        facts.append(f"# depends = {n}")
    return _block(head, facts)


def _fieldtable(es: EncodedSpec, name: str) -> List[str]:
    rc = es.resolved[name]
    head = f"fact {name}_fieldtable"
    if not rc.fields:
        return [f"{head} {{ }}"]
    lets = ["idx0 = Ord_/Ord.first"] + [f"idx{k} = Ord_/next (idx{k - 1})"
                                        for k in range(1, len(rc.fields))]
    dom = " - ".join([name] + rc.subclasses)
    body = [f"at (o.fields, idx{k}) = o.{f.name}" for k, f in enumerate(rc.fields)]
    inner = _block(f"all o : {dom}", body)
    return _block(head, _block(f"let {', '.join(lets)}", inner))


def _params(em: EncodedMethod, after: bool) -> str:
    states = f"{em.s0}, {em.s1} : State" if after else f"{em.s0} : State"
    extra = "".join(f", {p} : {c}" for p, c in em.params)
    return f"({em.ident} : Id, {states}{extra})"


def _frame(es: EncodedSpec, em: EncodedMethod) -> List[str]:
    rs = es.resolved
    m = rs[em.cls].methods[em.name].item
    mp = lower_first(em.cls)
    firsts = [p.fields[0] for p in m.modifies]
    own = depends_closure(rs[em.cls], firsts)
    lines = ["some o'"]
    descs = rs.descendants(em.cls)
    for d in descs[1:]:
        lines.append(f"o' in {d} <=> o in {d}")
    exempt = list(dict.fromkeys(firsts))
    exempt += [f.name for f in rs[em.cls].fields if f.name in own and f.name not in exempt]
    alts = [f"k = idxOf (o.fields, o.{f})" for f in exempt]
    for d in descs[1:]:
        extra = depends_closure(rs[d], firsts) - own
        alts += [f"(o in {d} and k = idxOf (o.fields, o.{f.name}))"
                 for f in rs[d].fields if f.name in extra]
    cmp = ["at (o.fields, k) = at (o'.fields, k)" + (" ||" if alts else "")]
    cmp += [a + " ||" for a in alts[:-1]] + alts[-1:]
    lines += _block("all k : Seq/SeqIdx", cmp)
    inner = []
    for path in m.modifies:
        cur = em.cls
        for j, fname in enumerate(path.fields[:-1]):
            cur = rs[cur].field(fname).target
            chain = ".".join(path.fields[:j + 1])
            keep = depends_closure(rs[cur], {path.fields[j + 1]})
            for g in rs[cur].fields:
                if g.name not in keep:
                    lines.append(f"o.{chain}.{g.name} = o'.{chain}.{g.name}")
            inner.append((cur, chain))
    maps = []
    for k in [em.cls] + [c for c in rs.order() if c != em.cls]:
        km = lower_first(k)
        ln = f"{em.s1}.{km}[x] = {em.s0}.{km}[x]"
        if k == em.cls and m.modifies:
            ln += f" || x = {em.ident}"
        for t, chain in inner:
            if t == k:
                ln += f" || ({em.s0}.{km}[x] = o.{chain} and {em.s1}.{km}[x] = o'.{chain})"
        maps.append(ln)
    lines += _block("all x : Id", maps)
    let = f"let o = {em.s0}.{mp}[{em.ident}], o' = {em.s1}.{mp}[{em.ident}]"
    return _block(let, lines)


def emit_alloy_text(es: EncodedSpec) -> str:
    """Alloy text for ``es``; byte-stable for identical input."""
    rs = es.resolved
    out = list(HEADER)
    out.append("sig Obj { fields : Seq [Obj], depends : SeqIdx -> SeqIdx }")
    for name in rs.order():
        out.append("")
        out += _signature(es, name)
        out += _fieldtable(es, name)
    rend = Renderer(es.problem, "alloy", labels=False)
    if es.invariants:
        out.append("")
        for inv in es.invariants:
            out.append(f"pred {inv.label} () {{ {rend.formula(inv.formula)} }}")
        out += _block("fact invariants", [f"{inv.label} []" for inv in es.invariants])
    out.append("")
    out.append("sig Id { }")
    maps = [f"{lower_first(c)} : Id lone -> lone {c}" for c in rs.order()]
    maps = [ln + "," for ln in maps[:-1]] + maps[-1:]
    out += _block("sig State", maps)
    for em in es.methods.values():
        out.append("")
        out += _block(f"pred {em.label}_P {_params(em, False)}",
                      [rend.formula(g) for g in _conjuncts(em.pre)])
        out += _block(f"pred {em.label}_Q {_params(em, True)}",
                      [rend.formula(g) for g in _conjuncts(em.post)])
        out += _block(f"pred {em.label}_F {_params(em, True)}", _frame(es, em))
    return "\n".join(out) + "\n"
