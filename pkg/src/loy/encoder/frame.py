"""Frame conditions built from modifies clauses.

Field tables are static, so "index k may change" becomes "field f may
change" and the frame compares field relations of the receiver snapshots
``s0.c[i]`` and ``s1.c[i]`` directly.  A receiver whose dynamic class is a
proper subclass of the method's class is framed against that subclass's
table, whose depends clauses may exempt more fields.
"""

from __future__ import annotations

from typing import Iterable, List, Set, Tuple

from loy.encoder.model import ID, field_rel, state_read
from loy.frontend import ast as A
from loy.frontend.resolve import ResolvedClass, ResolvedSpec
from loy.relcore import ast as R


def depends_closure(rc: ResolvedClass, fields: Iterable[str]) -> Set[str]:
    """``fields`` plus every field that depends on them, transitively."""
    out = set(fields)
    changed = True
    while changed:
        changed = False
        for dep in rc.depends:
            if dep.dependent not in out and any(s in out for s in dep.sources):
                out.add(dep.dependent)
                changed = True
    return out


def exact_member(rs: ResolvedSpec, e: R.RelExpr, cls: str) -> R.RelFormula:
    """``e`` lies in ``cls`` and in none of its subclasses."""
    parts: List[R.RelFormula] = [R.Subset(e, R.Rel(cls))]
    for sub in rs[cls].subclasses:
        parts.append(R.Not(R.Subset(e, R.Rel(sub))))
    return parts[0] if len(parts) == 1 else R.And(tuple(parts))


def _read(rs: ResolvedSpec, base: R.RelExpr, cls: str, fname: str) -> R.RelExpr:
    return R.Join(base, R.Rel(field_rel(rs[cls].field_owner[fname], fname)))


def _pins(rs: ResolvedSpec, cls: str, a: R.RelExpr, b: R.RelExpr, exempt: Set[str]):
    return [R.SetEqual(_read(rs, a, cls, f.name), _read(rs, b, cls, f.name))
            for f in rs[cls].fields if f.name not in exempt]


def frame_exemptions(rs: ResolvedSpec, cls: str, m: A.MethodSpec) -> Set[str]:
    firsts = {p.fields[0] for p in m.modifies}
    return depends_closure(rs[cls], firsts)


def build_frame_condition(rs: ResolvedSpec, cls: str, m: A.MethodSpec, ident: str = "i",
                          s0: str = "s0", s1: str = "s1", idvar: str = "x") -> R.RelFormula:
    o = state_read(s0, cls, ident)
    o1 = state_read(s1, cls, ident)
    firsts = {p.fields[0] for p in m.modifies}
    parts: List[R.RelFormula] = [R.NonEmpty(o1)]
    descs = rs.descendants(cls)
    for d in descs[1:]:
        # the receiver keeps its dynamic class
        parts.append(R.Implies(R.Subset(o, R.Rel(d)), R.Subset(o1, R.Rel(d))))
        parts.append(R.Implies(R.Subset(o1, R.Rel(d)), R.Subset(o, R.Rel(d))))
    for d in descs:
        pins = _pins(rs, d, o, o1, depends_closure(rs[d], firsts))
        if not pins:
            continue
        if len(descs) == 1:
            parts.extend(pins)
        else:
            parts.append(R.Implies(exact_member(rs, o, d), R.conj(*pins)))

    # value semantics along each path v1...vn: objects a_j = o.v1...vj are
    # replaced by b_j = o'.v1...vj that agree with them except on v(j+1)
    inner: List[Tuple[str, R.RelExpr, R.RelExpr]] = []
    for path in m.modifies:
        a, b, cur = o, o1, cls
        for j, fname in enumerate(path.fields[:-1]):
            nxt = rs[cur].field(fname).target
            a, b = _read(rs, a, cur, fname), _read(rs, b, cur, fname)
            cur = nxt
            parts.extend(_pins(rs, cur, a, b, depends_closure(rs[cur], {path.fields[j + 1]})))
            inner.append((cur, a, b))

    x = R.Var(idvar)
    maps: List[R.RelFormula] = []
    for k in [cls] + [c for c in rs.order() if c != cls]:
        before, after = state_read(s0, k, idvar), state_read(s1, k, idvar)
        alts: List[R.RelFormula] = [R.SetEqual(after, before)]
        if k == cls and m.modifies:
            alts.append(R.SetEqual(x, R.Var(ident)))
        for t, a, b in inner:
            if t == k:
                alts.append(R.And((R.SetEqual(before, a), R.SetEqual(after, b))))
        maps.append(alts[0] if len(alts) == 1 else R.Or(tuple(alts)))
    if maps:
        parts.append(R.ForAll(idvar, ID, maps[0] if len(maps) == 1 else R.And(tuple(maps))))
    return parts[0] if len(parts) == 1 else R.And(tuple(parts))
