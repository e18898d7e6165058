from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Tuple

from loy.errors import InternalFault
from loy.relcore.ast import LONE, Atom, RelProblem, Scope


def atom_name(domain: str, i: int) -> Atom:
    return f"{domain}${i}"


def _atom_key(a: Atom):
    m = re.match(r"^(.*)\$(\d+)$", a)
    if m:
        return (m.group(1), int(m.group(2)))
    return (a, -1)


def sort_atoms(atoms) -> List[Atom]:
    return sorted(atoms, key=_atom_key)


def sort_tuples(tuples) -> List[Tuple[Atom, ...]]:
    return sorted(tuples, key=lambda t: tuple(_atom_key(a) for a in t))


class Universe:
    """Candidate atoms for every domain of a problem under a scope."""

    def __init__(self, problem: RelProblem, scope: Scope):
        self.problem = problem
        self.scope = scope
        self.candidates: Dict[str, Tuple[Atom, ...]] = {}
        self.owners: Dict[str, str] = {}
        self.defaulted: List[str] = []
        for d in problem.domains:
            if d.parent is not None and not problem.has_domain(d.parent):
                raise InternalFault(f"domain {d.name}: unknown parent {d.parent}")
            if d.abstract and d.parent is not None and not problem.domain(d.parent).abstract:
                raise InternalFault(f"abstract domain {d.name} under concrete parent")
        self._check_acyclic()
        for d in problem.domains:
            self._cands(d.name)

    def _check_acyclic(self):
        for d in self.problem.domains:
            seen = {d.name}
            p = d.parent
            while p is not None:
                if p in seen:
                    raise InternalFault(f"domain hierarchy cycle through {p}")
                seen.add(p)
                p = self.problem.domain(p).parent

    def is_pool_owner(self, name: str) -> bool:
        d = self.problem.domain(name)
        if d.abstract:
            return False
        return d.parent is None or self.problem.domain(d.parent).abstract

    def _cands(self, name: str) -> Tuple[Atom, ...]:
        if name in self.candidates:
            return self.candidates[name]
        d = self.problem.domain(name)
        if d.abstract:
            out: List[Atom] = []
            for c in self.problem.children_of(name):
                out.extend(self._cands(c.name))
            res = tuple(out)
        elif self.is_pool_owner(name):
            if d.exact is not None:
                k = d.exact
            else:
                if not self.scope.explicit(name):
                    self.defaulted.append(name)
                k = self.scope.bound(name)
            res = tuple(atom_name(name, i) for i in range(k))
        else:
            if d.exact is not None:
                raise InternalFault(f"exact bound on subdomain {name}")
            res = self._cands(d.parent)
        self.candidates[name] = res
        return res

    def bound(self, name: str) -> int:
        """Maximum element count; may be below the candidate count."""
        d = self.problem.domain(name)
        n = len(self.candidates[name])
        if d.abstract or d.exact is not None or self.is_pool_owner(name):
            return n
        return min(n, self.scope.bound(name))

    def column_atoms(self, domain: str) -> Tuple[Atom, ...]:
        return self.candidates[domain]


@dataclass
class Binding:
    """Domain elements, relation tuples and variable values."""

    elements: Dict[str, FrozenSet[Atom]] = field(default_factory=dict)
    tuples: Dict[str, FrozenSet[Tuple[Atom, ...]]] = field(default_factory=dict)
    vars: Dict[str, Atom] = field(default_factory=dict)
    arities: Dict[str, int] = field(default_factory=dict)

    def with_vars(self, vars: Mapping[str, Atom]) -> "Binding":
        return Binding(self.elements, self.tuples, dict(vars), self.arities)

    def bind(self, var: str, atom: Atom) -> "Binding":
        v = dict(self.vars)
        v[var] = atom
        return Binding(self.elements, self.tuples, v, self.arities)

    def dump(self) -> str:
        """Stable text form: domains, then relations, then variables."""
        lines = []
        for d in sorted(self.elements):
            lines.append(f"{d} = {{{', '.join(sort_atoms(self.elements[d]))}}}")
        for r in sorted(self.tuples):
            ts = ", ".join("(" + ", ".join(t) + ")" for t in sort_tuples(self.tuples[r]))
            lines.append(f"{r} = {{{ts}}}")
        for v in sorted(self.vars):
            lines.append(f"{v} = {self.vars[v]}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "elements": {d: sort_atoms(self.elements[d]) for d in sorted(self.elements)},
            "relations": {r: [list(t) for t in sort_tuples(self.tuples[r])]
                          for r in sorted(self.tuples)},
            "vars": {v: self.vars[v] for v in sorted(self.vars)},
        }

    def violations(self, problem: RelProblem, scope: Scope) -> List[str]:
        """Structural problems with this binding; empty when well formed."""
        out = []
        uni = Universe(problem, scope)
        for d in problem.domains:
            els = self.elements.get(d.name, frozenset())
            if not els <= set(uni.candidates[d.name]):
                out.append(f"{d.name}: atoms outside candidate pool")
            if len(els) > uni.bound(d.name):
                out.append(f"{d.name}: {len(els)} elements exceed bound")
            if d.exact is not None and len(els) != d.exact:
                out.append(f"{d.name}: exact domain not full")
            if d.parent is not None and not els <= self.elements.get(d.parent, frozenset()):
                out.append(f"{d.name}: not contained in {d.parent}")
            kids = problem.children_of(d.name)
            if d.abstract:
                union = frozenset().union(*(self.elements.get(k.name, frozenset()) for k in kids))
                if union != els:
                    out.append(f"{d.name}: abstract domain != union of children")
            for i, a in enumerate(kids):
                for b in kids[i + 1:]:
                    if self.elements.get(a.name, frozenset()) & self.elements.get(b.name, frozenset()):
                        out.append(f"{a.name}, {b.name}: siblings overlap")
        for r in problem.relations:
            ts = self.tuples.get(r.name, frozenset())
            for t in ts:
                if len(t) != r.arity:
                    out.append(f"{r.name}: tuple {t} has wrong arity")
                    continue
                for col, a in zip(r.columns, t):
                    if a not in self.elements.get(col, frozenset()):
                        out.append(f"{r.name}: {a} not in column domain {col}")
            for j, m in enumerate(r.mults):
                if m != LONE:
                    continue
                seen: Dict[tuple, Atom] = {}
                for t in ts:
                    key = t[:j] + t[j + 1:]
                    if key in seen and seen[key] != t[j]:
                        out.append(f"{r.name}: column {j} not lone for {key}")
                    seen[key] = t[j]
        return out
