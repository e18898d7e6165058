"""Exhaustive binding enumeration: the test oracle for the solver.

Only usable on tiny problems; the number of bindings grows doubly
exponentially with scope.
"""

from __future__ import annotations

import itertools
from typing import Dict, Iterator, List, Optional

from loy.relcore.ast import LONE, TRUE, RelFormula, RelProblem, Scope, TypeEnv
from loy.relcore.binding import Binding, Universe, sort_atoms
from loy.relcore.evaluate import eval_formula


def _subsets(items, max_size=None):
    items = list(items)
    top = len(items) if max_size is None else min(max_size, len(items))
    for k in range(top + 1):
        for combo in itertools.combinations(items, k):
            yield frozenset(combo)


def _domain_order(problem: RelProblem) -> List[str]:
    order: List[str] = []

    def visit(n):
        if n in order:
            return
        d = problem.domain(n)
        if d.parent is not None and not problem.domain(d.parent).abstract:
            visit(d.parent)
        if d.abstract:
            for k in problem.children_of(n):
                visit(k.name)
        order.append(n)

    for d in problem.domains:
        visit(d.name)
    return order


def _elements(problem: RelProblem, uni: Universe, order: List[str], i: int,
              acc: Dict[str, frozenset]) -> Iterator[Dict[str, frozenset]]:
    if i == len(order):
        yield dict(acc)
        return
    name = order[i]
    d = problem.domain(name)
    if d.abstract:
        options = [frozenset().union(*(acc[k.name] for k in problem.children_of(name)))]
    elif d.exact is not None:
        options = [frozenset(uni.candidates[name])]
    elif uni.is_pool_owner(name):
        options = _subsets(uni.candidates[name])
    else:
        taken = frozenset().union(*(acc.get(k.name, frozenset())
                                    for k in problem.children_of(d.parent)
                                    if k.name != name))
        free = sort_atoms(acc[d.parent] - taken)
        options = _subsets(free, uni.bound(name))
    for opt in options:
        acc[name] = opt
        yield from _elements(problem, uni, order, i + 1, acc)
    acc.pop(name, None)


def _relation_options(rel, elements):
    cols = [sort_atoms(elements[c]) for c in rel.columns]
    cands = list(itertools.product(*cols))
    for ts in _subsets(cands):
        ok = True
        for j, m in enumerate(rel.mults):
            if m != LONE:
                continue
            seen = {}
            for t in ts:
                key = t[:j] + t[j + 1:]
                if seen.setdefault(key, t[j]) != t[j]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield ts


def bindings(problem: RelProblem, scope: Scope) -> Iterator[Binding]:
    """Every well-formed binding of the problem's vocabulary within scope."""
    uni = Universe(problem, scope)
    order = _domain_order(problem)
    arities = {r.name: r.arity for r in problem.relations}
    for els in _elements(problem, uni, order, 0, {}):
        if not problem.relations:
            yield Binding(els, {}, {}, arities)
            continue
        opts = [list(_relation_options(r, els)) for r in problem.relations]
        for combo in itertools.product(*opts):
            yield Binding(els, {r.name: ts for r, ts in zip(problem.relations, combo)},
                          {}, arities)


def assignments(b: Binding, env: TypeEnv) -> Iterator[Binding]:
    names = [v for v, _ in env]
    pools = [sort_atoms(b.elements[d]) for _, d in env]
    for combo in itertools.product(*pools):
        yield b.with_vars(dict(zip(names, combo)))


def brute_solve(problem: RelProblem, extra: RelFormula = TRUE, env: TypeEnv = TypeEnv(),
                scope: Scope = Scope()) -> Optional[Binding]:
    """First binding satisfying core and extra, or None."""
    core = problem.core_formula
    for b in bindings(problem, scope):
        if not eval_formula(b, core):
            continue
        for bv in assignments(b, env):
            if eval_formula(bv, extra):
                return bv
    return None


def brute_models(problem: RelProblem, scope: Scope) -> Iterator[Binding]:
    core = problem.core_formula
    for b in bindings(problem, scope):
        if eval_formula(b, core):
            yield b
