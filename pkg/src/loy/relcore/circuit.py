"""Hash-consed AND/NOT circuits with Tseitin clause generation.

A literal is a signed node id; node 1 is the constant TRUE so -1 is FALSE.
Node ids double as SAT variable numbers.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Sequence, Set, Tuple

T = 1
F = -1


class Circuit:
    def __init__(self):
        self.n = 1
        self.gates: Dict[int, Tuple[int, ...]] = {}
        self._hash: Dict[Tuple[int, ...], int] = {}

    def var(self) -> int:
        self.n += 1
        return self.n

    def and_(self, lits: Iterable[int]) -> int:
        kept = set()
        for l in lits:
            if l == F:
                return F
            if l == T:
                continue
            if -l in kept:
                return F
            kept.add(l)
        if not kept:
            return T
        if len(kept) == 1:
            return next(iter(kept))
        key = tuple(sorted(kept))
        g = self._hash.get(key)
        if g is None:
            g = self.var()
            self.gates[g] = key
            self._hash[key] = g
        return g

    def or_(self, lits: Iterable[int]) -> int:
        return -self.and_(-l for l in lits)

    def implies(self, a: int, b: int) -> int:
        return self.or_((-a, b))

    def iff(self, a: int, b: int) -> int:
        if a == b:
            return T
        if a == -b:
            return F
        return self.and_((self.or_((-a, b)), self.or_((a, -b))))

    def at_least(self, lits: Sequence[int], k: int) -> int:
        """Literal true iff at least ``k`` of ``lits`` hold."""
        if k <= 0:
            return T
        lits = [l for l in lits if l != F]
        if k > len(lits):
            return F
        # row[j] = at least j among the prefix seen so far
        row = [T] + [F] * k
        for x in lits:
            new = [T]
            for j in range(1, k + 1):
                new.append(self.or_((row[j], self.and_((x, row[j - 1])))))
            row = new
        return row[k]

    def exactly(self, lits: Sequence[int], k: int) -> int:
        return self.and_((self.at_least(lits, k), -self.at_least(lits, k + 1)))

    def at_most(self, lits: Sequence[int], k: int) -> int:
        return -self.at_least(lits, k + 1)

    def clauses_for(self, roots: Iterable[int], visited: Set[int]) -> List[List[int]]:
        """Tseitin clauses for gates reachable from ``roots`` not in ``visited``."""
        out: List[List[int]] = []
        stack = [abs(r) for r in roots]
        while stack:
            g = stack.pop()
            if g in visited:
                continue
            visited.add(g)
            kids = self.gates.get(g)
            if kids is None:
                continue
            for c in kids:
                out.append([-g, c])
                stack.append(abs(c))
            out.append([g] + [-c for c in kids])
        return out
