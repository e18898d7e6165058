"""A small CDCL SAT solver: two watched literals, first-UIP learning,
activity-based branching with false-first polarity, and Luby restarts.
Branching picks the unassigned variable of highest activity, lowest index
first on ties; a heap with lazily discarded stale entries keeps that cheap.

Literals are nonzero ints in DIMACS style.  The solver is incremental in
the simple sense that clauses may be added between ``solve`` calls.
"""

from __future__ import annotations

import heapq
from typing import Dict, List, Optional, Sequence, Tuple

from loy.errors import BudgetExceeded


def _luby(i: int) -> int:
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    while True:
        if i == (1 << k) - 1:
            return 1 << (k - 1)
        i -= (1 << (k - 1)) - 1
        k = 1
        while (1 << k) - 1 < i:
            k += 1


class SatSolver:
    def __init__(self, nvars: int = 0):
        self.nvars = 0
        self.clauses: List[List[int]] = []
        self.watches: Dict[int, List[int]] = {}
        self.value: List[int] = [0]      # per var: 1 true, -1 false, 0 unassigned
        self.level: List[int] = [0]
        self.reason: List[Optional[int]] = [None]
        self.activity: List[float] = [0.0]
        self.heap: List[Tuple[float, int]] = []
        self.trail: List[int] = []
        self.trail_lim: List[int] = []
        self.qhead = 0
        self.inc = 1.0
        self.unsat = False
        self.nodes = 0
        self._pending_units: List[int] = []
        self.ensure_vars(nvars)

    def ensure_vars(self, n: int):
        while self.nvars < n:
            self.nvars += 1
            v = self.nvars
            self.value.append(0)
            self.level.append(0)
            self.reason.append(None)
            self.activity.append(0.0)
            heapq.heappush(self.heap, (0.0, v))
            self.watches[v] = []
            self.watches[-v] = []

    # -------------------------------------------------------------- clauses

    def add_clause(self, lits: Sequence[int]) -> None:
        if self.unsat:
            return
        if self.trail_lim:
            self._backtrack(0)
        seen = set()
        clause = []
        for l in lits:
            self.ensure_vars(abs(l))
            if -l in seen:
                return
            if l in seen:
                continue
            seen.add(l)
            clause.append(l)
        # drop literals false at level 0, satisfied clauses vanish
        kept = []
        for l in clause:
            val = self._lit_value(l)
            if val == 1:
                return
            if val == 0:
                kept.append(l)
        if not kept:
            self.unsat = True
            return
        if len(kept) == 1:
            self._pending_units.append(kept[0])
            return
        self._attach(kept)

    def _attach(self, clause: List[int]) -> int:
        idx = len(self.clauses)
        self.clauses.append(clause)
        self.watches[clause[0]].append(idx)
        self.watches[clause[1]].append(idx)
        return idx

    # ------------------------------------------------------------ assignment

    def _lit_value(self, l: int) -> int:
        v = self.value[abs(l)]
        return v if l > 0 else -v

    def _assign(self, l: int, reason: Optional[int]) -> None:
        v = abs(l)
        self.value[v] = 1 if l > 0 else -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(l)

    def _propagate(self) -> Optional[int]:
        value = self.value
        clauses = self.clauses
        watches = self.watches
        while self.qhead < len(self.trail):
            l = self.trail[self.qhead]
            self.qhead += 1
            falsified = -l
            ws = watches[falsified]
            i = 0
            j = 0
            n = len(ws)
            while i < n:
                ci = ws[i]
                i += 1
                c = clauses[ci]
                if c[0] == falsified:
                    c[0], c[1] = c[1], c[0]
                first = c[0]
                fv = value[abs(first)]
                if (fv if first > 0 else -fv) == 1:
                    ws[j] = ci
                    j += 1
                    continue
                found = False
                for k in range(2, len(c)):
                    lk = c[k]
                    vk = value[abs(lk)]
                    if (vk if lk > 0 else -vk) != -1:
                        c[1], c[k] = lk, c[1]
                        watches[lk].append(ci)
                        found = True
                        break
                if found:
                    continue
                ws[j] = ci
                j += 1
                if (fv if first > 0 else -fv) == -1:
                    while i < n:
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    del ws[j:]
                    self.qhead = len(self.trail)
                    return ci
                self._assign(first, ci)
            del ws[j:]
        return None

    def _backtrack(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        start = self.trail_lim[lvl]
        heap, act = self.heap, self.activity
        for l in self.trail[start:]:
            v = abs(l)
            self.value[v] = 0
            self.reason[v] = None
            heapq.heappush(heap, (-act[v], v))
        del self.trail[start:]
        del self.trail_lim[lvl:]
        self.qhead = len(self.trail)

    def _bump(self, v: int) -> None:
        self.activity[v] += self.inc
        if self.activity[v] > 1e100:
            self.activity = [a * 1e-100 for a in self.activity]
            self.inc *= 1e-100
            self.heap = [(-a, u) for u, a in enumerate(self.activity) if u]
            heapq.heapify(self.heap)
        elif self.value[v] == 0:
            heapq.heappush(self.heap, (-self.activity[v], v))

    def _analyze(self, confl: int):
        seen = set()
        learnt = [0]
        counter = 0
        cur = len(self.trail_lim)
        idx = len(self.trail) - 1
        p = None
        clause = self.clauses[confl]
        while True:
            for q in clause:
                if p is not None and q == p:
                    continue
                v = abs(q)
                if v in seen or self.level[v] == 0:
                    continue
                seen.add(v)
                self._bump(v)
                if self.level[v] == cur:
                    counter += 1
                else:
                    learnt.append(q)
            while abs(self.trail[idx]) not in seen:
                idx -= 1
            p = self.trail[idx]
            idx -= 1
            seen.discard(abs(p))
            counter -= 1
            if counter == 0:
                break
            clause = self.clauses[self.reason[abs(p)]]
        learnt[0] = -p
        if len(learnt) == 1:
            back = 0
        else:
            best = max(range(1, len(learnt)), key=lambda k: self.level[abs(learnt[k])])
            learnt[1], learnt[best] = learnt[best], learnt[1]
            back = self.level[abs(learnt[1])]
        self.inc *= 1.05
        return learnt, back

    def _decide(self) -> int:
        heap, value, act = self.heap, self.value, self.activity
        while heap:
            a, v = heap[0]
            if value[v] == 0 and -a == act[v]:
                return v
            heapq.heappop(heap)
        return 0

    # ----------------------------------------------------------------- solve

    def solve(self, budget: int = 10 ** 7) -> bool:
        """True when satisfiable; raises BudgetExceeded when out of nodes."""
        if self.unsat:
            return False
        self._backtrack(0)
        for u in self._pending_units:
            val = self._lit_value(u)
            if val == -1:
                self.unsat = True
                return False
            if val == 0:
                self._assign(u, None)
        self._pending_units = []
        if self._propagate() is not None:
            self.unsat = True
            return False
        restart_i = 1
        conflicts_left = 64 * _luby(restart_i)
        while True:
            confl = self._propagate()
            if confl is not None:
                self.nodes += 1
                if not self.trail_lim:
                    self.unsat = True
                    return False
                learnt, back = self._analyze(confl)
                self._backtrack(back)
                if len(learnt) == 1:
                    self._assign(learnt[0], None)
                else:
                    ci = self._attach(learnt)
                    self._assign(learnt[0], ci)
                conflicts_left -= 1
                if conflicts_left <= 0:
                    restart_i += 1
                    conflicts_left = 64 * _luby(restart_i)
                    self._backtrack(0)
                continue
            v = self._decide()
            if v == 0:
                return True
            self.nodes += 1
            if self.nodes > budget:
                self._backtrack(0)
                raise BudgetExceeded(budget)
            self.trail_lim.append(len(self.trail))
            self._assign(-v, None)

    def model_value(self, v: int) -> bool:
        return self.value[v] == 1
