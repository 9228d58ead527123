"""Binary covering programs: minimise |x| subject to ``sum_i w[c,i] x_i >= b[c]``.

Both the finite-graph solver and the periodic pattern search reduce to
this form.  Domination of a vertex and separation of a pair of vertices
are each one row with non-negative integer weights; on a periodic quotient
a residue can appear several times in the same row, hence the weights.

The search branches on the unsatisfied row with the fewest free variables:
branch ``j`` takes the ``j``-th free variable of the row and excludes the
ones before it, so the branches partition the solution space.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class SearchStats:
    nodes: int = 0


class CoverProblem:
    def __init__(self, nvars: int, rows, bounds, labels=None, sum_rows=None):
        """``rows`` is a list of ``{var: weight}`` dicts, one per constraint.

        ``sum_rows`` optionally names a subset of rows used for the
        aggregate lower bound (typically the domination rows, which every
        variable hits a bounded number of times).
        """
        self.nvars = nvars
        ncons = len(rows)
        self.W = np.zeros((nvars, ncons), dtype=np.int32)
        for c, row in enumerate(rows):
            for v, w in row.items():
                if w < 0:
                    raise ValueError("weights must be non-negative")
                self.W[v, c] += w
        self.S = (self.W > 0).astype(np.int32)
        self.b = np.asarray(bounds, dtype=np.int32)
        self.labels = list(labels) if labels is not None else list(range(ncons))
        self.maxw = np.maximum(self.W.max(axis=0, initial=0), 1)
        idx = np.arange(ncons) if sum_rows is None else np.asarray(sum_rows, dtype=np.intp)
        self.sum_rows = idx
        self.sum_cap = max(int(self.W[:, idx].sum(axis=1).max(initial=0)), 1)

    def infeasible_rows(self) -> list[int]:
        """Rows that cannot be met even with every variable set."""
        full = self.W.sum(axis=0)
        return [int(c) for c in np.flatnonzero(full < self.b)]

    def evaluate(self, chosen) -> np.ndarray:
        x = np.zeros(self.nvars, dtype=np.int32)
        x[list(chosen)] = 1
        return x @ self.W

    def violations(self, chosen) -> list[int]:
        return [int(c) for c in np.flatnonzero(self.evaluate(chosen) < self.b)]

    def lower_bound(self, have) -> int:
        deficit = np.maximum(self.b - have, 0)
        if not deficit.any():
            return 0
        lb = int((-(-deficit // self.maxw)).max())
        agg = int(deficit[self.sum_rows].sum())
        return max(lb, -(-agg // self.sum_cap))

    def solve(self, limit: int, *, find_all: bool = False, force=(), exclude=(), stats=None):
        """Solutions with at most ``limit`` variables.

        Returns the first one found (a sorted tuple) or ``None``; with
        ``find_all`` returns every minimal-by-branching solution of size
        ``<= limit`` as a list, in discovery order.
        """
        stats = stats if stats is not None else SearchStats()
        W, S, b = self.W, self.S, self.b
        found = []
        free = np.ones(self.nvars, dtype=bool)
        have = np.zeros(len(b), dtype=np.int32)
        nfree = S.sum(axis=0)
        chosen = []
        for v in exclude:
            free[v] = False
            nfree = nfree - S[v]
        for v in force:
            free[v] = False
            have = have + W[v]
            nfree = nfree - S[v]
            chosen.append(int(v))
        pot = have + (free.astype(np.int32) @ W)

        def rec(chosen, free, have, pot, nfree):
            stats.nodes += 1
            if (pot < b).any():
                return False
            unsat = np.flatnonzero(have < b)
            if unsat.size == 0:
                found.append(tuple(sorted(chosen)))
                return not find_all
            if len(chosen) + self.lower_bound(have) > limit:
                return False
            c = unsat[np.argmin(nfree[unsat])]
            cand = np.flatnonzero(free & (S[:, c] > 0))
            free = free.copy()
            for v in cand:
                v = int(v)
                free[v] = False
                if rec(chosen + [v], free.copy(), have + W[v], pot, nfree - S[v]):
                    return True
                pot = pot - W[v]
                nfree = nfree - S[v]
                if pot[c] < b[c]:
                    break
            return False

        if len(chosen) <= limit:
            rec(chosen, free, have, pot, nfree)
        if find_all:
            return found
        return found[0] if found else None

    def root_branches(self, force=()):
        """Split the search below ``force`` into disjoint ``(force, exclude)`` subproblems."""
        have = self.evaluate(force) if force else np.zeros(len(self.b), np.int32)
        unsat = np.flatnonzero(have < self.b)
        if unsat.size == 0:
            return [(tuple(force), ())]
        free = np.ones(self.nvars, dtype=bool)
        free[list(force)] = False
        nfree = (self.S * free[:, None]).sum(axis=0)
        c = unsat[np.argmin(nfree[unsat])]
        cand = [int(v) for v in np.flatnonzero(free & (self.S[:, c] > 0))]
        return [(tuple(force) + (v,), tuple(cand[:j])) for j, v in enumerate(cand)]

    def minimum(self, floor: int = 0, ceiling: int | None = None, force=(), stats=None):
        """Smallest feasible size and one witness, or ``None`` if infeasible."""
        if self.infeasible_rows():
            return None
        ceiling = self.nvars if ceiling is None else ceiling
        start = max(floor, len(force), self.lower_bound(np.zeros(len(self.b), np.int32)))
        for size in range(start, ceiling + 1):
            sol = self.solve(size, force=force, stats=stats)
            if sol is not None:
                return len(sol), sol
        return None
