"""Exact minimum detection systems on finite graphs.

``brute_force_min`` enumerates subsets by increasing size and calls
``verify``; it is the oracle.  ``branch_and_bound_min`` works on the
covering formulation (one row per vertex for domination, one row per
pair of vertices with overlapping regions for separation).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import ceil

from .covering import CoverProblem, SearchStats
from .detection import BudgetExceeded, DetectorSet, verify
from .graph import Graph, Kind, bits, to_mask

BRUTE_FORCE_MAX_VERTICES = 20
BNB_MAX_VERTICES = 40

# certified per-detector share maxima on the king grid, redundancy 1
KING_MAX_SHARE = {Kind.OPEN: Fraction(7, 2), Kind.CLOSED: Fraction(7, 2)}


class Mode(enum.Enum):
    EXACT_MIN = "exact"
    FIND_ALL_MIN = "all"
    DECISION = "decision"


@dataclass(frozen=True)
class SolveRequest:
    graph: Graph
    kind: Kind
    redundancy: int = 0
    mode: Mode = Mode.EXACT_MIN
    size: int | None = None  # for DECISION

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind.parse(self.kind))
        if self.redundancy not in (0, 1, 2):
            raise ValueError("redundancy must be 0, 1 or 2")
        if self.mode is Mode.DECISION and self.size is None:
            raise ValueError("decision mode needs a size")


@dataclass
class Solution:
    size: int | None  # None when infeasible
    witness: tuple[int, ...] = ()
    all_witnesses: list | None = None
    nodes: int = 0

    @property
    def feasible(self) -> bool:
        return self.size is not None


def find_twins(graph: Graph, kind: Kind):
    """First pair of distinct vertices with identical detection regions, or None."""
    seen = {}
    for v, r in enumerate(graph.regions(kind)):
        if r in seen:
            return seen[r], v
        seen[r] = v
    return None


def covering_problem(graph: Graph, kind: Kind, redundancy: int) -> CoverProblem:
    need = redundancy + 1
    regions = graph.regions(kind)
    rows, bounds, labels = [], [], []
    for v, r in enumerate(regions):
        rows.append(dict.fromkeys(bits(r), 1))
        bounds.append(need)
        labels.append(("dom", v))
    ndom = len(rows)
    for u in range(graph.n):
        for v in range(u + 1, graph.n):
            # disjoint regions are separated by domination alone
            if regions[u] & regions[v]:
                rows.append(dict.fromkeys(bits(regions[u] ^ regions[v]), 1))
                bounds.append(need)
                labels.append(("pair", u, v))
    return CoverProblem(graph.n, rows, bounds, labels, sum_rows=range(ndom))


def brute_force_min(req: SolveRequest) -> Solution:
    g = req.graph
    if g.n > BRUTE_FORCE_MAX_VERTICES:
        raise BudgetExceeded(f"brute force limited to {BRUTE_FORCE_MAX_VERTICES} vertices")
    sizes = range(g.n + 1)
    if req.mode is Mode.DECISION:
        sizes = range(min(req.size, g.n) + 1)
    for size in sizes:
        hits = []
        for combo in combinations(range(g.n), size):
            ds = DetectorSet(g, req.kind, to_mask(combo))
            if verify(ds, req.redundancy):
                if req.mode is not Mode.FIND_ALL_MIN:
                    return Solution(size, combo)
                hits.append(combo)
        if hits:
            return Solution(size, hits[0], hits)
    return Solution(None)


def density_floor(graph: Graph, kind: Kind, redundancy: int) -> int:
    """Cardinality floor from the per-detector share maximum (faithful king tori)."""
    if redundancy == 1 and graph.is_faithful_torus:
        return ceil(graph.n / KING_MAX_SHARE[kind])
    return 0


def branch_and_bound_min(req: SolveRequest, budget: int = BNB_MAX_VERTICES) -> Solution:
    g = req.graph
    if g.n > budget:
        raise BudgetExceeded(f"branch and bound limited to {budget} vertices")
    if find_twins(g, req.kind) is not None:
        return Solution(None)
    prob = covering_problem(g, req.kind, req.redundancy)
    stats = SearchStats()
    if prob.infeasible_rows():
        return Solution(None)
    # translations act transitively on a torus, so some optimum uses vertex 0
    force = (0,) if g.grid is not None and req.mode is not Mode.FIND_ALL_MIN else ()
    floor = density_floor(g, req.kind, req.redundancy)

    if req.mode is Mode.DECISION:
        sol = prob.solve(req.size, force=force, stats=stats)
        if sol is None:
            return Solution(None, nodes=stats.nodes)
        return Solution(len(sol), sol, nodes=stats.nodes)

    res = prob.minimum(floor=floor, force=force, stats=stats)
    if res is None:
        return Solution(None, nodes=stats.nodes)
    size, witness = res
    if req.mode is Mode.FIND_ALL_MIN:
        every = [s for s in prob.solve(size, find_all=True, stats=stats) if len(s) == size]
        return Solution(size, every[0], sorted(every), nodes=stats.nodes)
    return Solution(size, witness, nodes=stats.nodes)


def solve(req: SolveRequest, method: str = "bnb") -> Solution:
    if method == "brute":
        return brute_force_min(req)
    return branch_and_bound_min(req)


def _at_least(lits: list[int], k: int) -> list[list[int]]:
    # at least k of n true <=> every (n-k+1)-subset has a true literal
    if k <= 0:
        return []
    if k > len(lits):
        return [[]]
    return [list(c) for c in combinations(lits, len(lits) - k + 1)]


def _at_most(lits: list[int], k: int, next_var: int):
    """Sequential counter encoding of sum(lits) <= k; returns (clauses, next_var)."""
    n = len(lits)
    if k >= n:
        return [], next_var
    if k == 0:
        return [[-x] for x in lits], next_var
    s = [[next_var + i * k + j for j in range(k)] for i in range(n - 1)]
    next_var += (n - 1) * k
    cl = [[-lits[0], s[0][0]]]
    cl += [[-s[0][j]] for j in range(1, k)]
    for i in range(1, n - 1):
        cl.append([-lits[i], s[i][0]])
        cl.append([-s[i - 1][0], s[i][0]])
        for j in range(1, k):
            cl.append([-lits[i], -s[i - 1][j - 1], s[i][j]])
            cl.append([-s[i - 1][j], s[i][j]])
        cl.append([-lits[i], -s[i - 1][k - 1]])
    cl.append([-lits[n - 1], -s[n - 2][k - 1]])
    return cl, next_var


def cnf_clauses(graph: Graph, kind: Kind, redundancy: int, size: int | None = None):
    """Clauses over variables 1..n (vertex v is variable v+1), plus counter auxiliaries."""
    kind = Kind.parse(kind)
    need = redundancy + 1
    regions = graph.regions(kind)
    clauses = []
    for r in regions:
        clauses += _at_least([v + 1 for v in bits(r)], need)
    for u in range(graph.n):
        for v in range(u + 1, graph.n):
            if regions[u] & regions[v]:
                clauses += _at_least([w + 1 for w in bits(regions[u] ^ regions[v])], need)
    nvars = graph.n
    if size is not None:
        more, top = _at_most(list(range(1, graph.n + 1)), size, graph.n + 1)
        clauses += more
        nvars = top - 1
    return nvars, clauses


def to_dimacs(graph: Graph, kind: Kind, redundancy: int, size: int | None = None) -> str:
    nvars, clauses = cnf_clauses(graph, kind, redundancy, size)
    kind = Kind.parse(kind)
    lines = [
        f"c detection system kind={kind.value} redundancy={redundancy}"
        + (f" size<={size}" if size is not None else ""),
        f"c variables 1..{graph.n} are vertices 0..{graph.n - 1}",
        f"p cnf {nvars} {len(clauses)}",
    ]
    lines += [" ".join(map(str, c + [0])) for c in clauses]
    return "\n".join(lines) + "\n"
