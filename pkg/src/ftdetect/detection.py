"""Locating codes, domination counts, redundancy verification and shares.

A detector set ``S`` with detection kind ``OPEN`` (regions ``N(v)``) or
``CLOSED`` (regions ``N[v]``) is a k-redundant detection system iff every
vertex is dominated at least k+1 times and every pair of distinct vertices
has locating codes differing in at least k+1 detectors.  ``verify`` checks
that characterization; ``verify_by_deletion`` checks the definition
directly and serves as its oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

from .graph import Graph, Kind, bits, to_mask

Rational = Fraction

DELETION_BUDGET = 10**6


class UndefinedShare(ArithmeticError):
    """A vertex in the detector's region is not dominated at all."""


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class DetectorSet:
    graph: Graph
    kind: Kind
    members: int  # bitset over vertices

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind.parse(self.kind))
        if self.members >> self.graph.n:
            raise ValueError("detector outside the graph")

    @classmethod
    def of(cls, graph: Graph, kind: Kind | str, vertices) -> DetectorSet:
        vs = list(vertices)
        for v in vs:
            graph.check_vertex(v)
        return cls(graph, Kind.parse(kind), to_mask(vs))

    @property
    def vertices(self) -> list[int]:
        return bits(self.members)

    def __len__(self) -> int:
        return self.members.bit_count()

    def without(self, removed: int) -> DetectorSet:
        return DetectorSet(self.graph, self.kind, self.members & ~removed)

    def codes(self) -> list[int]:
        return [r & self.members for r in self.graph.regions(self.kind)]

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "detectors": self.vertices}


@dataclass(frozen=True)
class Verdict:
    valid: bool
    reason: str | None = None  # "under-dominated" | "indistinguishable"
    witness: tuple = ()
    detail: dict = field(default_factory=dict, compare=False)

    @property
    def status(self) -> str:
        return "valid" if self.valid else "invalid"

    def __bool__(self) -> bool:
        return self.valid

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "reason": self.reason,
            "witness": list(self.witness),
            **self.detail,
        }


def locating_code(ds: DetectorSet, v: int) -> frozenset[int]:
    return frozenset(bits(ds.graph.region(v, ds.kind) & ds.members))


def dom_count(ds: DetectorSet, v: int) -> int:
    return (ds.graph.region(v, ds.kind) & ds.members).bit_count()


def is_k_distinguishing(ds: DetectorSet, k: int):
    """Return ``(True, None)`` or ``(False, (u, v, code_u, code_v))``.

    The witness is the lexicographically least violating pair.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    codes = ds.codes()
    n = ds.graph.n
    for u in range(n):
        cu = codes[u]
        for v in range(u + 1, n):
            if (cu ^ codes[v]).bit_count() < k:
                return False, (u, v, frozenset(bits(cu)), frozenset(bits(codes[v])))
    return True, None


def verify(ds: DetectorSet, redundancy: int = 0) -> Verdict:
    """Decide whether ``ds`` is a ``redundancy``-redundant detection system."""
    if redundancy < 0:
        raise ValueError("redundancy must be non-negative")
    need = redundancy + 1
    codes = ds.codes()
    for v, code in enumerate(codes):
        if code.bit_count() < need:
            return Verdict(False, "under-dominated", (v,),
                           {"dom": code.bit_count(), "required": need})
    ok, bad = is_k_distinguishing(ds, need)
    if not ok:
        u, v, cu, cv = bad
        return Verdict(False, "indistinguishable", (u, v),
                       {"difference": len(cu ^ cv), "required": need})
    return Verdict(True)


def verify_by_deletion(ds: DetectorSet, redundancy: int = 0,
                       budget: int = DELETION_BUDGET) -> Verdict:
    """Check k-redundancy literally: every S - D with |D| <= k is a detection system."""
    if redundancy < 0:
        raise ValueError("redundancy must be non-negative")
    members = ds.vertices
    cost = sum(comb(len(members), j) for j in range(redundancy + 1))
    if cost > budget:
        raise BudgetExceeded(f"{cost} deletion sets exceed budget {budget}")
    for size in range(redundancy + 1):
        for removed in combinations(members, size):
            verdict = verify(ds.without(to_mask(removed)), 0)
            if not verdict:
                return Verdict(False, verdict.reason, verdict.witness,
                               {"deleted": list(removed)})
    return Verdict(True)


def partial_share(ds: DetectorSet, x: int, area) -> Fraction:
    """Sum of ``1/dom(u)`` over ``u`` in ``area``, which must lie in R(x)."""
    g = ds.graph
    if not ds.members >> x & 1:
        raise ValueError(f"{x} is not a detector")
    region = g.region(x, ds.kind)
    total = Fraction(0)
    for u in area:
        g.check_vertex(u)
        if not region >> u & 1:
            raise ValueError(f"{u} is not in the detection region of {x}")
        d = dom_count(ds, u)
        if d == 0:
            raise UndefinedShare(f"vertex {u} is not dominated")
        total += Fraction(1, d)
    return total


def share(ds: DetectorSet, x: int) -> Fraction:
    return partial_share(ds, x, bits(ds.graph.region(x, ds.kind)))


def average_share(ds: DetectorSet) -> Fraction:
    xs = ds.vertices
    if not xs:
        raise ValueError("empty detector set")
    return sum((share(ds, x) for x in xs), Fraction(0)) / len(xs)


def density(ds: DetectorSet) -> Fraction:
    return Fraction(len(ds), ds.graph.n)
