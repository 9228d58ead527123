"""Periodic detector patterns on the infinite king's grid.

A pattern is a fundamental ``period_rows x period_cols`` rectangle with a
set of detector residues; cell ``(r, c)`` of the plane is a detector iff
``(r mod period_rows, c mod period_cols)`` is.  Its density in the plane is
its density in the rectangle.

Infinite-grid verification is finite because of locality: detection
regions have radius 1, so two cells at Chebyshev distance >= 3 have
disjoint regions, and their codes then differ in ``dom(u) + dom(v)``
detectors.  Once every cell is (k+1)-dominated such pairs are
automatically (k+1)-distinguished, leaving only pairs at distance <= 2,
and by periodicity one endpoint can range over the rectangle.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from pathlib import Path

from .covering import CoverProblem
from .detection import BudgetExceeded, DetectorSet, Verdict
from .graph import KING_STEPS, Kind, king_torus, to_mask

SEARCH_BUDGET = 36  # cells in the fundamental rectangle


class NonFaithfulLift(ValueError):
    pass


class PatternFormatError(ValueError):
    pass


def region_offsets(kind: Kind) -> list[tuple[int, int]]:
    if Kind.parse(kind) is Kind.CLOSED:
        return [(0, 0)] + KING_STEPS
    return list(KING_STEPS)


# pairs at Chebyshev distance 1..2, one orientation each (lexicographically positive)
PAIR_DELTAS = [(dr, dc) for dr in range(0, 3) for dc in range(-2, 3)
               if (dr, dc) > (0, 0)]


def _cheb(a, b) -> int:
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


@dataclass(frozen=True)
class PeriodicPattern:
    period_rows: int
    period_cols: int
    detectors: frozenset

    def __post_init__(self):
        if self.period_rows < 1 or self.period_cols < 1:
            raise ValueError("periods must be positive")
        cells = frozenset((int(r), int(c)) for r, c in self.detectors)
        for r, c in cells:
            if not (0 <= r < self.period_rows and 0 <= c < self.period_cols):
                raise ValueError(f"residue ({r},{c}) outside the fundamental rectangle")
        object.__setattr__(self, "detectors", cells)

    @classmethod
    def from_rule(cls, rows: int, cols: int, rule) -> PeriodicPattern:
        return cls(rows, cols, frozenset((r, c) for r in range(rows) for c in range(cols)
                                         if rule(r, c)))

    @property
    def area(self) -> int:
        return self.period_rows * self.period_cols

    def is_detector(self, r: int, c: int) -> bool:
        return (r % self.period_rows, c % self.period_cols) in self.detectors

    def dom(self, r: int, c: int, kind: Kind) -> int:
        return sum(self.is_detector(r + dr, c + dc) for dr, dc in region_offsets(kind))

    def code(self, r: int, c: int, kind: Kind) -> frozenset:
        return frozenset((r + dr, c + dc) for dr, dc in region_offsets(kind)
                         if self.is_detector(r + dr, c + dc))

    def translate(self, dr: int, dc: int) -> PeriodicPattern:
        return PeriodicPattern(self.period_rows, self.period_cols,
                               frozenset(((r + dr) % self.period_rows, (c + dc) % self.period_cols)
                                         for r, c in self.detectors))

    def tiled(self, rows: int, cols: int) -> PeriodicPattern:
        """The same pattern described on a larger rectangle (multiples of the periods)."""
        if rows % self.period_rows or cols % self.period_cols:
            raise ValueError("new periods must be multiples of the old ones")
        return PeriodicPattern.from_rule(rows, cols, self.is_detector)

    def to_ascii(self) -> str:
        return "\n".join("".join("X" if (r, c) in self.detectors else "."
                                 for c in range(self.period_cols))
                         for r in range(self.period_rows)) + "\n"

    @classmethod
    def from_ascii(cls, text: str) -> PeriodicPattern:
        rows = [ln.strip() for ln in text.splitlines()
                if ln.strip() and not ln.lstrip().startswith("#")]
        if not rows:
            raise PatternFormatError("empty pattern")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise PatternFormatError("pattern rows have different lengths")
        cells = set()
        for r, line in enumerate(rows):
            for c, ch in enumerate(line):
                if ch in "Xx#1":
                    cells.add((r, c))
                elif ch not in ".0-_":
                    raise PatternFormatError(f"bad character {ch!r} in pattern")
        return cls(len(rows), width, frozenset(cells))

    def to_json(self) -> dict:
        return {"period": [self.period_rows, self.period_cols],
                "detectors": sorted(list(c) for c in self.detectors),
                "density": str(density(self))}


def load_pattern(path: str | Path) -> PeriodicPattern:
    return PeriodicPattern.from_ascii(Path(path).read_text())


def density(p: PeriodicPattern) -> Fraction:
    return Fraction(len(p.detectors), p.area)


def verify_infinite(p: PeriodicPattern, kind: Kind, redundancy: int = 1) -> Verdict:
    """Decide whether the plane-filling pattern is a k-redundant detection system on K."""
    kind = Kind.parse(kind)
    if redundancy < 0:
        raise ValueError("redundancy must be non-negative")
    need = redundancy + 1
    reps = [(r, c) for r in range(p.period_rows) for c in range(p.period_cols)]
    for v in reps:
        d = p.dom(*v, kind)
        if d < need:
            return Verdict(False, "under-dominated", (v,), {"dom": d, "required": need})
    # locality: the two regions can only meet when the centres are within 2
    offsets = region_offsets(kind)
    assert max(_cheb(a, b) for a in offsets for b in offsets) <= max(map(max, PAIR_DELTAS))
    for v in reps:
        for dr, dc in PAIR_DELTAS:
            w = (v[0] + dr, v[1] + dc)
            diff = len(p.code(*v, kind) ^ p.code(*w, kind))
            if diff < need:
                return Verdict(False, "indistinguishable", (v, w),
                               {"difference": diff, "required": need})
    return Verdict(True)


def lift_to_torus(p: PeriodicPattern, copies_r: int, copies_c: int,
                  kind: Kind = Kind.OPEN) -> DetectorSet:
    rows, cols = copies_r * p.period_rows, copies_c * p.period_cols
    if rows < 5 or cols < 5:
        raise NonFaithfulLift(f"{rows}x{cols} torus does not reproduce the grid locally")
    g = king_torus(rows, cols)
    members = to_mask(r * cols + c for r in range(rows) for c in range(cols)
                      if p.is_detector(r, c))
    return DetectorSet(g, Kind.parse(kind), members)


def faithful_copies(p: PeriodicPattern) -> tuple[int, int]:
    """Fewest copies in each direction giving a torus of side >= 5."""
    return -(-5 // p.period_rows), -(-5 // p.period_cols)


def _symmetries(rows: int, cols: int):
    """Cell maps of the rectangle torus induced by the dihedral group, when defined."""
    ops = [lambda r, c: (r, c), lambda r, c: (-r, c),
           lambda r, c: (r, -c), lambda r, c: (-r, -c)]
    if rows == cols:
        ops += [lambda r, c: (c, r), lambda r, c: (-c, r),
                lambda r, c: (c, -r), lambda r, c: (-c, -r)]
    return ops


def canonical_form(p: PeriodicPattern, rows: int | None = None, cols: int | None = None):
    """Invariant of ``p`` under translations and the symmetries of the grid.

    Patterns are compared on a common square rectangle; two patterns are
    isomorphic iff their canonical forms on the same rectangle agree.
    """
    side = rows or lcm(p.period_rows, p.period_cols)
    q = p.tiled(side, cols or side) if (rows or cols) else p.tiled(side, side)
    R, C = q.period_rows, q.period_cols
    best = None
    for op in _symmetries(R, C):
        cells = [op(r, c) for r, c in q.detectors]
        cells = [(r % R, c % C) for r, c in cells]
        for tr in range(R):
            for tc in range(C):
                key = tuple(sorted(((r + tr) % R, (c + tc) % C) for r, c in cells))
                if best is None or key < best:
                    best = key
    return (R, C, best)


def isomorphic(p: PeriodicPattern, q: PeriodicPattern) -> bool:
    side = lcm(p.period_rows, p.period_cols, q.period_rows, q.period_cols)
    return canonical_form(p, side, side) == canonical_form(q, side, side)


def quotient_problem(rows: int, cols: int, kind: Kind, redundancy: int) -> CoverProblem:
    """Covering program over the residues of a ``rows x cols`` period."""
    kind = Kind.parse(kind)
    need = redundancy + 1
    offsets = region_offsets(kind)

    def var(r, c):
        return (r % rows) * cols + (c % cols)

    def weights(cells):
        row = {}
        for r, c in cells:
            row[var(r, c)] = row.get(var(r, c), 0) + 1
        return row

    reps = [(r, c) for r in range(rows) for c in range(cols)]
    out, bounds, labels = [], [], []
    for r, c in reps:
        out.append(weights((r + dr, c + dc) for dr, dc in offsets))
        bounds.append(need)
        labels.append(("dom", (r, c)))
    for r, c in reps:
        for dr, dc in PAIR_DELTAS:
            a = {(r + x, c + y) for x, y in offsets}
            b = {(r + dr + x, c + dc + y) for x, y in offsets}
            out.append(weights(a ^ b))
            bounds.append(need)
            labels.append(("pair", (r, c), (r + dr, c + dc)))
    return CoverProblem(rows * cols, out, bounds, labels, sum_rows=range(len(reps)))


def _pattern(rows, cols, sol) -> PeriodicPattern:
    return PeriodicPattern(rows, cols, frozenset(divmod(v, cols) for v in sol))


def _solve_branch(args):
    rows, cols, kind, redundancy, size, force, exclude = args
    prob = quotient_problem(rows, cols, kind, redundancy)
    return prob.solve(size, find_all=True, force=force, exclude=exclude)


def minimum_pattern(rows: int, cols: int, kind: Kind, redundancy: int = 1,
                    budget: int = SEARCH_BUDGET):
    """One minimum-cardinality valid pattern for this period, or ``None``."""
    if rows * cols > budget:
        raise BudgetExceeded(f"period area {rows * cols} exceeds budget {budget}")
    prob = quotient_problem(rows, cols, kind, redundancy)
    # any valid pattern can be translated to put a detector at residue (0, 0)
    res = prob.minimum(force=(0,))
    if res is None:
        return None
    return _pattern(rows, cols, res[1])


def pattern_search(period_rows: int, period_cols: int, kind: Kind, redundancy: int = 1,
                   max_detectors: int | None = None, budget: int = SEARCH_BUDGET,
                   workers: int = 1) -> list[PeriodicPattern]:
    """All minimum-cardinality valid patterns on this period, sorted.

    Empty when no valid pattern has at most ``max_detectors`` detectors.
    """
    kind = Kind.parse(kind)
    area = period_rows * period_cols
    if area > budget:
        raise BudgetExceeded(f"period area {area} exceeds budget {budget}")
    best = minimum_pattern(period_rows, period_cols, kind, redundancy, budget)
    if best is None:
        return []
    size = len(best.detectors)
    if max_detectors is not None and size > max_detectors:
        return []
    prob = quotient_problem(period_rows, period_cols, kind, redundancy)
    jobs = [(period_rows, period_cols, kind, redundancy, size, f, e)
            for f, e in prob.root_branches()]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_solve_branch, jobs))
    else:
        parts = [_solve_branch(j) for j in jobs]
    sols = sorted({s for part in parts for s in part if len(s) == size})
    return [_pattern(period_rows, period_cols, s) for s in sols]


PATTERN_A = PeriodicPattern.from_rule(3, 3, lambda r, c: (r + c) % 3 == 0)
PATTERN_B = PeriodicPattern.from_rule(6, 6, lambda r, c: (r + c) % 6 in (0, 2))
# identifying-code-only patterns of density 1/3 (the two classes on a 6x6 period)
PATTERN_C = PeriodicPattern.from_ascii("""
XX....
X...X.
..X..X
...XX.
.X.X..
..X..X
""")
PATTERN_C_ALT = PeriodicPattern.from_ascii("""
XX....
..XX..
.X...X
...XX.
X....X
..X.X.
""")


def builtin_patterns() -> dict[str, PeriodicPattern]:
    return {
        "pattern-a": PATTERN_A,
        "pattern-b": PATTERN_B,
        "pattern-c": PATTERN_C,
        "pattern-c-alt": PATTERN_C_ALT,
    }
