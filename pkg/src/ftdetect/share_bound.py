"""Share bounds for 1-redundant detection systems on the king's grid.

A detector ``x`` only ever shares with cells of its detection region, and
those cells all sit in the 3x3 block around ``x``.  Each of those cells
has its whole region inside the 5x5 window around ``x``, so once the 25
cells of the window are fixed, the domination counts and pairwise codes of
the 3x3 core are exact.  Enumerating every window (2^24 of them, the
centre being a detector) and keeping the ones whose core is 2-dominated
and 2-distinguished gives every configuration a detector can be in; the
maximum share over them bounds the share of any detector in any
1-redundant system.  Ring cells are deliberately left unconstrained, as
their regions leave the window.

Windows are 25-bit ints: cell ``(r, c)`` is bit ``24 - (5r + c)``, so the
top-left cell is the most significant bit and the 24 non-centre cells read
row-major form the enumeration counter.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .graph import KING_STEPS, Kind

SIDE = 5
CENTER = (2, 2)
CORE = [(r, c) for r in range(1, 4) for c in range(1, 4)]
SHARE_SCALE = 2520  # lcm(1..9): shares become integers over this denominator
CHUNK_BITS = 6  # the enumeration is split on the top 6 counter bits
DEFAULT_THRESHOLD = Fraction(10, 3)
AVERAGING_CLASS_MAX = Fraction(13, 4)

# the centre's 8 neighbours, in a fixed order used by neighbour masks
NEIGHBOR_OFFSETS = list(KING_STEPS)


def bit(r: int, c: int) -> int:
    return 1 << (24 - (SIDE * r + c))


CENTER_BIT = bit(*CENTER)


def region_mask(r: int, c: int, kind: Kind) -> int:
    m = 0
    for dr, dc in KING_STEPS:
        m |= bit(r + dr, c + dc)
    if kind is Kind.CLOSED:
        m |= bit(r, c)
    return m


def counter_to_mask(k):
    """Map the 24-bit counter (scalar or array) to a 25-bit window with the centre set."""
    return ((k >> 12) << 13) | CENTER_BIT | (k & 0xFFF)


def mask_to_counter(mask: int) -> int:
    return ((mask >> 13) << 12) | (mask & 0xFFF)


# --- lemma bound -----------------------------------------------------------

def lemma_bound(a: int, d: int, k: int) -> Fraction:
    """Worst-case partial share over ``a`` cells that all see the same ``d`` detectors.

    With a ``k``-distinguishing set, either some cell is dominated by exactly
    those ``d`` (and then the others by at least ``d + k``) or all are
    dominated at least ``d + 1`` times.
    """
    if a < 1 or d < 1 or k < 0:
        raise ValueError("need a >= 1, d >= 1, k >= 0")
    if a * d * (k - 1) >= (d + 1) * k:
        return Fraction(a, d + 1)
    return Fraction(1, d) + Fraction(a - 1, d + k)


# --- patches ---------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Patch:
    mask: int

    def __post_init__(self):
        if not self.mask & CENTER_BIT:
            raise ValueError("patch centre must be a detector")
        if self.mask >> 25:
            raise ValueError("patch mask wider than 25 bits")

    def is_detector(self, r: int, c: int) -> bool:
        return bool(self.mask & bit(r, c))

    def cells(self) -> list[list[bool]]:
        return [[self.is_detector(r, c) for c in range(SIDE)] for r in range(SIDE)]

    @classmethod
    def from_ascii(cls, text: str) -> Patch:
        rows = [ln.strip() for ln in text.strip().splitlines()]
        if len(rows) != SIDE or any(len(r) != SIDE for r in rows):
            raise ValueError("patch must be 5 rows of 5 cells")
        m = 0
        for r, line in enumerate(rows):
            for c, ch in enumerate(line):
                if ch in "Xx#":
                    m |= bit(r, c)
        return cls(m)

    def to_ascii(self) -> str:
        return "\n".join("".join("X" if self.is_detector(r, c) else "."
                                 for c in range(SIDE)) for r in range(SIDE))

    def dom(self, r: int, c: int, kind: Kind) -> int:
        return (self.mask & region_mask(r, c, kind)).bit_count()

    def share(self, kind: Kind) -> Fraction:
        total = Fraction(0)
        for dr, dc in region_offsets(kind):
            total += Fraction(1, self.dom(2 + dr, 2 + dc, kind))
        return total

    def center_neighbors(self) -> list[tuple[int, int]]:
        """Offsets of the detectors adjacent to the centre."""
        return [(dr, dc) for dr, dc in NEIGHBOR_OFFSETS if self.is_detector(2 + dr, 2 + dc)]

    def neighbor_offsets_of(self, r: int, c: int) -> list[tuple[int, int]]:
        """Offsets of the detectors adjacent to core cell ``(r, c)``."""
        return [(dr, dc) for dr, dc in NEIGHBOR_OFFSETS if self.is_detector(r + dr, c + dc)]

    def transformed(self, op) -> Patch:
        m = 0
        for r in range(SIDE):
            for c in range(SIDE):
                if self.is_detector(r, c):
                    rr, cc = op(r - 2, c - 2)
                    m |= bit(rr + 2, cc + 2)
        return Patch(m)

    def orbit(self) -> list[Patch]:
        return [self.transformed(op) for op in DIHEDRAL]

    def canonical(self) -> Patch:
        return min(self.orbit())


DIHEDRAL = [
    lambda r, c: (r, c), lambda r, c: (c, -r), lambda r, c: (-r, -c), lambda r, c: (-c, r),
    lambda r, c: (r, -c), lambda r, c: (-r, c), lambda r, c: (c, r), lambda r, c: (-c, -r),
]


def region_offsets(kind: Kind) -> list[tuple[int, int]]:
    return ([(0, 0)] if Kind.parse(kind) is Kind.CLOSED else []) + list(KING_STEPS)


def patch_is_feasible(p: Patch, kind: Kind) -> bool:
    """Scalar reference for local feasibility: core 2-dominated and pairwise 2-distinguished."""
    kind = Kind.parse(kind)
    if kind is Kind.OPEN and not p.center_neighbors():
        return False
    codes = [p.mask & region_mask(r, c, kind) for r, c in CORE]
    if any(code.bit_count() < 2 for code in codes):
        return False
    return all((codes[i] ^ codes[j]).bit_count() >= 2
               for i in range(len(codes)) for j in range(i + 1, len(codes)))


# --- constraints -----------------------------------------------------------

@dataclass(frozen=True)
class CoreConstraint:
    """Fixed cells of the window: ``require`` must be detectors, ``forbid`` must not."""

    require: int = 0
    forbid: int = 0

    def __post_init__(self):
        if self.require & self.forbid:
            raise ValueError("a cell cannot be both required and forbidden")
        if self.forbid & CENTER_BIT:
            raise ValueError("the centre is always a detector")

    @classmethod
    def parse(cls, spec: str) -> CoreConstraint:
        """Parse ``'?X?/?X?/???'`` (3x3 core) or a 5x5 variant, rows separated by '/'.

        ``X`` requires a detector, ``-`` a non-detector, ``?`` (or ``.``) is free.
        """
        rows = [r.strip() for r in spec.replace("\n", "/").split("/") if r.strip()]
        size = len(rows)
        if size not in (3, SIDE) or any(len(r) != size for r in rows):
            raise ValueError(f"constraint must be 3x3 or 5x5, got {spec!r}")
        off = (SIDE - size) // 2
        req = forb = 0
        for r, line in enumerate(rows):
            for c, ch in enumerate(line):
                b = bit(r + off, c + off)
                if ch in "Xx#":
                    req |= b
                elif ch == "-":
                    forb |= b
                elif ch not in "?.":
                    raise ValueError(f"bad constraint character {ch!r}")
        return cls(req, forb)

    @classmethod
    def neighbors(cls, offsets) -> CoreConstraint:
        m = 0
        for dr, dc in offsets:
            m |= bit(2 + dr, 2 + dc)
        return cls(m)

    def admits(self, mask: int) -> bool:
        return (mask & self.require) == self.require and not mask & self.forbid

    def __str__(self) -> str:
        rows = []
        for r in range(1, 4):
            row = ""
            for c in range(1, 4):
                b = bit(r, c)
                row += "X" if self.require & b else "-" if self.forbid & b else "?"
            rows.append(row)
        return "/".join(rows)


# --- vectorised enumeration --------------------------------------------------

def _tables(kind: Kind):
    core = np.array([region_mask(r, c, kind) for r, c in CORE], dtype=np.uint32)
    pairs = np.array([core[i] ^ core[j] for i in range(len(CORE))
                      for j in range(i + 1, len(CORE))], dtype=np.uint32)
    in_share = [CORE.index((2 + dr, 2 + dc)) for dr, dc in region_offsets(kind)]
    return core, pairs, in_share


NEIGHBOR_BITS = np.array([bit(2 + dr, 2 + dc) for dr, dc in NEIGHBOR_OFFSETS], dtype=np.uint32)


def _neighbor_index(masks: np.ndarray) -> np.ndarray:
    idx = np.zeros(masks.shape, dtype=np.int32)
    for j, b in enumerate(NEIGHBOR_BITS):
        idx |= ((masks & b) != 0).astype(np.int32) << j
    return idx


def neighbor_index(offsets) -> int:
    return sum(1 << NEIGHBOR_OFFSETS.index(o) for o in offsets)


def enumerate_chunk(kind: Kind, chunk: int, constraint: CoreConstraint | None = None):
    """Feasible windows whose counter has top bits ``chunk``; returns (masks, share numerators)."""
    kind = Kind.parse(kind)
    core, pairs, in_share = _tables(kind)
    low = 24 - CHUNK_BITS
    k = (np.uint32(chunk) << np.uint32(low)) | np.arange(1 << low, dtype=np.uint32)
    masks = counter_to_mask(k).astype(np.uint32)
    if constraint is not None:
        keep = ((masks & np.uint32(constraint.require)) == constraint.require) & \
               ((masks & np.uint32(constraint.forbid)) == 0)
        masks = masks[keep]
    doms = [np.bitwise_count(masks & m) for m in core]
    ok = np.ones(masks.shape, dtype=bool)
    for d in doms:
        ok &= d >= 2
    for m in pairs:
        ok &= np.bitwise_count(masks & m) >= 2
    if kind is Kind.OPEN:
        ok &= (masks & np.uint32(NEIGHBOR_BITS.sum(dtype=np.uint32))) != 0
    masks = masks[ok]
    num = np.zeros(masks.shape, dtype=np.int64)
    for i in in_share:
        num += SHARE_SCALE // doms[i][ok].astype(np.int64)
    return masks, num


@dataclass
class Summary:
    """Aggregate of one full enumeration."""

    kind: Kind
    constraint: CoreConstraint | None
    feasible: int = 0
    histogram: Counter = field(default_factory=Counter)  # share numerator -> count
    mask_max: list = field(default_factory=lambda: [-1] * 256)  # per centre-neighbour mask
    top: dict = field(default_factory=dict)  # share numerator -> sorted window masks
    keep_above: int = 0

    @property
    def max_share(self) -> Fraction:
        return Fraction(max(self.histogram), SHARE_SCALE)

    def shares_above(self, threshold: Fraction) -> dict[Fraction, int]:
        return {Fraction(s, SHARE_SCALE): n for s, n in sorted(self.histogram.items())
                if Fraction(s, SHARE_SCALE) > threshold}

    def class_max(self, offsets) -> Fraction | None:
        """Max share over feasible windows whose centre has detectors at least at ``offsets``."""
        want = neighbor_index(offsets)
        vals = [v for m, v in enumerate(self.mask_max) if m & want == want and v >= 0]
        return Fraction(max(vals), SHARE_SCALE) if vals else None


def _chunk_summary(args):
    kind, chunk, constraint, keep_above = args
    masks, num = enumerate_chunk(kind, chunk, constraint)
    hist = Counter(dict(zip(*[a.tolist() for a in np.unique(num, return_counts=True)])))
    nb = _neighbor_index(masks)
    mask_max = np.full(256, -1, dtype=np.int64)
    np.maximum.at(mask_max, nb, num)
    sel = num > keep_above
    top = {}
    for m, s in zip(masks[sel].tolist(), num[sel].tolist()):
        top.setdefault(s, []).append(m)
    return len(masks), hist, mask_max.tolist(), top


def summarize(kind: Kind, constraint: CoreConstraint | None = None,
              keep_above: Fraction = DEFAULT_THRESHOLD, workers: int = 1) -> Summary:
    kind = Kind.parse(kind)
    return _summarize(kind, constraint, Fraction(keep_above), workers)


@lru_cache(maxsize=16)
def _summarize(kind, constraint, keep_above, workers):
    floor = math.floor(keep_above * SHARE_SCALE)
    jobs = [(kind, ch, constraint, floor) for ch in range(1 << CHUNK_BITS)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_chunk_summary, jobs))
    else:
        parts = [_chunk_summary(j) for j in jobs]
    out = Summary(kind, constraint, keep_above=floor)
    for n, hist, mmax, top in parts:  # chunk order, so the merge is deterministic
        out.feasible += n
        out.histogram.update(hist)
        out.mask_max = [max(a, b) for a, b in zip(out.mask_max, mmax)]
        for s, ms in top.items():
            out.top.setdefault(s, []).extend(ms)
    for s in out.top:
        out.top[s].sort()
    return out


def enumerate_patches(kind: Kind, constraint: CoreConstraint | None = None):
    """Yield ``(Patch, share)`` for every locally feasible window, in counter order."""
    kind = Kind.parse(kind)
    for chunk in range(1 << CHUNK_BITS):
        masks, num = enumerate_chunk(kind, chunk, constraint)
        for m, s in zip(masks.tolist(), num.tolist()):
            yield Patch(m), Fraction(s, SHARE_SCALE)


# --- certificates ----------------------------------------------------------

@dataclass
class Certificate:
    kind: Kind
    max_share: Fraction
    density_bound: Fraction
    feasible: int
    argmax_count: int
    argmax_classes: list  # canonical Patch per dihedral class
    constraint: CoreConstraint | None = None

    def render(self, limit: int | None = None) -> str:
        head = [f"kind: {self.kind.value}"]
        if self.constraint is not None:
            head.append(f"constraint: {self.constraint}")
        head += [
            f"feasible windows: {self.feasible}",
            f"max share = {self.max_share}, density lower bound = {self.density_bound}",
            f"windows attaining the max: {self.argmax_count} "
            f"({len(self.argmax_classes)} up to symmetry)",
        ]
        shown = self.argmax_classes if limit is None else self.argmax_classes[:limit]
        for p in shown:
            head += ["", p.to_ascii()]
        if len(shown) < len(self.argmax_classes):
            head += ["", f"... {len(self.argmax_classes) - len(shown)} more"]
        return "\n".join(head) + "\n"

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "constraint": None if self.constraint is None else str(self.constraint),
            "max_share": str(self.max_share),
            "density_lower_bound": str(self.density_bound),
            "feasible": self.feasible,
            "argmax_count": self.argmax_count,
            "argmax": [p.to_ascii().split("\n") for p in self.argmax_classes],
        }


def certified_max_share(kind: Kind, constraint: CoreConstraint | str | None = None,
                        workers: int = 1) -> Certificate:
    kind = Kind.parse(kind)
    if isinstance(constraint, str):
        constraint = CoreConstraint.parse(constraint)
    s = summarize(kind, constraint, workers=workers)
    if not s.histogram:
        raise ValueError("no feasible window satisfies the constraint")
    best = max(s.histogram)
    if best not in s.top:  # maximum at or below the default threshold: collect it again
        s = summarize(kind, constraint, keep_above=Fraction(best - 1, SHARE_SCALE),
                      workers=workers)
    windows = s.top[best]
    classes = sorted({Patch(m).canonical() for m in windows})
    return Certificate(kind, Fraction(best, SHARE_SCALE), 1 / Fraction(best, SHARE_SCALE),
                       s.feasible, len(windows), classes, constraint)


@dataclass
class HighShareEntry:
    patch: Patch
    share: Fraction
    neighbors: list  # centre-adjacent detector offsets
    neighbor_class_max: dict  # offset -> class maximum share of that neighbour
    qualifying: list  # neighbours whose class maximum is <= AVERAGING_CLASS_MAX

    @property
    def ok(self) -> bool:
        return len(self.qualifying) >= 2


@dataclass
class HighShareReport:
    kind: Kind
    threshold: Fraction
    entries: list

    @property
    def values(self) -> set:
        return {e.share for e in self.entries}

    @property
    def all_ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def classes(self) -> list:
        seen = {}
        for e in self.entries:
            seen.setdefault(e.patch.canonical(), e)
        return [seen[k] for k in sorted(seen)]

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "threshold": str(self.threshold),
            "patches": len(self.entries),
            "classes": len(self.classes()),
            "values": sorted(str(v) for v in self.values),
            "all_have_two_low_neighbors": self.all_ok,
            "examples": [{
                "share": str(e.share),
                "patch": e.patch.to_ascii().split("\n"),
                "neighbors": [list(o) for o in e.neighbors],
                "neighbor_class_max": {f"{o[0]},{o[1]}": str(v)
                                       for o, v in e.neighbor_class_max.items()},
            } for e in self.classes()],
        }


def classify_high_share(kind: Kind, threshold: Fraction = DEFAULT_THRESHOLD,
                        workers: int = 1) -> HighShareReport:
    """Every feasible window above ``threshold``, with the share class of each adjacent detector.

    A neighbour ``w`` of the centre lies in the core, so all of its own
    neighbours are inside the window and known.  Its share is at most the
    maximum over feasible windows whose centre has detectors in the same
    relative positions, which the enumeration tabulates.
    """
    kind = Kind.parse(kind)
    threshold = Fraction(threshold)
    s = summarize(kind, keep_above=min(threshold, DEFAULT_THRESHOLD), workers=workers)
    entries = []
    for num in sorted(s.top):
        share = Fraction(num, SHARE_SCALE)
        if share <= threshold:
            continue
        for m in s.top[num]:
            p = Patch(m)
            nbrs = p.center_neighbors()
            cm = {}
            for dr, dc in nbrs:
                cm[(dr, dc)] = s.class_max(p.neighbor_offsets_of(2 + dr, 2 + dc))
            good = [o for o, v in cm.items() if v is not None and v <= AVERAGING_CLASS_MAX]
            entries.append(HighShareEntry(p, share, nbrs, cm, good))
    return HighShareReport(kind, threshold, entries)
