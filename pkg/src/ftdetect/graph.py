"""Finite simple undirected graphs with bitset adjacency.

Vertices are the integers ``0..n-1``.  Neighborhoods are stored as Python
ints used as bitsets, so set algebra on locating codes is a handful of
word operations.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path


class GraphError(ValueError):
    """Malformed graph input (bad endpoint, self-loop, bad dimensions)."""


class InvalidVertex(IndexError):
    pass


class Kind(enum.Enum):
    """Detection region of a detector: open N(v) or closed N[v]."""

    OPEN = "open"
    CLOSED = "closed"

    @classmethod
    def parse(cls, text: str | Kind) -> Kind:
        if isinstance(text, Kind):
            return text
        try:
            return cls(text.lower())
        except ValueError:
            raise ValueError(f"unknown detection kind {text!r}") from None


def bits(mask: int) -> list[int]:
    """Indices of the set bits of ``mask`` in increasing order."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def to_mask(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]
    # (rows, cols) when the graph is a king torus; used for coordinates in output
    grid: tuple[int, int] | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.adj) != self.n:
            raise GraphError("adjacency length does not match vertex count")
        for v, nb in enumerate(self.adj):
            if nb >> v & 1:
                raise GraphError(f"self-loop at {v}")
            if nb >> self.n:
                raise GraphError(f"neighbor of {v} out of range")
            for u in bits(nb):
                if not self.adj[u] >> v & 1:
                    raise GraphError(f"asymmetric adjacency {v}-{u}")

    @property
    def all_mask(self) -> int:
        return (1 << self.n) - 1

    def check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise InvalidVertex(f"vertex {v} not in 0..{self.n - 1}")

    def region(self, v: int, kind: Kind) -> int:
        """Detection region of ``v`` as a bitset."""
        self.check_vertex(v)
        if kind is Kind.CLOSED:
            return self.adj[v] | (1 << v)
        return self.adj[v]

    def regions(self, kind: Kind) -> list[int]:
        if kind is Kind.CLOSED:
            return [a | (1 << v) for v, a in enumerate(self.adj)]
        return list(self.adj)

    def neighbors(self, v: int, kind: Kind = Kind.OPEN) -> frozenset[int]:
        return frozenset(bits(self.region(v, Kind.parse(kind))))

    def degree(self, v: int) -> int:
        self.check_vertex(v)
        return self.adj[v].bit_count()

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u]) if u < v]

    @property
    def is_faithful_torus(self) -> bool:
        """True for king tori whose wrap is locally identical to the infinite grid."""
        return self.grid is not None and min(self.grid) >= 5

    def coord(self, v: int) -> tuple[int, int]:
        if self.grid is None:
            raise ValueError("graph has no grid coordinates")
        return divmod(v, self.grid[1])

    def index(self, r: int, c: int) -> int:
        if self.grid is None:
            raise ValueError("graph has no grid coordinates")
        rows, cols = self.grid
        return (r % rows) * cols + (c % cols)

    def label(self, v: int) -> str:
        if self.grid is None:
            return str(v)
        r, c = self.coord(v)
        return f"({r},{c})"

    def to_json(self) -> dict:
        if self.grid is not None:
            return {"king_torus": list(self.grid)}
        return {"n": self.n, "edges": [list(e) for e in self.edges()]}


def graph_from_edge_list(n: int, edges) -> Graph:
    if n < 0:
        raise GraphError("vertex count must be non-negative")
    adj = [0] * n
    for e in edges:
        try:
            u, v = (int(x) for x in e)
        except (TypeError, ValueError):
            raise GraphError(f"bad edge {e!r}") from None
        if u == v:
            raise GraphError(f"self-loop ({u},{v})")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u},{v}) out of range for n={n}")
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return Graph(n, tuple(adj))


KING_STEPS = [(dr, dc) for dr in (-1, 0, 1) for dc in (-1, 0, 1) if (dr, dc) != (0, 0)]


def king_torus(rows: int, cols: int) -> Graph:
    """King's graph on a ``rows x cols`` torus.

    Below 5 in either dimension the wrap merges cells of the infinite grid,
    so such tori are usable for small tests only (``is_faithful_torus``).
    """
    if rows < 3 or cols < 3:
        raise GraphError(f"king torus needs both dimensions >= 3, got {rows}x{cols}")
    adj = [0] * (rows * cols)
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            for dr, dc in KING_STEPS:
                u = ((r + dr) % rows) * cols + (c + dc) % cols
                if u != v:
                    adj[v] |= 1 << u
    return Graph(rows * cols, tuple(adj), grid=(rows, cols))


def graph_from_json(data: dict) -> Graph:
    if not isinstance(data, dict):
        raise GraphError("graph JSON must be an object")
    if "king_torus" in data:
        try:
            rows, cols = (int(x) for x in data["king_torus"])
        except (TypeError, ValueError):
            raise GraphError("king_torus must be [rows, cols]") from None
        return king_torus(rows, cols)
    if "n" not in data:
        raise GraphError("graph JSON needs 'n' and 'edges' or 'king_torus'")
    return graph_from_edge_list(int(data["n"]), data.get("edges", []))


def load_graph(path: str | Path) -> Graph:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GraphError(f"{path}: {exc}") from None
    return graph_from_json(data)
