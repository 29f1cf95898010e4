"""Edge-colored dart graphs.

A graph is stored as three parallel dart arrays: ``initial`` (start vertex of
each dart), ``inverse`` (the dart involution) and ``color``. An edge is an
orbit of the involution: a fixed dart is a semi-edge, a swapped pair starting
at one vertex is a loop, and a swapped pair between distinct vertices is a
link. Vertices and darts are dense integer ids; every operation iterates in
ascending id order, so all derived data (components, forests, quotients) is
deterministic.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernels


class EdgeKind(enum.Enum):
    SEMI_EDGE = "semi-edge"
    LOOP = "loop"
    LINK = "link"


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


class ColoredGraph:
    """Immutable edge-colored dart graph."""

    __slots__ = ("n_vertices", "rank", "initial", "inverse", "color")

    def __init__(self, n_vertices: int, rank: int,
                 initial: Sequence[int], inverse: Sequence[int],
                 color: Sequence[int]):
        self.n_vertices = int(n_vertices)
        self.rank = int(rank)
        self.initial = _frozen(np.asarray(initial))
        self.inverse = _frozen(np.asarray(inverse))
        self.color = _frozen(np.asarray(color))
        d = self.initial.shape[0]
        if self.inverse.shape[0] != d or self.color.shape[0] != d:
            raise ValueError("dart arrays must have equal length")
        if self.n_vertices < 0 or self.rank < 0:
            raise ValueError("negative vertex count or rank")
        if d:
            if self.initial.min() < 0 or self.initial.max() >= self.n_vertices:
                raise ValueError("dart with initial vertex out of range")
            if not np.array_equal(self.inverse[self.inverse], np.arange(d)):
                raise ValueError("inverse is not an involution")
            if not np.array_equal(self.color[self.inverse], self.color):
                raise ValueError("inverse darts must share a color")
            if self.color.min() < 0 or self.color.max() >= self.rank:
                raise ValueError("dart color out of range")

    @property
    def n_darts(self) -> int:
        return self.initial.shape[0]

    def terminal(self, d: int) -> int:
        return int(self.initial[self.inverse[d]])

    def darts_at(self, v: int) -> list[int]:
        return [int(d) for d in np.flatnonzero(self.initial == v)]

    def edge_reps(self) -> list[int]:
        """One canonical dart (the smaller id) per edge, ascending."""
        ids = np.arange(self.n_darts)
        return [int(d) for d in ids[ids <= self.inverse]]

    @classmethod
    def from_edges(cls, n_vertices: int, rank: int,
                   edges: Iterable[tuple]) -> "ColoredGraph":
        """Build from (color, u, v) links/loops and (color, u) semi-edges.

        Dart ids follow edge-list order: two per link/loop (the first oriented
        u -> v), one per semi-edge. This is also the JSON convention.
        """
        initial: list[int] = []
        inverse: list[int] = []
        color: list[int] = []
        for e in edges:
            if len(e) == 2:
                c, u = e
                d = len(initial)
                initial.append(u)
                inverse.append(d)
                color.append(c)
            elif len(e) == 3:
                c, u, v = e
                d = len(initial)
                initial.extend((u, v))
                inverse.extend((d + 1, d))
                color.extend((c, c))
            else:
                raise ValueError(f"edge spec {e!r} is neither (color,u,v) nor (color,u)")
        return cls(n_vertices, rank, initial, inverse, color)

    def __repr__(self) -> str:  # pragma: no cover
        return (f"ColoredGraph(vertices={self.n_vertices}, darts={self.n_darts},"
                f" rank={self.rank})")


class Partition:
    """Vertex partition with canonical labels: label(v) = min id in v's block."""

    __slots__ = ("labels",)

    def __init__(self, labels: np.ndarray):
        self.labels = _frozen(labels)

    @property
    def n_blocks(self) -> int:
        return int(np.unique(self.labels).shape[0])

    def same(self, u: int, v: int) -> bool:
        return bool(self.labels[u] == self.labels[v])

    def block_of(self, v: int) -> tuple[int, ...]:
        return tuple(int(u) for u in np.flatnonzero(self.labels == self.labels[v]))

    def blocks(self) -> list[tuple[int, ...]]:
        reps = np.unique(self.labels)
        return [tuple(int(u) for u in np.flatnonzero(self.labels == r)) for r in reps]

    def refines(self, other: "Partition") -> bool:
        """True if every block of self lies inside one block of other."""
        return bool(np.array_equal(other.labels[self.labels], other.labels))

    def meet(self, other: "Partition") -> "Partition":
        """Coarsest common refinement (blockwise intersection)."""
        n = self.labels.shape[0]
        keys = self.labels * n + other.labels
        _, inv = np.unique(keys, return_inverse=True)
        minima = np.full(inv.max() + 1 if n else 0, n, dtype=np.int64)
        np.minimum.at(minima, inv, np.arange(n, dtype=np.int64))
        return Partition(minima[inv])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return np.array_equal(self.labels, other.labels)

    def __hash__(self) -> int:
        return hash(self.labels.tobytes())

    def __repr__(self) -> str:  # pragma: no cover
        return f"Partition({self.n_blocks} blocks on {self.labels.shape[0]} vertices)"


@dataclass(frozen=True)
class GraphPath:
    """Dart sequence with an anchor; the empty path sits at a single vertex."""

    start: int
    end: int
    darts: tuple[int, ...]

    @classmethod
    def empty(cls, v: int) -> "GraphPath":
        return cls(v, v, ())

    @classmethod
    def from_darts(cls, g: ColoredGraph, start: int, darts: Sequence[int]) -> "GraphPath":
        at = start
        for d in darts:
            if int(g.initial[d]) != at:
                raise ValueError(f"dart {d} does not start at vertex {at}")
            at = g.terminal(d)
        return cls(start, at, tuple(int(d) for d in darts))

    def reversed_in(self, g: ColoredGraph) -> "GraphPath":
        rev = tuple(int(g.inverse[d]) for d in reversed(self.darts))
        return GraphPath(self.end, self.start, rev)

    def __len__(self) -> int:
        return len(self.darts)


@dataclass(frozen=True)
class GraphHomomorphism:
    """A vertex map and a dart map, intended to preserve the graph structure."""

    vertex_map: np.ndarray
    dart_map: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "vertex_map", _frozen(self.vertex_map))
        object.__setattr__(self, "dart_map", _frozen(self.dart_map))

    @classmethod
    def identity(cls, g: ColoredGraph) -> "GraphHomomorphism":
        return cls(np.arange(g.n_vertices), np.arange(g.n_darts))

    def compose(self, then: "GraphHomomorphism") -> "GraphHomomorphism":
        return GraphHomomorphism(then.vertex_map[self.vertex_map],
                                 then.dart_map[self.dart_map])


def classify_edge(g: ColoredGraph, d: int) -> EdgeKind:
    if not 0 <= d < g.n_darts:
        raise ValueError(f"unknown dart id {d}")
    e = int(g.inverse[d])
    if e == d:
        return EdgeKind.SEMI_EDGE
    if int(g.initial[e]) == int(g.initial[d]):
        return EdgeKind.LOOP
    return EdgeKind.LINK


def components(g: ColoredGraph, colors: Iterable[int]) -> Partition:
    """Connected components of the subgraph induced by edges of the given colors."""
    colorset = frozenset(int(c) for c in colors)
    for c in colorset:
        if not 0 <= c < g.rank:
            raise ValueError(f"color {c} out of range for rank {g.rank}")
    if colorset:
        mask = np.isin(g.color, sorted(colorset))
        tails = g.initial[mask]
        heads = g.initial[g.inverse[mask]]
    else:
        tails = heads = np.empty(0, dtype=np.int64)
    return Partition(_kernels.component_labels(g.n_vertices, tails, heads))


def spanning_forest(g: ColoredGraph, colors: Optional[Iterable[int]] = None) -> list[int]:
    """One dart per tree edge of a spanning forest, chosen greedily by dart id."""
    allowed = None if colors is None else frozenset(int(c) for c in colors)
    parent = list(range(g.n_vertices))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    forest: list[int] = []
    for d in range(g.n_darts):
        if int(g.inverse[d]) <= d:
            continue  # one orientation per edge; skips semi-edges too
        if allowed is not None and int(g.color[d]) not in allowed:
            continue
        a, b = find(int(g.initial[d])), find(g.terminal(d))
        if a != b:
            parent[max(a, b)] = min(a, b)
            forest.append(d)
    return forest


def check_homomorphism(h: GraphHomomorphism, src: ColoredGraph,
                       dst: ColoredGraph) -> tuple[bool, Optional[str]]:
    """Verify initial-vertex, inverse and color equations on every dart."""
    if h.vertex_map.shape[0] != src.n_vertices or h.dart_map.shape[0] != src.n_darts:
        return False, "maps are not total on the source graph"
    if h.vertex_map.shape[0] and (h.vertex_map.min() < 0
                                  or h.vertex_map.max() >= dst.n_vertices):
        return False, "vertex map leaves the target vertex set"
    if h.dart_map.shape[0] and (h.dart_map.min() < 0
                                or h.dart_map.max() >= dst.n_darts):
        return False, "dart map leaves the target dart set"
    bad = np.flatnonzero(dst.initial[h.dart_map] != h.vertex_map[src.initial])
    if bad.size:
        d = int(bad[0])
        return False, f"initial vertex not preserved at dart {d}"
    bad = np.flatnonzero(h.dart_map[src.inverse] != dst.inverse[h.dart_map])
    if bad.size:
        d = int(bad[0])
        return False, f"inverse not preserved at dart {d}"
    if src.rank == dst.rank:
        bad = np.flatnonzero(dst.color[h.dart_map] != src.color)
        if bad.size:
            d = int(bad[0])
            return False, f"color not preserved at dart {d}"
    return True, None


def check_covering(h: GraphHomomorphism, src: ColoredGraph,
                   dst: ColoredGraph) -> tuple[bool, Optional[str]]:
    """A covering is a surjective homomorphism, locally bijective on darts."""
    ok, why = check_homomorphism(h, src, dst)
    if not ok:
        return False, why
    hit = np.zeros(dst.n_vertices, dtype=bool)
    hit[h.vertex_map] = True
    if not hit.all():
        v = int(np.flatnonzero(~hit)[0])
        return False, f"vertex {v} of the target is not covered"
    for v in range(src.n_vertices):
        mine = np.flatnonzero(src.initial == v)
        images = h.dart_map[mine]
        theirs = np.flatnonzero(dst.initial == h.vertex_map[v])
        if sorted(int(x) for x in images) != [int(x) for x in theirs]:
            return False, f"darts at vertex {v} do not map bijectively"
    return True, None


def is_automorphism(h: GraphHomomorphism, g: ColoredGraph) -> tuple[bool, Optional[str]]:
    ok, why = check_homomorphism(h, g, g)
    if not ok:
        return False, why
    if np.unique(h.vertex_map).shape[0] != g.n_vertices:
        return False, "vertex map is not a bijection"
    if np.unique(h.dart_map).shape[0] != g.n_darts:
        return False, "dart map is not a bijection"
    return True, None


def quotient_by_group(g: ColoredGraph,
                      elements: Sequence[GraphHomomorphism]
                      ) -> tuple[ColoredGraph, GraphHomomorphism]:
    """Orbit graph of a group of automorphisms plus the natural projection.

    Orbits of the generated group are computed directly from the supplied
    elements by union-find, so the list need not be closed under composition.
    """
    for i, e in enumerate(elements):
        ok, why = is_automorphism(e, g)
        if not ok:
            raise ValueError(f"element {i} is not an automorphism: {why}")
    vlab = np.arange(g.n_vertices, dtype=np.int64)
    dlab = np.arange(g.n_darts, dtype=np.int64)
    if elements:
        vt = np.concatenate([np.arange(g.n_vertices)] * len(elements))
        vh = np.concatenate([e.vertex_map for e in elements])
        vlab = _kernels.component_labels(g.n_vertices, vt, vh)
        dt = np.concatenate([np.arange(g.n_darts)] * len(elements))
        dh = np.concatenate([e.dart_map for e in elements])
        dlab = _kernels.component_labels(g.n_darts, dt, dh)
    vreps = np.unique(vlab)
    dreps = np.unique(dlab)
    vnew = np.searchsorted(vreps, vlab)
    dnew = np.searchsorted(dreps, dlab)
    initial = vnew[g.initial[dreps]]
    inverse = dnew[g.inverse[dreps]]
    color = g.color[dreps]
    quotient = ColoredGraph(vreps.shape[0], g.rank, initial, inverse, color)
    projection = GraphHomomorphism(vnew, dnew)
    return quotient, projection


def lift_path(g_base: ColoredGraph, W: GraphPath, cover_start: int,
              p: GraphHomomorphism, g_cover: ColoredGraph) -> GraphPath:
    """Unique lift of the base path W through the covering p, from cover_start."""
    ok, why = check_covering(p, g_cover, g_base)
    if not ok:
        raise ValueError(f"projection is not a covering: {why}")
    if int(p.vertex_map[cover_start]) != W.start:
        raise ValueError("cover_start does not project to the start of the path")
    lookup: dict[tuple[int, int], int] = {}
    for d in range(g_cover.n_darts):
        lookup[(int(g_cover.initial[d]), int(p.dart_map[d]))] = d
    darts: list[int] = []
    at = cover_start
    for d in W.darts:
        up = lookup[(at, int(d))]
        darts.append(up)
        at = g_cover.terminal(up)
    return GraphPath(cover_start, at, tuple(darts))
