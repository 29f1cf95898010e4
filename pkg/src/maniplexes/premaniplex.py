"""Premaniplexes, maniplexes, monodromy, and the path-intersection properties.

A premaniplex of rank n is a connected n-edge-colored graph in which every
vertex meets exactly one edge of each color, counting incidence with
multiplicity, and every length-4 path alternating two non-consecutive colors
closes up. One edge per color forces exactly one dart of each color at each
vertex, so a loop (two darts of one color at its vertex) can never occur; the
legal {i,j}-components are precisely the loop-free quotients of a 4-cycle.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernels
from .colored_graph import ColoredGraph, Partition, components

SPIP_MAX_RANK = 6


class Premaniplex:
    """A validated premaniplex: the graph plus its vertex monodromy table.

    mono[i, v] is the vertex across the unique color-i edge at v (v itself for
    a semi-edge); dart_of[i, v] is that edge's dart starting at v.
    """

    __slots__ = ("graph", "mono", "dart_of")

    def __init__(self, graph: ColoredGraph):
        ok, why = validate_premaniplex(graph)
        if not ok:
            raise ValueError(f"not a premaniplex: {why}")
        self.graph = graph
        self.dart_of = _dart_table(graph)
        mono = graph.initial[graph.inverse[self.dart_of]]
        mono.setflags(write=False)
        self.mono = mono

    @property
    def rank(self) -> int:
        return self.graph.rank

    @property
    def n_vertices(self) -> int:
        return self.graph.n_vertices

    def __repr__(self) -> str:  # pragma: no cover
        return f"Premaniplex(rank={self.rank}, vertices={self.n_vertices})"


def _dart_table(g: ColoredGraph) -> np.ndarray:
    table = np.empty((g.rank, g.n_vertices), dtype=np.int64)
    table[g.color, g.initial] = np.arange(g.n_darts)
    table.setflags(write=False)
    return table


def validate_premaniplex(g: ColoredGraph) -> tuple[bool, Optional[str]]:
    """Connectivity, one dart of each color per vertex, alternating closure."""
    if g.n_vertices == 0:
        return False, "empty vertex set"
    counts = np.zeros((g.rank, g.n_vertices), dtype=np.int64)
    np.add.at(counts, (g.color, g.initial), 1)
    bad = np.argwhere(counts != 1)
    if bad.size:
        c, v = (int(x) for x in bad[0])
        return False, (f"vertex {v} meets {int(counts[c, v])} darts of color {c},"
                       " expected exactly 1")
    if components(g, range(g.rank)).n_blocks != 1:
        return False, "graph is not connected"
    dart_of = _dart_table(g)
    mono = g.initial[g.inverse[dart_of]]
    ident = np.arange(g.n_vertices)
    for i, j in combinations(range(g.rank), 2):
        if j - i < 2:
            continue
        walk = mono[j][mono[i][mono[j][mono[i]]]]
        open_at = np.flatnonzero(walk != ident)
        if open_at.size:
            v = int(open_at[0])
            return False, (f"alternating path of colors {i},{j} from vertex {v}"
                           " does not close")
    return True, None


def is_maniplex(x: Premaniplex) -> tuple[bool, Optional[str]]:
    """Simplicity on top of the premaniplex axioms."""
    semi = np.argwhere(x.mono == np.arange(x.n_vertices))
    if semi.size:
        i, v = (int(t) for t in semi[0])
        return False, f"semi-edge of color {i} at vertex {v}"
    for i, j in combinations(range(x.rank), 2):
        par = np.flatnonzero(x.mono[i] == x.mono[j])
        if par.size:
            v = int(par[0])
            return False, (f"parallel edges of colors {i} and {j} join vertex"
                           f" {v} to vertex {int(x.mono[i, v])}")
    return True, None


def monodromy_apply(x: Premaniplex, v: int, word: Iterable[int]) -> int:
    """Apply r_{a1}, then r_{a2}, ... along the word a1 a2 ... ak."""
    at = int(v)
    for c in word:
        if not 0 <= c < x.rank:
            raise ValueError(f"color {c} out of range for rank {x.rank}")
        at = int(x.mono[c, at])
    return at


def dual_premaniplex(x: Premaniplex) -> Premaniplex:
    """Recolor every edge i as n-1-i."""
    g = x.graph
    return Premaniplex(ColoredGraph(g.n_vertices, g.rank, g.initial, g.inverse,
                                    g.rank - 1 - g.color))


def chains_of_type(x: Premaniplex, K: Iterable[int]) -> Partition:
    """Blocks = vertex sets of the chains of type K = components over colors not in K."""
    K = frozenset(int(c) for c in K)
    if not K <= set(range(x.rank)):
        raise ValueError(f"type {sorted(K)} is not a subset of [0, {x.rank})")
    return components(x.graph, set(range(x.rank)) - K)


def _interval_partition(x: Premaniplex, lo: int, hi: int) -> Partition:
    return components(x.graph, range(lo, hi + 1))


def wpip_check(x: Premaniplex) -> tuple[bool, Optional[tuple]]:
    """Weak path intersection property over all color windows.

    For every k, m: two flags joined by a path of colors in [0, m] and also by
    a path of colors in [k, n-1] must be joined by one of colors in [k, m].
    Equivalently the [k, m]-component partition equals the meet of the other
    two. Returns (bool, witness) with witness = (k, m, u, v) for a flag pair in
    the meet but split by [k, m].
    """
    ok, why = is_maniplex(x)
    if not ok:
        raise ValueError(f"input is not a maniplex: {why}")
    n = x.rank
    lower = [_interval_partition(x, 0, m) for m in range(n)]
    upper = [_interval_partition(x, k, n - 1) for k in range(n)]
    for k in range(n):
        for m in range(n):
            inner = (_interval_partition(x, k, m) if k <= m
                     else Partition(np.arange(x.n_vertices)))
            meet = lower[m].meet(upper[k])
            if inner == meet:
                continue
            # inner always refines the meet, so some meet block is split
            split = np.flatnonzero(inner.labels != meet.labels)
            u = int(split[0])
            v = int(meet.labels[u])
            return False, (k, m, u, v)
    return True, None


def spip_check(x: Premaniplex) -> bool:
    """Strong path intersection property: all color subsets I, J.

    Exponential in rank; refuse beyond SPIP_MAX_RANK.
    """
    ok, why = is_maniplex(x)
    if not ok:
        raise ValueError(f"input is not a maniplex: {why}")
    if x.rank > SPIP_MAX_RANK:
        raise ValueError(f"rank {x.rank} exceeds the SPIP cap of {SPIP_MAX_RANK}")
    colors = range(x.rank)
    subsets = []
    for r in range(x.rank + 1):
        subsets.extend(frozenset(c) for c in combinations(colors, r))
    parts = {I: components(x.graph, I) for I in subsets}
    for I in subsets:
        for J in subsets:
            if parts[I].meet(parts[J]) != parts[I & J]:
                return False
    return True


def alternating_component_shapes(x: Premaniplex) -> set[str]:
    """Shapes of all {i,j}-components for non-consecutive i, j.

    Every shape is one of the four loop-free quotients of a 4-cycle: the
    4-cycle itself, a link with a semi-edge of the other color at each end, two
    vertices joined by an i-edge and a j-edge, or one vertex with two
    semi-edges.
    """
    shapes: set[str] = set()
    for i, j in combinations(range(x.rank), 2):
        if j - i < 2:
            continue
        part = components(x.graph, (i, j))
        for block in part.blocks():
            v = block[0]
            fixed_i = int(x.mono[i, v]) == v
            fixed_j = int(x.mono[j, v]) == v
            if len(block) == 1:
                shapes.add("vertex-two-semi-edges")
            elif len(block) == 2:
                if fixed_i or fixed_j:
                    shapes.add("link-two-semi-edges")
                else:
                    shapes.add("digon")
            elif len(block) == 4:
                shapes.add("four-cycle")
            else:
                shapes.add(f"unexpected-{len(block)}")
    return shapes


def _bfs_tree(mono: np.ndarray, root: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """BFS order, parent vertex and parent color over the monodromy table."""
    rank, n = mono.shape
    order = np.empty(n, dtype=np.int64)
    pvert = np.zeros(n, dtype=np.int64)
    pcol = np.zeros(n, dtype=np.int64)
    seen = np.zeros(n, dtype=bool)
    order[0] = root
    seen[root] = True
    head, tail = 0, 1
    while head < tail:
        v = order[head]
        head += 1
        for c in range(rank):
            w = int(mono[c, v])
            if not seen[w]:
                seen[w] = True
                order[tail] = w
                pvert[w] = v
                pcol[w] = c
                tail += 1
    if tail != n:
        raise AssertionError("premaniplex monodromy must be transitive")
    return order, pvert, pcol


def premaniplex_maps(x: Premaniplex, y: Premaniplex) -> np.ndarray:
    """All monodromy-equivariant vertex maps x -> y, one row per map.

    Such a map is determined by the image of one base vertex, is always onto
    (the image is closed under monodromy and y is connected), and is a covering.
    Rows are sorted by the base image, so in the automorphism case x == y the
    identity comes first.
    """
    if x.rank != y.rank:
        return np.empty((0, x.n_vertices), dtype=np.int64)
    order, pvert, pcol = _bfs_tree(x.mono, 0)
    candidates = np.arange(y.n_vertices, dtype=np.int64)
    return _kernels.extend_candidates(x.mono, y.mono, order, pvert, pcol,
                                      candidates)


def premaniplex_isomorphic(x: Premaniplex, y: Premaniplex) -> Optional[np.ndarray]:
    """A color-respecting vertex bijection x -> y, or None."""
    if x.n_vertices != y.n_vertices:
        return None
    maps = premaniplex_maps(x, y)
    if maps.shape[0] == 0:
        return None
    return maps[0]
