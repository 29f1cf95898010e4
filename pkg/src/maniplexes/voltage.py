"""Voltage assignments on premaniplexes and their derived covering graphs.

A voltage assignment labels every dart with a group element so that inverse
darts carry inverse voltages.  Path voltages compose as an antimorphism: the
voltage of d1 d2 ... dk is volt(dk) ... volt(d1).  The derived graph has
vertex set V x G; it is a maniplex exactly when the four conditions of
check_derived_maniplex hold, and the flag graph of a polytope exactly when
the interval battery of check_polytopal_voltage holds.  Checkers expect
voltages that are trivial on a spanning tree; regauge converts any
assignment into an equivalent one of that form.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from typing import Iterable, Optional

import numpy as np

from .colored_graph import (ColoredGraph, EdgeKind, GraphHomomorphism,
                            GraphPath, classify_edge, components,
                            is_automorphism, spanning_forest)
from .group import (CosetHandle, SubgroupHandle, TableGroup, closure,
                    coset_intersect, subgroup_equal)
from .premaniplex import SPIP_MAX_RANK, Premaniplex

MANIPLEX_MAX_FLAGS = 100_000


def _flag_cap() -> int:
    return int(os.environ.get("MANIPLEX_MAX_FLAGS", MANIPLEX_MAX_FLAGS))


class VoltageAssignment:
    """One group element per dart of a premaniplex, inverse on inverse darts."""

    __slots__ = ("base", "group", "volt")

    def __init__(self, base: Premaniplex, group, volt):
        g = base.graph
        arr = np.array(volt, dtype=np.int64)
        if arr.shape != (g.n_darts,):
            raise ValueError(f"need {g.n_darts} voltages, got shape {arr.shape}")
        if arr.size and (arr.min() < 0 or arr.max() >= group.order):
            raise ValueError("voltage out of range for the group")
        for d in range(g.n_darts):
            e = int(g.inverse[d])
            if group.inv(int(arr[d])) != int(arr[e]):
                raise ValueError(f"darts {d} and {e} need inverse voltages")
        arr.setflags(write=False)
        self.base = base
        self.group = group
        self.volt = arr

    @classmethod
    def from_edge_voltages(cls, base: Premaniplex, group,
                           per_dart: dict) -> "VoltageAssignment":
        """Build from one voltage per edge; unlisted edges get the identity."""
        g = base.graph
        arr = np.full(g.n_darts, group.identity, dtype=np.int64)
        for d, val in sorted(per_dart.items()):
            d, val = int(d), int(val)
            if not 0 <= d < g.n_darts:
                raise ValueError(f"unknown dart id {d}")
            e = int(g.inverse[d])
            if e == d and group.inv(val) != val:
                raise ValueError(f"semi-edge {d} needs an involution voltage")
            if e != d and e in per_dart and int(per_dart[e]) != group.inv(val):
                raise ValueError(f"darts {d} and {e} need inverse voltages")
            arr[d] = val
            arr[e] = group.inv(val)
        return cls(base, group, arr)

    def __repr__(self) -> str:  # pragma: no cover
        return (f"VoltageAssignment({self.base!r}, {self.group!r}, "
                f"{self.volt.tolist()})")


def path_voltage(va: VoltageAssignment, W: GraphPath):
    """Right-to-left product of dart voltages along a path of the base."""
    g, group = va.base.graph, va.group
    acc, at = group.identity, W.start
    for d in W.darts:
        if not 0 <= int(d) < g.n_darts:
            raise ValueError(f"unknown dart id {d}")
        if int(g.initial[d]) != at:
            raise ValueError(f"dart {d} does not start at vertex {at}")
        at = g.terminal(int(d))
        acc = group.op(int(va.volt[d]), acc)
    return acc


def _left_rows(group, volts: np.ndarray) -> np.ndarray:
    """rows[d, a] = volt(d)·a for every group element a."""
    v = np.asarray(volts, dtype=np.int64)
    if isinstance(group, TableGroup):
        return group.mul[v]
    return v[:, None] ^ np.arange(group.order, dtype=np.int64)[None, :]


def _right_column(group, h: int) -> np.ndarray:
    """col[a] = a·h for every group element a."""
    if isinstance(group, TableGroup):
        return group.mul[:, h]
    return np.arange(group.order, dtype=np.int64) ^ h


def derived_graph(va: VoltageAssignment) -> ColoredGraph:
    """Covering graph on V x G; the dart (d, a) runs (x, a) -> (y, volt(d)·a)."""
    g, group = va.base.graph, va.group
    N = group.order
    cap = _flag_cap()
    if g.n_vertices * N > cap:
        raise ValueError(f"derived graph has {g.n_vertices * N} vertices; "
                         f"MANIPLEX_MAX_FLAGS caps it at {cap}")
    spread = np.arange(N, dtype=np.int64)
    initial = (g.initial[:, None] * N + spread).ravel()
    inverse = (g.inverse[:, None] * N + _left_rows(group, va.volt)).ravel()
    color = np.repeat(g.color, N)
    derived = ColoredGraph(g.n_vertices * N, g.rank, initial, inverse, color)
    for h in range(min(N, 64)):
        col = _right_column(group, h)
        hom = GraphHomomorphism(
            (np.arange(g.n_vertices, dtype=np.int64)[:, None] * N + col).ravel(),
            (np.arange(g.n_darts, dtype=np.int64)[:, None] * N + col).ravel())
        ok, why = is_automorphism(hom, derived)
        assert ok, f"right multiplication by {h} is not an automorphism: {why}"
    return derived


def _tree_is_trivial(va: VoltageAssignment) -> bool:
    ident = va.group.identity
    return all(int(va.volt[d]) == ident
               for d in spanning_forest(va.base.graph))


def _tree_paths(g: ColoredGraph, group, volt: np.ndarray,
                colors: Optional[Iterable[int]],
                root: int) -> tuple[dict[int, int], tuple[int, ...]]:
    """BFS the spanning forest from root: tree-path voltages and tree darts."""
    adj: dict[int, list[tuple[int, int]]] = {}
    for d in spanning_forest(g, colors):
        u, w = int(g.initial[d]), g.terminal(d)
        adj.setdefault(u, []).append((d, w))
        adj.setdefault(w, []).append((int(g.inverse[d]), u))
    t = {root: group.identity}
    oriented: list[int] = []
    frontier = [root]
    while frontier:
        u = frontier.pop(0)
        for d, w in sorted(adj.get(u, [])):
            if w not in t:
                t[w] = group.op(int(volt[d]), t[u])
                oriented.append(d)
                frontier.append(w)
    return t, tuple(oriented)


def regauge(va: VoltageAssignment) -> VoltageAssignment:
    """Equivalent assignment whose spanning-tree darts all carry the identity.

    Relabeling the fiber over x by the tree-path voltage t_x replaces volt(d)
    with t_end(d)^{-1}·volt(d)·t_start(d); the derived graphs are isomorphic.
    """
    g, group = va.base.graph, va.group
    t, _ = _tree_paths(g, group, va.volt, None, 0)
    new = np.empty_like(va.volt)
    for d in range(g.n_darts):
        new[d] = group.op(group.inv(t[g.terminal(d)]),
                          group.op(int(va.volt[d]), t[int(g.initial[d])]))
    return VoltageAssignment(va.base, group, new)


def check_derived_maniplex(va: VoltageAssignment) -> tuple[bool, Optional[tuple]]:
    """Is the derived graph a maniplex?  Four conditions, checked in order:
    voltages generate the group, semi-edge voltages have order exactly two,
    parallel darts carry distinct voltages, and alternating 4-paths of
    non-consecutive colors close with trivial voltage.
    """
    if not _tree_is_trivial(va):
        raise ValueError("voltages are not trivial on the spanning tree; "
                         "regauge first")
    x, group = va.base, va.group
    g = x.graph
    if closure(group, (int(v) for v in va.volt)).size != group.order:
        return False, ("generate",)
    for d in g.edge_reps():
        if (classify_edge(g, d) is EdgeKind.SEMI_EDGE
                and int(va.volt[d]) == group.identity):
            return False, ("semi-edge", d)
    for v in range(x.n_vertices):
        for i, j in combinations(range(x.rank), 2):
            if (x.mono[i, v] == x.mono[j, v]
                    and va.volt[x.dart_of[i, v]] == va.volt[x.dart_of[j, v]]):
                return False, ("parallel", int(x.dart_of[i, v]),
                               int(x.dart_of[j, v]))
    bad = _open_square(va)
    if bad is not None:
        return False, ("alternating",) + bad
    return True, None


def _open_square(va: VoltageAssignment) -> Optional[tuple]:
    x, group = va.base, va.group
    for v in range(x.n_vertices):
        for i in range(x.rank):
            for j in range(i + 2, x.rank):
                acc, at = group.identity, v
                for c in (i, j, i, j):
                    d = int(x.dart_of[c, at])
                    acc = group.op(int(va.volt[d]), acc)
                    at = int(x.mono[c, at])
                if acc != group.identity:
                    return (v, i, j)
    return None


def check_homotopy_invariance(va: VoltageAssignment) -> bool:
    """Path voltages survive swapping consecutive darts of far-apart colors."""
    return _open_square(va) is None


@dataclass(frozen=True)
class PiGenerators:
    """Cycle-voltage generators of the closed-path voltage group at an anchor.

    Every non-tree edge of the anchor's component (over the chosen colors)
    contributes one fundamental cycle; its voltage is t_end^{-1}·volt·t_start
    with t the tree-path voltages.  tree_voltages maps each reachable vertex y
    to the voltage of the tree path from the anchor to y.
    """

    anchor: int
    colors: tuple[int, ...]
    tree: tuple[int, ...]
    gens: tuple[tuple[int, int], ...]
    subgroup: SubgroupHandle
    tree_voltages: dict[int, int]


def pi_generators(va: VoltageAssignment, x: int,
                  I: Iterable[int]) -> PiGenerators:
    g, group = va.base.graph, va.group
    if not 0 <= x < g.n_vertices:
        raise ValueError(f"unknown vertex {x}")
    colorset = tuple(sorted({int(c) for c in I}))
    for c in colorset:
        if not 0 <= c < g.rank:
            raise ValueError(f"color {c} out of range for rank {g.rank}")
    t, oriented = _tree_paths(g, group, va.volt, colorset, x)
    in_tree = set(oriented) | {int(g.inverse[d]) for d in oriented}
    chosen = set(colorset)
    gens: list[tuple[int, int]] = []
    for d in range(g.n_darts):
        if int(g.color[d]) not in chosen or d in in_tree:
            continue
        if int(g.inverse[d]) < d or int(g.initial[d]) not in t:
            continue
        cyc = group.op(group.inv(t[g.terminal(d)]),
                       group.op(int(va.volt[d]), t[int(g.initial[d])]))
        gens.append((d, cyc))
    return PiGenerators(x, colorset, oriented, tuple(gens),
                        closure(group, [v for _, v in gens]), t)


def paths_coset(va: VoltageAssignment, x: int, y: int,
                I: Iterable[int]) -> Optional[CosetHandle]:
    """Voltages of all x-to-y paths with colors in I: a left coset, or None."""
    pg = pi_generators(va, x, I)
    if y in pg.tree_voltages:
        return CosetHandle(pg.subgroup, pg.tree_voltages[y], side="left")
    if not 0 <= y < va.base.n_vertices:
        raise ValueError(f"unknown vertex {y}")
    return None


def _coset(va: VoltageAssignment, cache: dict, x: int, y: int,
           colors: tuple[int, ...]) -> Optional[CosetHandle]:
    pg = cache.get((x, colors))
    if pg is None:
        pg = cache[(x, colors)] = pi_generators(va, x, colors)
    if y not in pg.tree_voltages:
        return None
    return CosetHandle(pg.subgroup, pg.tree_voltages[y], side="left")


def _cosets_match(meet: Optional[CosetHandle],
                  want: Optional[CosetHandle]) -> bool:
    if meet is None or want is None:
        return meet is None and want is None
    return (subgroup_equal(meet.subgroup, want.subgroup)
            and want.contains(meet.rep))


def check_polytopal_voltage(va: VoltageAssignment) -> tuple[bool, Optional[tuple]]:
    """Interval intersection battery: is the derived maniplex polytopal?

    For 0 < k <= m+1 <= n-1 and one vertex pair per pair of components of
    the [k, m]-subgraph, the [0, m]- and [k, n-1]-path cosets must intersect
    in exactly the [k, m]-path coset.  Witness: the first failing (k, m, x, y).
    """
    ok, why = check_derived_maniplex(va)
    if not ok:
        raise ValueError(f"assignment does not derive a maniplex: {why}")
    n = va.base.rank
    cache: dict = {}
    for m in range(n - 1):
        for k in range(1, m + 2):
            comp = components(va.base.graph, range(k, m + 1))
            reps = sorted(set(comp.labels.tolist()))
            for x, y in combinations_with_replacement(reps, 2):
                low = _coset(va, cache, x, y, tuple(range(m + 1)))
                high = _coset(va, cache, x, y, tuple(range(k, n)))
                mid = _coset(va, cache, x, y, tuple(range(k, m + 1)))
                meet = (coset_intersect(low, high)
                        if low is not None and high is not None else None)
                if not _cosets_match(meet, mid):
                    return False, (k, m, x, y)
    return True, None


def full_voltage_battery(va: VoltageAssignment) -> tuple[bool, Optional[tuple]]:
    """Intersection property over every color-set pair and every vertex pair.

    Exponential in the rank; the reduced battery of check_polytopal_voltage
    is the production path and this exhaustive form exists to cross-check it.
    """
    ok, why = check_derived_maniplex(va)
    if not ok:
        raise ValueError(f"assignment does not derive a maniplex: {why}")
    n = va.base.rank
    if n > SPIP_MAX_RANK:
        raise ValueError(f"rank {n} exceeds the battery cap {SPIP_MAX_RANK}")
    cache: dict = {}
    subsets = [tuple(c for c in range(n) if mask >> c & 1)
               for mask in range(1 << n)]
    for I in subsets:
        for J in subsets:
            K = tuple(c for c in I if c in J)
            for x in range(va.base.n_vertices):
                for y in range(x, va.base.n_vertices):
                    A = _coset(va, cache, x, y, I)
                    B = _coset(va, cache, x, y, J)
                    meet = (coset_intersect(A, B)
                            if A is not None and B is not None else None)
                    if not _cosets_match(meet, _coset(va, cache, x, y, K)):
                        return False, (I, J, x, y)
    return True, None
