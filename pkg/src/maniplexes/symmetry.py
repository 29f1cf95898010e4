"""Automorphisms of maniplexes, flag orbits, and symmetry type graphs.

An automorphism is a flag permutation commuting with every monodromy; it is
determined by the image of a single flag and acts freely. The symmetry type
graph is the quotient premaniplex by a group of automorphisms; its vertex
count is the number of flag orbits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .colored_graph import (
    GraphHomomorphism,
    Partition,
    check_covering,
    components,
    quotient_by_group,
)
from .premaniplex import Premaniplex, is_maniplex, premaniplex_maps


@dataclass(frozen=True)
class ManiplexAutomorphism:
    flag_perm: np.ndarray

    def __post_init__(self):
        perm = np.ascontiguousarray(self.flag_perm, dtype=np.int64)
        perm.setflags(write=False)
        object.__setattr__(self, "flag_perm", perm)

    def __call__(self, flag: int) -> int:
        return int(self.flag_perm[flag])

    def compose(self, then: "ManiplexAutomorphism") -> "ManiplexAutomorphism":
        return ManiplexAutomorphism(then.flag_perm[self.flag_perm])

    def inverse(self) -> "ManiplexAutomorphism":
        inv = np.empty_like(self.flag_perm)
        inv[self.flag_perm] = np.arange(self.flag_perm.shape[0])
        return ManiplexAutomorphism(inv)

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.flag_perm,
                                   np.arange(self.flag_perm.shape[0])))

    def __eq__(self, other) -> bool:
        return (isinstance(other, ManiplexAutomorphism)
                and np.array_equal(other.flag_perm, self.flag_perm))

    def __hash__(self) -> int:
        return hash(self.flag_perm.tobytes())


@dataclass(frozen=True)
class SymmetryTypeGraph:
    premaniplex: Premaniplex
    projection: GraphHomomorphism

    @property
    def n_orbits(self) -> int:
        return self.premaniplex.n_vertices


def _commutes(x: Premaniplex, perm: np.ndarray) -> bool:
    return bool(np.array_equal(perm[x.mono], x.mono[:, perm]))


def automorphism_group(m: Premaniplex) -> list[ManiplexAutomorphism]:
    """All automorphisms, by extending each candidate image of the base flag."""
    ok, why = is_maniplex(m)
    if not ok:
        raise ValueError(f"input is not a maniplex: {why}")
    rows = premaniplex_maps(m, m)
    ident = np.arange(m.n_vertices)
    for row in rows:
        if not np.array_equal(row, ident) and (row == ident).any():
            raise AssertionError("automorphism action on a maniplex must be free")
    return [ManiplexAutomorphism(row) for row in rows]


def _as_perms(m: Premaniplex,
              G: Iterable[ManiplexAutomorphism]) -> list[np.ndarray]:
    perms = []
    for k, e in enumerate(G):
        perm = e.flag_perm
        if perm.shape[0] != m.n_vertices or not _commutes(m, perm):
            raise ValueError(f"element {k} is not an automorphism of the maniplex")
        perms.append(perm)
    return perms


def flag_orbits(m: Premaniplex,
                G: Iterable[ManiplexAutomorphism]) -> Partition:
    """Orbit partition of flags under the group generated by G."""
    from . import _kernels

    perms = _as_perms(m, G)
    n = m.n_vertices
    if not perms:
        return Partition(np.arange(n))
    tails = np.concatenate([np.arange(n)] * len(perms))
    heads = np.concatenate(perms)
    return Partition(_kernels.component_labels(n, tails, heads))


def _dart_map(m: Premaniplex, perm: np.ndarray) -> np.ndarray:
    """Induced dart image: the color-c dart at v goes to the one at perm[v]."""
    g = m.graph
    return m.dart_of[g.color, perm[g.initial]]


def symmetry_type_graph(m: Premaniplex,
                        G: Iterable[ManiplexAutomorphism]) -> SymmetryTypeGraph:
    """Quotient premaniplex of the maniplex by the group generated by G."""
    perms = _as_perms(m, G)
    homs = [GraphHomomorphism(p, _dart_map(m, p)) for p in perms]
    quotient, projection = quotient_by_group(m.graph, homs)
    return SymmetryTypeGraph(Premaniplex(quotient), projection)


def _perm_closure(perms: list[np.ndarray], n: int) -> set[bytes]:
    ident = np.arange(n)
    elems = {ident.tobytes()}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for q in perms:
                r = q[p]
                key = r.tobytes()
                if key not in elems:
                    elems.add(key)
                    nxt.append(r)
        frontier = nxt
    return elems


def check_stg_cover(m: Premaniplex, H: Sequence[ManiplexAutomorphism],
                    G: Sequence[ManiplexAutomorphism]) -> bool:
    """The STG by a subgroup covers the STG by the full group."""
    perms_h = _as_perms(m, H)
    perms_g = _as_perms(m, G)
    if not _perm_closure(perms_h, m.n_vertices) <= _perm_closure(
            perms_g, m.n_vertices):
        raise ValueError("H is not contained in G")
    stg_h = symmetry_type_graph(m, H)
    stg_g = symmetry_type_graph(m, G)
    n_h = stg_h.premaniplex.n_vertices
    vmap = np.empty(n_h, dtype=np.int64)
    vmap[stg_h.projection.vertex_map] = stg_g.projection.vertex_map
    dmap = np.empty(stg_h.premaniplex.graph.n_darts, dtype=np.int64)
    dmap[stg_h.projection.dart_map] = stg_g.projection.dart_map
    ok, _ = check_covering(GraphHomomorphism(vmap, dmap),
                           stg_h.premaniplex.graph, stg_g.premaniplex.graph)
    return ok


def face_orbit_components(t: SymmetryTypeGraph,
                          K: Iterable[int]) -> Partition:
    """Orbits of type-K chains, read off the STG with K-colored edges removed."""
    x = t.premaniplex
    K = frozenset(int(c) for c in K)
    if not K <= set(range(x.rank)):
        raise ValueError(f"type {sorted(K)} is not a subset of [0, {x.rank})")
    return components(x.graph, set(range(x.rank)) - K)
