"""Ranked posets, polytopality checks, flag graphs, and reconstruction.

Faces are dense integer ids with ranks in [-1, n]; the order is stored as its
Hasse diagram (cover pairs with rank gap exactly 1, so transitive reduction is
automatic). A polytope is a flagged poset satisfying the diamond condition and
strong flag connectedness; the flag graph turns those posets into maniplexes
and poset_from_maniplex goes back.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .colored_graph import ColoredGraph, components
from .premaniplex import Premaniplex, is_maniplex


class RankedPoset:
    """Finite ranked poset given by its cover relation."""

    __slots__ = ("rank", "rank_of", "covers", "names", "_up", "_down")

    def __init__(self, rank: int, rank_of: Sequence[int],
                 covers: Sequence[tuple[int, int]],
                 names: Optional[Sequence[str]] = None):
        self.rank = int(rank)
        self.rank_of = np.ascontiguousarray(rank_of, dtype=np.int64)
        self.rank_of.setflags(write=False)
        self.covers = tuple(sorted((int(lo), int(hi)) for lo, hi in covers))
        self.names = None if names is None else tuple(names)
        n_faces = self.rank_of.shape[0]
        if self.names is not None and len(self.names) != n_faces:
            raise ValueError("face name list does not match face count")
        if n_faces and (self.rank_of.min() < -1 or self.rank_of.max() > self.rank):
            raise ValueError("face rank outside [-1, n]")
        up: list[list[int]] = [[] for _ in range(n_faces)]
        down: list[list[int]] = [[] for _ in range(n_faces)]
        for lo, hi in self.covers:
            if not (0 <= lo < n_faces and 0 <= hi < n_faces):
                raise ValueError(f"cover ({lo},{hi}) names an unknown face")
            if self.rank_of[hi] - self.rank_of[lo] != 1:
                raise ValueError(f"cover ({lo},{hi}) does not step rank by 1")
            up[lo].append(hi)
            down[hi].append(lo)
        self._up = tuple(tuple(sorted(s)) for s in up)
        self._down = tuple(tuple(sorted(s)) for s in down)

    @property
    def n_faces(self) -> int:
        return self.rank_of.shape[0]

    def up(self, f: int) -> tuple[int, ...]:
        return self._up[f]

    def down(self, f: int) -> tuple[int, ...]:
        return self._down[f]

    def faces_of_rank(self, r: int) -> list[int]:
        return [int(f) for f in np.flatnonzero(self.rank_of == r)]

    def name_of(self, f: int) -> str:
        return self.names[f] if self.names is not None else str(f)

    def __repr__(self) -> str:  # pragma: no cover
        return f"RankedPoset(rank={self.rank}, faces={self.n_faces})"


@dataclass(frozen=True)
class PolytopalityReport:
    is_flagged: bool
    is_diamond: bool
    is_strongly_connected: bool
    witness: Optional[tuple]

    @property
    def is_polytope(self) -> bool:
        return self.is_flagged and self.is_diamond and self.is_strongly_connected


def check_flagged(p: RankedPoset) -> tuple[bool, Optional[tuple]]:
    """Unique least and greatest face, every maximal chain of size n+2.

    Cover steps raise rank by exactly 1, so all maximal chains have full size
    precisely when the only face without a lower cover is a least face of rank
    -1 and the only face without an upper cover is a greatest face of rank n.
    """
    if p.n_faces == 0:
        raise ValueError("empty poset")
    minimal = [f for f in range(p.n_faces) if not p.down(f)]
    maximal = [f for f in range(p.n_faces) if not p.up(f)]
    if len(minimal) != 1:
        return False, ("minimal-faces", tuple(minimal))
    if len(maximal) != 1:
        return False, ("maximal-faces", tuple(maximal))
    if int(p.rank_of[minimal[0]]) != -1:
        return False, ("least-rank", minimal[0])
    if int(p.rank_of[maximal[0]]) != p.rank:
        return False, ("greatest-rank", maximal[0])
    return True, None


def check_diamond(p: RankedPoset) -> tuple[bool, Optional[tuple]]:
    """Every rank-2 section [F, G] has exactly two middle faces."""
    ok, why = check_flagged(p)
    if not ok:
        raise ValueError(f"poset is not flagged: {why}")
    middles: dict[tuple[int, int], int] = {}
    for f in range(p.n_faces):
        for h in p.up(f):
            for g in p.up(h):
                middles[(f, g)] = middles.get((f, g), 0) + 1
    for (f, g) in sorted(middles):
        if middles[(f, g)] != 2:
            return False, (f, g)
    return True, None


def flags_of(p: RankedPoset) -> list[tuple[int, ...]]:
    """All maximal chains as face tuples indexed by rank+1, sorted."""
    ok, why = check_flagged(p)
    if not ok:
        raise ValueError(f"poset is not flagged: {why}")
    least = p.faces_of_rank(-1)[0]
    flags: list[tuple[int, ...]] = []
    stack: list[int] = [least]

    def grow():
        f = stack[-1]
        if not p.up(f):
            flags.append(tuple(stack))
            return
        for g in p.up(f):
            stack.append(g)
            grow()
            stack.pop()

    grow()
    flags.sort()
    return flags


def _flag_monodromy(p: RankedPoset, flags: list[tuple[int, ...]]) -> np.ndarray:
    """mono[i, f] = index of the i-adjacent flag; requires the diamond condition."""
    n = p.rank
    index = {fl: k for k, fl in enumerate(flags)}
    mono = np.full((n, len(flags)), -1, dtype=np.int64)
    partner: dict[tuple, list[int]] = {}
    for k, fl in enumerate(flags):
        for i in range(n):
            key = (i, fl[:i + 1], fl[i + 2:])
            partner.setdefault(key, []).append(k)
    for key, pair in partner.items():
        if len(pair) != 2:
            i = key[0]
            raise ValueError(f"flag {flags[pair[0]]} has {len(pair) - 1} "
                             f"{i}-adjacent flags, expected exactly 1")
        a, b = pair
        mono[key[0], a] = b
        mono[key[0], b] = a
    return mono


def flag_graph(p: RankedPoset) -> ColoredGraph:
    """Vertices = flags, one link of color i per i-adjacent pair."""
    ok, why = check_diamond(p)
    if not ok:
        raise ValueError(f"diamond condition fails at {why}")
    flags = flags_of(p)
    mono = _flag_monodromy(p, flags)
    edges = []
    for i in range(p.rank):
        for k in range(len(flags)):
            w = int(mono[i, k])
            if k < w:
                edges.append((i, k, w))
    edges.sort()
    return ColoredGraph.from_edges(len(flags), p.rank, edges)


def check_strong_connectedness(p: RankedPoset) -> tuple[bool, Optional[tuple]]:
    """Any two flags are joined by adjacencies moving only where they differ.

    Moving only at ranks where the flags differ keeps every shared face, so
    this is exactly strong flag connectedness.
    """
    ok, why = check_diamond(p)
    if not ok:
        raise ValueError(f"diamond condition fails at {why}")
    flags = flags_of(p)
    mono = _flag_monodromy(p, flags)
    g = flag_graph(p)
    part_cache: dict[frozenset, np.ndarray] = {}
    n_flags = len(flags)
    for a in range(n_flags):
        for b in range(a + 1, n_flags):
            diff = frozenset(i for i in range(p.rank)
                             if flags[a][i + 1] != flags[b][i + 1])
            if diff not in part_cache:
                part_cache[diff] = components(g, diff).labels
            labels = part_cache[diff]
            if labels[a] != labels[b]:
                return False, (flags[a], flags[b])
    return True, None


def polytopality_report(p: RankedPoset) -> PolytopalityReport:
    flagged, witness = check_flagged(p)
    if not flagged:
        return PolytopalityReport(False, False, False, witness)
    diamond, witness = check_diamond(p)
    if not diamond:
        return PolytopalityReport(True, False, False, witness)
    connected, witness = check_strong_connectedness(p)
    return PolytopalityReport(True, True, connected, witness)


def poset_from_maniplex(m: Premaniplex) -> RankedPoset:
    """Faces of rank i = components over all colors but i, ordered by incidence."""
    ok, why = is_maniplex(m)
    if not ok:
        raise ValueError(f"input is not a maniplex: {why}")
    n = m.rank
    level_labels = []
    face_ids: dict[tuple[int, int], int] = {}
    rank_of: list[int] = [-1]
    for i in range(n):
        labels = components(m.graph, [c for c in range(n) if c != i]).labels
        level_labels.append(labels)
        for rep in np.unique(labels):
            face_ids[(i, int(rep))] = len(rank_of)
            rank_of.append(i)
    greatest = len(rank_of)
    rank_of.append(n)
    covers: set[tuple[int, int]] = set()
    for f in face_ids:
        if f[0] == 0:
            covers.add((0, face_ids[f]))
        if f[0] == n - 1:
            covers.add((face_ids[f], greatest))
    for i in range(n - 1):
        lo, hi = level_labels[i], level_labels[i + 1]
        for v in range(m.n_vertices):
            covers.add((face_ids[(i, int(lo[v]))], face_ids[(i + 1, int(hi[v]))]))
    if n == 0:
        covers.add((0, greatest))
    return RankedPoset(n, rank_of, sorted(covers))


def dual_poset(p: RankedPoset) -> RankedPoset:
    """Reverse the order: rank i becomes n-1-i, covers flip."""
    ok, why = check_flagged(p)
    if not ok:
        raise ValueError(f"poset is not flagged: {why}")
    rank_of = p.rank - 1 - p.rank_of
    covers = [(hi, lo) for lo, hi in p.covers]
    return RankedPoset(p.rank, rank_of, covers, p.names)


def _flag_components(mono: np.ndarray) -> list[list[int]]:
    from . import _kernels

    n_flags = mono.shape[1]
    tails = np.tile(np.arange(n_flags), mono.shape[0])
    labels = _kernels.component_labels(n_flags, tails, mono.reshape(-1))
    comps: dict[int, list[int]] = {}
    for f in range(n_flags):
        comps.setdefault(int(labels[f]), []).append(f)
    return [comps[k] for k in sorted(comps)]


def _extend_flag_map(mono_p: np.ndarray, mono_q: np.ndarray, comp: list[int],
                     image: int, phi: np.ndarray) -> bool:
    """Grow phi over one flag component from phi[comp[0]] = image; verify."""
    n = mono_p.shape[0]
    phi[comp[0]] = image
    queue = [comp[0]]
    seen = {comp[0]}
    while queue:
        f = queue.pop()
        for i in range(n):
            g = int(mono_p[i, f])
            w = int(mono_q[i, phi[f]])
            if g in seen:
                if phi[g] != w:
                    return False
            else:
                phi[g] = w
                seen.add(g)
                queue.append(g)
    return len(seen) == len(comp)


def _face_map_from_flags(p: RankedPoset, q: RankedPoset,
                         flags_p: list, flags_q: list,
                         phi: np.ndarray) -> Optional[dict[int, int]]:
    """Induce a face bijection from a flag bijection, or None if inconsistent."""
    face_map: dict[int, int] = {}
    for k, fl in enumerate(flags_p):
        for pos in range(p.rank + 2):
            src, dst = fl[pos], flags_q[phi[k]][pos]
            if face_map.setdefault(src, dst) != dst:
                return None
    if len(face_map) != p.n_faces or len(set(face_map.values())) != q.n_faces:
        return None
    mapped = {(face_map[lo], face_map[hi]) for lo, hi in p.covers}
    if mapped != set(q.covers):
        return None
    return face_map


def poset_isomorphic(p: RankedPoset, q: RankedPoset) -> Optional[dict[int, int]]:
    """An order- and rank-preserving face bijection, or None.

    Flags extend uniquely once one image per flag-graph component is chosen, so
    the search tries base images per component and then checks that the induced
    face map is a well-defined bijection (faces shared between components make
    this a real constraint).
    """
    for poset in (p, q):
        ok, why = check_diamond(poset)
        if not ok:
            raise ValueError(f"diamond condition fails at {why}")
    if p.rank != q.rank or p.n_faces != q.n_faces:
        return None
    for r in range(-1, p.rank + 1):
        if len(p.faces_of_rank(r)) != len(q.faces_of_rank(r)):
            return None
    flags_p, flags_q = flags_of(p), flags_of(q)
    if len(flags_p) != len(flags_q):
        return None
    mono_p = _flag_monodromy(p, flags_p)
    mono_q = _flag_monodromy(q, flags_q)
    comps_p = _flag_components(mono_p)
    comps_q = _flag_components(mono_q)
    if sorted(len(c) for c in comps_p) != sorted(len(c) for c in comps_q):
        return None
    phi = np.full(len(flags_p), -1, dtype=np.int64)

    def assign(idx: int, used: set[int]) -> Optional[dict[int, int]]:
        if idx == len(comps_p):
            return _face_map_from_flags(p, q, flags_p, flags_q, phi)
        comp = comps_p[idx]
        for jdx, comp_q in enumerate(comps_q):
            if jdx in used or len(comp_q) != len(comp):
                continue
            for image in comp_q:
                if _extend_flag_map(mono_p, mono_q, comp, image, phi):
                    result = assign(idx + 1, used | {jdx})
                    if result is not None:
                        return result
        return None

    return assign(0, set())
