"""Polytopes assembled as coset geometries of a voltage group.

A polytopal voltage assignment on a premaniplex X determines a polytope
without ever expanding its flags: the rank-i faces are the right cosets of
the closed-path voltage groups over all colors but i, one coset family per
component of X with color i removed, and two faces are incident exactly when
suitably translated cosets meet.  The voltage group acts on the result by
right multiplication with X as its symmetry type graph, though the full
automorphism group may be larger.  A string C-group is the one-vertex
special case, built directly from its parabolic subgroups.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .colored_graph import GraphPath, components
from .group import (CosetHandle, check_string_c_group, closure,
                    coset_intersect)
from .poset import RankedPoset, flag_graph, flags_of
from .premaniplex import Premaniplex
from .symmetry import automorphism_group, flag_orbits
from .voltage import (PiGenerators, VoltageAssignment,
                      check_polytopal_voltage, pi_generators)


@dataclass(frozen=True)
class CosetFace:
    """A face: a right coset tagged with its rank and base component.

    Equal subgroups arising at different ranks or components stay distinct
    faces, so equality is on the whole triple.  The two improper faces carry
    coset None and component -1.
    """

    rank: int
    component: int
    coset: Optional[CosetHandle]


@dataclass(frozen=True, eq=False)
class ChoiceData:
    """The deterministic base vertices and connecting paths of a build.

    labels[i][y] is the base vertex of the component of y over all colors
    but i (the minimum vertex id), and pi[(i, x)] carries that component's
    spanning tree rooted at its base vertex x together with the coset
    subgroup and the tree-path voltages alpha(i, y).
    """

    va: VoltageAssignment
    labels: tuple[np.ndarray, ...]
    pi: dict[tuple[int, int], PiGenerators]

    def base(self, i: int, y: int) -> int:
        return int(self.labels[i][y])

    def alpha(self, i: int, y: int) -> int:
        return self.pi[(i, self.base(i, y))].tree_voltages[y]

    def path(self, i: int, y: int) -> GraphPath:
        """The tree path from the base vertex of y's component to y."""
        g = self.va.base.graph
        x = self.base(i, y)
        into = {g.terminal(d): d for d in self.pi[(i, x)].tree}
        darts: list[int] = []
        at = y
        while at != x:
            d = into[at]
            darts.append(d)
            at = int(g.initial[d])
        return GraphPath.from_darts(g, x, darts[::-1])


def choice_data(va: VoltageAssignment) -> ChoiceData:
    g = va.base.graph
    labels = []
    pi: dict[tuple[int, int], PiGenerators] = {}
    for i in range(g.rank):
        other = [c for c in range(g.rank) if c != i]
        part = components(g, other)
        labels.append(part.labels)
        for x in sorted({int(v) for v in part.labels}):
            pi[(i, x)] = pi_generators(va, x, other)
    return ChoiceData(va, tuple(labels), pi)


def _translated_cosets_meet(group, a: CosetHandle, ai,
                            b: CosetHandle, aj) -> bool:
    """Whether the left translates ai·a and aj·b share an element."""
    H, K = a.subgroup, b.subgroup
    if H.basis is not None:
        # abelian, so a left translate is again a right coset
        ta = CosetHandle(H, group.op(ai, a.rep), "right")
        tb = CosetHandle(K, group.op(aj, b.rep), "right")
        return coset_intersect(ta, tb) is not None
    if K.size < H.size:
        return _translated_cosets_meet(group, b, aj, a, ai)
    inv_aj = group.inv(aj)
    inv_rep = group.inv(b.rep)
    for h in H.elements():
        tau = group.op(group.op(ai, h), a.rep)
        if K.contains(group.op(group.op(inv_aj, tau), inv_rep)):
            return True
    return False


def _coset_column(group, sub) -> list[CosetHandle]:
    """All right cosets of sub, ordered by canonical representative."""
    seen: dict[int, CosetHandle] = {}
    for g in group.elements():
        ch = CosetHandle(sub, int(g), "right")
        seen.setdefault(ch.rep, ch)
    return [seen[r] for r in sorted(seen)]


def build_coset_polytope(va: VoltageAssignment) -> RankedPoset:
    """The polytope whose rank-i faces are right closed-path-group cosets.

    A rank-i face sits under a rank-(i+1) face when, for some vertex y in
    both base components, the cosets translated by the tree-path voltages
    alpha(i, y) and alpha(i+1, y) intersect.  The result is isomorphic to
    the face poset of the derived maniplex, and face names are the
    CosetFace triples so the right multiplication action stays readable.
    """
    ok, why = check_polytopal_voltage(va)
    if not ok:
        raise ValueError(f"voltage assignment is not polytopal: {why}")
    g, group = va.base.graph, va.group
    n = g.rank
    choice = choice_data(va)
    names: list[CosetFace] = [CosetFace(-1, -1, None)]
    rank_of: list[int] = [-1]
    levels: list[list[int]] = []
    for i in range(n):
        start = len(names)
        for x in sorted({int(v) for v in choice.labels[i]}):
            sub = choice.pi[(i, x)].subgroup
            names.extend(CosetFace(i, x, ch) for ch in _coset_column(group, sub))
        levels.append(list(range(start, len(names))))
        rank_of.extend([i] * (len(names) - start))
    top = len(names)
    names.append(CosetFace(n, -1, None))
    rank_of.append(n)
    if n == 0:
        return RankedPoset(0, rank_of, [(0, top)], names)
    covers = [(0, f) for f in levels[0]] + [(f, top) for f in levels[-1]]
    for i in range(n - 1):
        shared: dict[tuple[int, int], list[int]] = {}
        for y in range(g.n_vertices):
            key = (choice.base(i, y), choice.base(i + 1, y))
            shared.setdefault(key, []).append(y)
        for fid in levels[i]:
            F = names[fid]
            for gid in levels[i + 1]:
                G = names[gid]
                for y in shared.get((F.component, G.component), ()):
                    if _translated_cosets_meet(group, F.coset,
                                               choice.alpha(i, y),
                                               G.coset,
                                               choice.alpha(i + 1, y)):
                        covers.append((fid, gid))
                        break
    return RankedPoset(n, rank_of, covers, names)


def build_regular_polytope(group, gens: Sequence) -> RankedPoset:
    """The polytope of a string C-group, one right parabolic coset per face.

    Rank-i faces are the right cosets of the subgroup generated by all
    generators but the i-th; a face sits under a higher one when the cosets
    intersect.  Coincides with build_coset_polytope over the one-vertex
    premaniplex whose color-i semi-edge carries gens[i].
    """
    gens = tuple(gens)
    ok, why = check_string_c_group(gens, group)
    if not ok:
        raise ValueError(f"generators do not form a string C-group: {why}")
    n = len(gens)
    names: list[CosetFace] = [CosetFace(-1, -1, None)]
    rank_of: list[int] = [-1]
    levels: list[list[int]] = []
    for i in range(n):
        sub = closure(group, [r for t, r in enumerate(gens) if t != i])
        start = len(names)
        names.extend(CosetFace(i, 0, ch) for ch in _coset_column(group, sub))
        levels.append(list(range(start, len(names))))
        rank_of.extend([i] * (len(names) - start))
    top = len(names)
    names.append(CosetFace(n, -1, None))
    rank_of.append(n)
    if n == 0:
        return RankedPoset(0, rank_of, [(0, top)], names)
    covers = [(0, f) for f in levels[0]] + [(f, top) for f in levels[-1]]
    for i in range(n - 1):
        for fid in levels[i]:
            for gid in levels[i + 1]:
                if coset_intersect(names[fid].coset,
                                   names[gid].coset) is not None:
                    covers.append((fid, gid))
    return RankedPoset(n, rank_of, covers, names)


@dataclass(frozen=True)
class OrbitReport:
    group_orbits: int
    full_orbits: int

    @property
    def extra_symmetry(self) -> bool:
        return self.full_orbits != self.group_orbits


def coset_face_action(p: RankedPoset, group, sigma) -> list[int]:
    """Face permutation induced by right multiplication by sigma."""
    if p.names is None or not all(isinstance(f, CosetFace) for f in p.names):
        raise ValueError("poset does not carry coset faces")
    index = {f: k for k, f in enumerate(p.names)}
    image = [0] * p.n_faces
    for f, k in index.items():
        if f.coset is None:
            image[k] = k
            continue
        moved = CosetHandle(f.coset.subgroup, group.op(f.coset.rep, sigma),
                            "right")
        image[k] = index[CosetFace(f.rank, f.component, moved)]
    return image


def group_action_orbits(p: RankedPoset, va: VoltageAssignment) -> OrbitReport:
    """Flag orbit counts of the prescribed action and of all automorphisms.

    Right multiplication gives one flag orbit per base vertex; the full
    automorphism group of the rebuilt polytope can only merge those orbits,
    and extra_symmetry reports when it does.
    """
    if p.names is None or not all(isinstance(f, CosetFace) for f in p.names):
        raise ValueError("poset does not carry coset faces")
    group = va.group
    flags = flags_of(p)
    flag_index = {fl: k for k, fl in enumerate(flags)}
    parent = list(range(len(flags)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for sigma in group.elements():
        image = coset_face_action(p, group, int(sigma))
        for k, fl in enumerate(flags):
            j = flag_index[tuple(image[f] for f in fl)]
            ra, rb = find(k), find(j)
            if ra != rb:
                parent[rb] = ra
    group_orbits = len({find(k) for k in range(len(flags))})
    m = Premaniplex(flag_graph(p))
    full_orbits = flag_orbits(m, automorphism_group(m)).n_blocks
    return OrbitReport(group_orbits, full_orbits)
