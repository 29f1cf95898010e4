"""Brute-force oracles and small builders shared across the test suite.

Everything here is deliberately slow and dumb: plain-dict BFS, exhaustive
search over permutations or partitions. These routines provide independent
reference values for the optimized library code.
"""

from __future__ import annotations

from collections import deque
from itertools import combinations, permutations

import numpy as np

from maniplexes.colored_graph import ColoredGraph, GraphHomomorphism


def oracle_components(g: ColoredGraph, colors) -> list[int]:
    """Min-vertex component labels by plain BFS over an adjacency dict."""
    colorset = set(colors)
    adj: dict[int, list[int]] = {v: [] for v in range(g.n_vertices)}
    for d in range(g.n_darts):
        if int(g.color[d]) in colorset:
            adj[int(g.initial[d])].append(g.terminal(d))
    labels = [-1] * g.n_vertices
    for s in range(g.n_vertices):
        if labels[s] != -1:
            continue
        seen = {s}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        for v in seen:
            labels[v] = min(seen)
    return labels


def oracle_reachable_darts(g: ColoredGraph, start: int, colorset) -> set[int]:
    """Darts usable from start within the given colors, found by BFS."""
    colorset = set(colorset)
    seen = {start}
    queue = deque([start])
    used: set[int] = set()
    while queue:
        v = queue.popleft()
        for d in range(g.n_darts):
            if int(g.initial[d]) == v and int(g.color[d]) in colorset:
                used.add(d)
                w = g.terminal(d)
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    return used


def oracle_automorphisms(mono: np.ndarray) -> list[tuple[int, ...]]:
    """All vertex permutations commuting with every monodromy map.

    Exhaustive over all permutations; only viable for tiny premaniplexes.
    """
    rank, n = mono.shape
    found = []
    for sigma in permutations(range(n)):
        s = np.asarray(sigma, dtype=np.int64)
        if np.array_equal(s[mono], mono[:, s]):
            found.append(sigma)
    return found


def oracle_maniplex_automorphisms(m) -> list[tuple[int, ...]]:
    """All automorphisms of a connected premaniplex, by base-image trial.

    An automorphism is forced by where it sends flag 0, so every candidate
    image is grown by plain BFS and the completed map is re-verified against
    every monodromy map.  Slower but simpler than the library search.
    """
    mono = m.mono
    rank, n = mono.shape
    found = []
    for target in range(n):
        sigma = {0: target}
        queue = deque([0])
        ok = True
        while queue and ok:
            v = queue.popleft()
            for c in range(rank):
                w, iw = int(mono[c, v]), int(mono[c, sigma[v]])
                if w not in sigma:
                    sigma[w] = iw
                    queue.append(w)
                elif sigma[w] != iw:
                    ok = False
                    break
        if ok and all(sigma[int(mono[c, v])] == int(mono[c, sigma[v]])
                      for c in range(rank) for v in range(n)):
            found.append(tuple(sigma[v] for v in range(n)))
    return found


def ej_hasse_poset():
    """Flagged rank-3 poset on subsets of {1,2,3,4} that fails the diamond rule."""
    from maniplexes.poset import RankedPoset

    names = ["()", "(1)", "(2)", "(3)", "(1,2)", "(2,3)", "(1,2,3)", "(1,2,3,4)"]
    rank_of = [-1, 0, 0, 0, 1, 1, 2, 3]
    covers = [(0, 1), (0, 2), (0, 3),
              (1, 4), (2, 4), (2, 5), (3, 5),
              (4, 6), (5, 6), (6, 7)]
    return RankedPoset(3, rank_of, covers, names)


def _rename_poset(p, rename):
    """Copy a poset applying a face renaming; coincident names merge."""
    from maniplexes.poset import RankedPoset

    new_names = sorted({rename(p.name_of(f)) for f in range(p.n_faces)})
    ids = {nm: k for k, nm in enumerate(new_names)}
    rank_of = [None] * len(new_names)
    for f in range(p.n_faces):
        k = ids[rename(p.name_of(f))]
        r = int(p.rank_of[f])
        assert rank_of[k] in (None, r), "merged faces must share a rank"
        rank_of[k] = r
    covers = {(ids[rename(p.name_of(lo))], ids[rename(p.name_of(hi))])
              for lo, hi in p.covers}
    order = sorted(range(len(new_names)), key=lambda k: (rank_of[k], new_names[k]))
    back = {old: new for new, old in enumerate(order)}
    return RankedPoset(p.rank, [rank_of[k] for k in order],
                       sorted((back[a], back[b]) for a, b in covers),
                       [new_names[k] for k in order])


def glued_cubes_poset():
    """Two 3-cubes sharing their least and greatest faces and one vertex."""
    from maniplexes.library import hypercube_poset
    from maniplexes.poset import RankedPoset

    cube = hypercube_poset(3)
    faces = [("o", -1), ("g", 3)]
    covers = []
    for tag in "AB":
        for f in range(cube.n_faces):
            r = int(cube.rank_of[f])
            nm = cube.name_of(f)
            if r == -1 or r == 3:
                continue
            glued = nm == "000"
            faces.append(("x" if glued else tag + nm, r))
        for lo, hi in cube.covers:
            def nm_of(f):
                r = int(cube.rank_of[f])
                if r == -1:
                    return "o"
                if r == 3:
                    return "g"
                n = cube.name_of(f)
                return "x" if n == "000" else tag + n
            covers.append((nm_of(lo), nm_of(hi)))
    faces = sorted(set(faces), key=lambda t: (t[1], t[0]))
    ids = {nm: k for k, (nm, _) in enumerate(faces)}
    return RankedPoset(3, [r for _, r in faces],
                       sorted({(ids[a], ids[b]) for a, b in covers}),
                       [nm for nm, _ in faces])


def identified_cube_poset():
    """The 3-cube with two opposite vertices identified: a non-polytope."""
    from maniplexes.library import hypercube_poset

    cube = hypercube_poset(3)
    return _rename_poset(cube, lambda nm: "x" if nm in ("000", "111") else nm)


def k4_maniplex():
    """Rank-3 maniplex on 4 flags where the three colors pair flags Klein-style.

    The smallest maniplex violating the weak path intersection property.
    """
    from maniplexes.colored_graph import ColoredGraph
    from maniplexes.premaniplex import Premaniplex

    edges = [(0, 0, 1), (0, 2, 3),
             (1, 0, 2), (1, 1, 3),
             (2, 0, 3), (2, 1, 2)]
    return Premaniplex(ColoredGraph.from_edges(4, 3, edges))


def prism_stg_premaniplex():
    """The 3-vertex symmetry type graph of the triangular prism, built by hand.

    Vertex 0: flags in a triangle; 1: square flags on a horizontal edge;
    2: square flags on a vertical edge.
    """
    from maniplexes.colored_graph import ColoredGraph
    from maniplexes.premaniplex import Premaniplex

    edges = [(0, 0), (1, 0), (2, 0, 1),
             (0, 1), (1, 1, 2),
             (0, 2), (2, 2)]
    return Premaniplex(ColoredGraph.from_edges(3, 3, edges))


def bitflip_maniplex(n: int):
    """Vertices = GF(2)^n, color i flips bit i; the smallest rank-n maniplex."""
    from maniplexes.colored_graph import ColoredGraph
    from maniplexes.premaniplex import Premaniplex

    edges = []
    for v in range(2 ** n):
        for i in range(n):
            w = v ^ (1 << i)
            if v < w:
                edges.append((i, v, w))
    return Premaniplex(ColoredGraph.from_edges(2 ** n, n, edges))


def caterpillar01_premaniplex():
    """Three-vertex path with links 0, 1 and the complementary semi-edges.

    Dart ids: 0/1 the color-0 link, 2/3 the color-1 link, then semi-edges
    4 (color 1 at vertex 0), 5 (color 2 at vertex 0), 6 (color 2 at
    vertex 1), 7 (color 0 at vertex 2), 8 (color 2 at vertex 2).
    """
    from maniplexes.premaniplex import Premaniplex

    g = ColoredGraph.from_edges(3, 3, [(0, 0, 1), (1, 1, 2), (1, 0),
                                       (2, 0), (2, 1), (0, 2), (2, 2)])
    return Premaniplex(g)


def nonabelian_voltage():
    """Two-vertex rank-3 base with S4 voltages off the spanning tree.

    The color-1 link carries a 4-cycle, so tree voltages within two-color
    subgraphs are nontrivial elements of a nonabelian group; any left/right
    mix-up in coset bookkeeping shows up here but not on Boolean fixtures.
    Derives a polytopal 48-flag maniplex.
    """
    from maniplexes.group import TableGroup
    from maniplexes.premaniplex import Premaniplex
    from maniplexes.voltage import VoltageAssignment

    base = Premaniplex(ColoredGraph.from_edges(2, 3, [
        (0, 0, 1), (1, 0, 1), (2, 0), (2, 1)]))
    s4 = TableGroup.from_permutations([(1, 0, 2, 3), (1, 2, 3, 0)])
    # element 1 is the transposition, element 2 the 4-cycle
    return VoltageAssignment.from_edge_voltages(base, s4, {2: 2, 4: 1, 5: 1})


def premaniplex_congruences(m) -> list[tuple[int, ...]]:
    """All vertex partitions of a premaniplex that descend to a quotient.

    A partition works exactly when every monodromy map sends whole classes
    to whole classes.  Exhaustive over all Bell(n) partitions, generated as
    restricted growth strings, so only viable for small premaniplexes.
    """
    n = m.n_vertices
    mono = m.mono

    def closed(labels):
        for c in range(m.rank):
            image: dict[int, int] = {}
            for v in range(n):
                b = labels[v]
                ib = labels[int(mono[c, v])]
                if image.setdefault(b, ib) != ib:
                    return False
        return True

    out: list[tuple[int, ...]] = []

    def grow(prefix, mx):
        if len(prefix) == n:
            if closed(prefix):
                out.append(tuple(prefix))
            return
        for val in range(mx + 2):
            prefix.append(val)
            grow(prefix, max(mx, val))
            prefix.pop()

    grow([0], 0)
    return out


def oracle_quotient(m, labels):
    """Quotient premaniplex of a congruence, one vertex per class."""
    from maniplexes.premaniplex import Premaniplex

    order: dict[int, int] = {}
    for b in labels:
        order.setdefault(b, len(order))
    relab = [order[b] for b in labels]
    rep = [relab.index(b) for b in range(len(order))]
    edges = []
    for b, v in enumerate(rep):
        for c in range(m.rank):
            b2 = relab[int(m.mono[c, v])]
            if b2 == b:
                edges.append((c, b))
            elif b < b2:
                edges.append((c, b, b2))
    return Premaniplex(ColoredGraph.from_edges(len(rep), m.rank, edges))


def oracle_lattice_automorphisms(p) -> list[dict[int, int]]:
    """Order automorphisms of an atomic lattice by brute vertex permutation.

    Every face is identified with its set of rank-0 faces, so a candidate
    automorphism is a vertex permutation that maps face vertex-sets onto
    face vertex-sets; covers then come along for free.
    """
    verts = p.faces_of_rank(0)
    below: dict[int, frozenset] = {}
    for f in range(p.n_faces):
        down = {f}
        frontier = [f]
        while frontier:
            g = frontier.pop()
            for h in p.down(g):
                if h not in down:
                    down.add(h)
                    frontier.append(h)
        below[f] = frozenset(v for v in down if v in set(verts))
    by_set = {(int(p.rank_of[f]), below[f]): f for f in range(p.n_faces)}
    assert len(by_set) == p.n_faces  # vertex sets pin faces within a rank
    autos = []
    for perm in permutations(verts):
        sigma = dict(zip(verts, perm))
        image: dict[int, int] = {}
        for f in range(p.n_faces):
            key = (int(p.rank_of[f]), frozenset(sigma[v] for v in below[f])
                   if below[f] else below[f])
            g = by_set.get(key)
            if g is None:
                break
            image[f] = g
        else:
            if {(image[a], image[b]) for a, b in p.covers} == set(p.covers):
                autos.append(image)
    return autos


def rank3_maniplexes(max_flags: int) -> list:
    """Every rank-3 maniplex with at most max_flags flags, up to isomorphism.

    Low-index style search: flags appear in discovery order, the first
    undefined (flag, color) cell branches over compatible existing flags or
    one fresh flag, and the commuting relation between colors 0 and 2 is
    propagated eagerly.  Completed tables are deduplicated by the minimal
    breadth-first relabeling over all base flags.
    """
    from maniplexes.premaniplex import Premaniplex

    r = [[-1] * max_flags for _ in range(3)]
    found: dict[tuple, tuple] = {}

    def undo(trail):
        for c, v in trail:
            r[c][v] = -1

    def assign(c: int, v: int, w: int, n: int, trail) -> bool:
        # involution pair (v w) of color c, keeping the graph simple
        if v == w or r[c][w] != -1:
            return False
        if any(r[o][v] == w for o in range(3) if o != c):
            return False
        r[c][v] = w
        r[c][w] = v
        trail.extend([(c, v), (c, w)])
        return True

    def propagate(n: int, trail) -> bool:
        changed = True
        while changed:
            changed = False
            for u in range(n):
                a, b = r[0][u], r[2][u]
                if a == -1 or b == -1:
                    continue
                x, y = r[2][a], r[0][b]
                if x == -1 and y == -1:
                    continue
                t = x if x != -1 else y
                for c, src in ((2, a), (0, b)):
                    if r[c][src] == t:
                        continue
                    if r[c][src] != -1 or not assign(c, src, t, n, trail):
                        return False
                    changed = True
        return True

    def certificate(n: int) -> tuple:
        best = None
        for base in range(n):
            relab = {base: 0}
            order = [base]
            for v in order:
                for c in range(3):
                    w = r[c][v]
                    if w not in relab:
                        relab[w] = len(relab)
                        order.append(w)
            rows = tuple(tuple(relab[r[c][v]] for v in order)
                         for c in range(3))
            if best is None or rows < best:
                best = rows
        return best

    def first_hole(n: int):
        for v in range(n):
            for c in range(3):
                if r[c][v] == -1:
                    return v, c
        return None

    def search(n: int):
        hole = first_hole(n)
        if hole is None:
            found.setdefault(certificate(n), (n, tuple(map(tuple, r))))
            return
        v, c = hole
        for w in list(range(n)) + ([n] if n < max_flags else []):
            trail: list[tuple[int, int]] = []
            grown = n + 1 if w == n else n
            if assign(c, v, w, grown, trail) and propagate(grown, trail):
                search(grown)
            undo(trail)

    r[0][0] = 1
    r[0][1] = 0
    search(2)
    out = []
    for n, rows in sorted(found.values()):
        edges = [(c, v, rows[c][v]) for c in range(3)
                 for v in range(n) if v < rows[c][v]]
        out.append(Premaniplex(ColoredGraph.from_edges(n, 3, edges)))
    return out


def fixture_documents() -> dict:
    """The checked-in fixtures/ corpus, keyed by filename.

    A test regenerates these and compares bytes, so the files cannot
    drift from the code that defines them.
    """
    from maniplexes.caterpillar import CaterpillarWord, boolean_voltages
    from maniplexes.group import TableGroup
    from maniplexes.io_json import (face_chain_names, serialize_graph,
                                    serialize_poset, serialize_voltage)
    from maniplexes.library import (hypercube_poset, point_premaniplex,
                                    prism_poset, simplex_poset)
    from maniplexes.poset import flag_graph
    from maniplexes.voltage import VoltageAssignment

    tetra = simplex_poset(3)
    s4 = TableGroup.from_permutations(
        [(1, 0, 2, 3), (0, 2, 1, 3), (0, 1, 3, 2)])
    s4_point = VoltageAssignment.from_edge_voltages(
        point_premaniplex(3), s4, {0: 1, 1: 2, 2: 3})
    return {
        "tetra_flaggraph.json": serialize_graph(
            flag_graph(tetra), face_chain_names(tetra)),
        "tetra_poset.json": serialize_poset(tetra),
        "prism_poset.json": serialize_poset(prism_poset(3)),
        "cube_poset.json": serialize_poset(hypercube_poset(3)),
        "prism_stg.json": serialize_graph(
            prism_stg_premaniplex().graph, ("o0", "o1", "o2")),
        "k4_graph.json": serialize_graph(
            k4_maniplex().graph, ("p", "q", "r", "s")),
        "cat01_voltage.json": serialize_voltage(
            boolean_voltages(CaterpillarWord(3, (0, 1))),
            ("x0", "x1", "x2")),
        "s4_point_voltage.json": serialize_voltage(s4_point, ("pt",)),
        "glued_cubes_poset.json": serialize_poset(glued_cubes_poset()),
        "ejhasse_poset.json": serialize_poset(ej_hasse_poset()),
    }


def voltage_from_projection(m, autos, stg):
    """Reverse-engineer dart voltages on a symmetry type graph.

    Picks one representative flag per orbit vertex; the voltage of a dart
    u -> w of color c is the unique automorphism sending the representative
    of w to the c-neighbour of the representative of u.
    """
    from maniplexes.group import TableGroup
    from maniplexes.voltage import VoltageAssignment

    table = TableGroup.from_permutations(
        tuple(int(v) for v in a.flag_perm) for a in autos)
    reps: dict[int, int] = {}
    for flag in range(m.n_vertices):
        reps.setdefault(int(stg.projection.vertex_map[flag]), flag)
    g = stg.premaniplex.graph
    volt = np.zeros(g.n_darts, dtype=np.int64)
    for d in range(g.n_darts):
        u, w, c = int(g.initial[d]), g.terminal(d), int(g.color[d])
        target = int(m.mono[c, reps[u]])
        volt[d] = next(i for i, p in enumerate(table.labels)
                       if p[reps[w]] == target)
    return table, VoltageAssignment(stg.premaniplex, table, volt)
