"""Stock face lattices and premaniplexes used as working examples."""

from __future__ import annotations

from itertools import combinations

from .colored_graph import ColoredGraph
from .poset import RankedPoset, flag_graph
from .premaniplex import Premaniplex


def _poset_from_named(rank: int, faces: list[tuple[object, int]],
                      covers: list[tuple[object, object]]) -> RankedPoset:
    """Assign dense ids in (rank, insertion) order and build the poset."""
    faces = sorted(faces, key=lambda t: (t[1], str(t[0])))
    ids = {name: k for k, (name, _) in enumerate(faces)}
    return RankedPoset(rank, [r for _, r in faces],
                       [(ids[a], ids[b]) for a, b in covers],
                       names=[str(name) for name, _ in faces])


def polygon_poset(s: int) -> RankedPoset:
    """Face lattice of an s-gon (rank 2)."""
    if s < 3:
        raise ValueError("a polygon needs at least 3 vertices")
    faces: list[tuple[object, int]] = [("o", -1), ("g", 2)]
    covers: list[tuple[object, object]] = []
    for i in range(s):
        faces.append((f"v{i}", 0))
        faces.append((f"e{i}", 1))
        covers.append(("o", f"v{i}"))
        covers.append((f"e{i}", "g"))
        covers.append((f"v{i}", f"e{i}"))
        covers.append((f"v{(i + 1) % s}", f"e{i}"))
    return _poset_from_named(2, faces, covers)


def simplex_poset(n: int) -> RankedPoset:
    """Face lattice of the n-simplex: i-faces are the (i+1)-subsets of n+1 points."""
    if n < 0:
        raise ValueError("rank must be nonnegative")
    points = range(n + 1)
    faces: list[tuple[object, int]] = []
    covers: list[tuple[object, object]] = []
    for size in range(n + 2):
        for sub in combinations(points, size):
            faces.append((sub, size - 1))
            if size:
                for drop in sub:
                    smaller = tuple(x for x in sub if x != drop)
                    covers.append((smaller, sub))
    return _poset_from_named(n, faces, covers)


def hypercube_poset(n: int) -> RankedPoset:
    """Face lattice of the n-cube: faces are words over {0,1,*}, rank = stars."""
    if n < 1:
        raise ValueError("rank must be at least 1")
    faces: list[tuple[object, int]] = [("o", -1)]
    covers: list[tuple[object, object]] = []
    words = [""]
    for _ in range(n):
        words = [w + ch for w in words for ch in "01*"]
    for w in words:
        r = w.count("*")
        faces.append((w, r))
        if r == 0:
            covers.append(("o", w))
        for pos, ch in enumerate(w):
            if ch == "*":
                for bit in "01":
                    covers.append((w[:pos] + bit + w[pos + 1:], w))
    return _poset_from_named(n, faces, covers)


def prism_poset(s: int) -> RankedPoset:
    """Face lattice of the s-gonal prism (rank 3)."""
    if s < 3:
        raise ValueError("a prism needs an s-gon base with s >= 3")
    faces: list[tuple[object, int]] = [("o", -1), ("g", 3), ("bot", 2), ("top", 2)]
    covers: list[tuple[object, object]] = [("bot", "g"), ("top", "g")]
    for lvl in "bt":
        for i in range(s):
            faces.append((f"{lvl}v{i}", 0))
            faces.append((f"{lvl}e{i}", 1))
            covers.append(("o", f"{lvl}v{i}"))
            covers.append((f"{lvl}v{i}", f"{lvl}e{i}"))
            covers.append((f"{lvl}v{(i + 1) % s}", f"{lvl}e{i}"))
            covers.append((f"{lvl}e{i}", "bot" if lvl == "b" else "top"))
    for i in range(s):
        faces.append((f"me{i}", 1))
        faces.append((f"sq{i}", 2))
        covers.append((f"bv{i}", f"me{i}"))
        covers.append((f"tv{i}", f"me{i}"))
        covers.append((f"sq{i}", "g"))
        for e in (f"me{i}", f"me{(i + 1) % s}", f"be{i}", f"te{i}"):
            covers.append((e, f"sq{i}"))
    return _poset_from_named(3, faces, covers)


def flag_premaniplex(p: RankedPoset) -> Premaniplex:
    return Premaniplex(flag_graph(p))


def polygon_maniplex(s: int) -> Premaniplex:
    """The 2s-cycle with alternating colors 0, 1, built directly."""
    if s < 3:
        raise ValueError("a polygon needs at least 3 vertices")
    edges = [(k % 2, k, (k + 1) % (2 * s)) for k in range(2 * s)]
    return Premaniplex(ColoredGraph.from_edges(2 * s, 2, edges))


def point_premaniplex(n: int) -> Premaniplex:
    """One vertex carrying a semi-edge of every color in [0, n)."""
    return Premaniplex(ColoredGraph.from_edges(1, n, [(c, 0) for c in range(n)]))
