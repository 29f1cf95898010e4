"""Caterpillars: path-shaped premaniplexes and their k-orbit polytopes.

A caterpillar is a premaniplex with a unique spanning tree: a path whose
link colors step by exactly one, with every unused color slot filled by a
semi-edge.  Assigning a Boolean voltage to each semi-edge (fresh when its
color touches the incoming link color, copied from the previous vertex
otherwise) always derives the flag graph of a polytope.  Quotients of
caterpillars are the "foldings" of the underlying word, and inspecting the
foldings classifies which caterpillars are full symmetry types; words that
start at color 0 and never return there give polytopes with a Boolean
automorphism group and any prescribed number of flag orbits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .colored_graph import ColoredGraph
from .group import BooleanGroup
from .poset import RankedPoset, poset_from_maniplex
from .premaniplex import Premaniplex, premaniplex_isomorphic
from .symmetry import automorphism_group, flag_orbits, symmetry_type_graph
from .voltage import (VoltageAssignment, check_polytopal_voltage,
                      derived_graph)


@dataclass(frozen=True)
class CaterpillarWord:
    """Link colors along the underlying path, consecutive colors adjacent."""

    rank: int
    word: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(int(c) for c in self.word))
        for c in self.word:
            if not 0 <= c < self.rank:
                raise ValueError(f"color {c} out of range for rank {self.rank}")
        for c, d in zip(self.word, self.word[1:]):
            if abs(c - d) != 1:
                raise ValueError("consecutive colors must differ by exactly one")

    @property
    def length(self) -> int:
        return len(self.word)

    def link_colors(self, v: int) -> set[int]:
        """Colors of the links incident to the v-th path vertex."""
        return set(self.word[max(v - 1, 0):v + 1])


def caterpillar_to_premaniplex(cw: CaterpillarWord) -> Premaniplex:
    """Expand a word into its caterpillar.

    Darts are numbered with the path links first, in word order, then one
    dart per semi-edge ordered by vertex and color.
    """
    k = cw.length
    edges: list[tuple[int, ...]] = [(c, i, i + 1)
                                    for i, c in enumerate(cw.word)]
    for v in range(k + 1):
        taken = cw.link_colors(v)
        edges.extend((c, v) for c in range(cw.rank) if c not in taken)
    return Premaniplex(ColoredGraph.from_edges(k + 1, cw.rank, edges))


def boolean_voltages(cw: CaterpillarWord) -> VoltageAssignment:
    """The Boolean assignment whose derived maniplex is always polytopal.

    Links are trivial.  Every semi-edge of the first vertex gets a fresh
    generator; further along, the color-j semi-edge at vertex i copies the
    one at vertex i-1 when |j - c_i| > 1 and gets a fresh generator when
    |j - c_i| = 1.  Generators are numbered left to right, so the group
    dimension and voltage table are reproducible bit for bit.
    """
    base = caterpillar_to_premaniplex(cw)
    k = cw.length
    volt_of: dict[tuple[int, int], int] = {}
    fresh = 0
    per_dart: dict[int, int] = {}
    dart = 2 * k
    for v in range(k + 1):
        taken = cw.link_colors(v)
        for c in range(cw.rank):
            if c in taken:
                continue
            if v == 0 or abs(c - cw.word[v - 1]) == 1:
                volt_of[(v, c)] = 1 << fresh
                fresh += 1
            else:
                volt_of[(v, c)] = volt_of[(v - 1, c)]
            per_dart[dart] = volt_of[(v, c)]
            dart += 1
    return VoltageAssignment.from_edge_voltages(base, BooleanGroup(fresh),
                                                per_dart)


@dataclass(frozen=True)
class FoldingReport:
    """A quotient of a caterpillar onto a shorter caterpillar.

    The word folds into layers of r+1 vertices read alternately forward
    and backward; a and b hold the free colors at the right and left turn
    points.  Case 1 ends mid-turn (full layers), case 2 ends with a
    forward layer.
    """

    r: int
    quotient_word: tuple[int, ...]
    pattern_case: int
    a: tuple[int, ...]
    b: tuple[int, ...]
    vertex_map: tuple[int, ...]


def _fold_position(i: int, r: int) -> int:
    m = i % (2 * r + 2)
    return m if m <= r else 2 * r + 1 - m


def enumerate_foldings(cw: CaterpillarWord) -> list[FoldingReport]:
    """All ways the word folds onto a proper prefix (or a single vertex).

    For each candidate layer width r+1 the vertex map is forced: indices
    congruent mod 2r+2, directly or via i = -j-1, land together.  The fold
    exists exactly when the letters at mirrored positions agree, turn
    colors being free (for r = 0 every letter is a turn color, so only the
    parity of the word decides the case).
    """
    word = cw.word
    k = cw.length
    out: list[FoldingReport] = []
    for r in range(k):
        period = 2 * r + 2
        rem = (k + 1) % period
        if rem == 0:
            case = 1
        elif rem == r + 1:
            case = 2
        else:
            continue
        a: list[int] = []
        b: list[int] = []
        ok = True
        for p in range(1, k + 1):
            m = (p - 1) % period + 1
            c = word[p - 1]
            if m <= r:
                ok = c == word[m - 1]
            elif m == r + 1:
                a.append(c)
            elif m <= 2 * r + 1:
                ok = c == word[2 * r + 1 - m]
            else:
                b.append(c)
            if not ok:
                break
        if ok:
            out.append(FoldingReport(r, word[:r], case, tuple(a), tuple(b),
                                     tuple(_fold_position(i, r)
                                           for i in range(k + 1))))
    return out


@dataclass(frozen=True)
class CaterpillarClass:
    """Which structural cases a word falls into.

    symmetric: the word is a nonempty palindrome, so flipping the path is
    an extra symmetry.  case3/case4 hold the (r, a, b) data of a folding
    whose turn colors sit at the end of the color range, the only folds
    that can survive as symmetry of the derived polytope.  boolean_stg is
    asserted when none of the other cases apply; the caterpillar is then
    guaranteed to be the full symmetry type of its derived polytope.  The
    cases are not exclusive, so a word caught by case3 or case4 may still
    be a full symmetry type; confirmed records the brute-force answer when
    requested.
    """

    symmetric: bool
    boolean_stg: bool
    case3: Optional[tuple[int, tuple[int, ...], int]]
    case4: Optional[tuple[int, int, int]]
    confirmed: Optional[bool] = None


def classify_caterpillar(cw: CaterpillarWord,
                         confirm: bool = False) -> CaterpillarClass:
    word, n, k = cw.word, cw.rank, cw.length
    symmetric = k >= 1 and word == word[::-1]
    case3 = None
    case4 = None
    if k:
        fixed_bs = [b for c1, b in ((1, 0), (n - 2, n - 1)) if word[0] == c1]
        for rep in enumerate_foldings(cw):
            if rep.r < 1:
                continue
            if rep.pattern_case == 1 and case3 is None:
                for b in fixed_bs:
                    if all(x == b for x in rep.b):
                        case3 = (rep.r, rep.a, b)
                        break
            if rep.pattern_case == 2 and case4 is None:
                if len(set(rep.a)) == 1 and len(set(rep.b)) == 1:
                    a, b = rep.a[0], rep.b[0]
                    pairs = {(1, 0), (n - 2, n - 1)}
                    if (word[0], b) in pairs and (word[rep.r - 1], a) in pairs:
                        case4 = (rep.r, a, b)
    boolean_stg = not (symmetric or case3 or case4)
    confirmed = _confirm_boolean_stg(cw) if confirm else None
    return CaterpillarClass(symmetric, boolean_stg, case3, case4, confirmed)


def _confirm_boolean_stg(cw: CaterpillarWord) -> bool:
    """Whether the caterpillar really is the full symmetry type, by brute force."""
    va = boolean_voltages(cw)
    ok, why = check_polytopal_voltage(va)
    if not ok:
        raise AssertionError(f"caterpillar voltages failed the battery: {why}")
    derived = Premaniplex(derived_graph(va))
    autos = automorphism_group(derived)
    if any(automorphism_order(g) > 2 for g in autos):
        return False
    stg = symmetry_type_graph(derived, autos)
    return premaniplex_isomorphic(stg.premaniplex, va.base) is not None


def automorphism_order(auto) -> int:
    """Order of an automorphism as a flag permutation."""
    perm = auto.flag_perm
    ident = np.arange(perm.shape[0])
    acc = perm
    order = 1
    while not np.array_equal(acc, ident):
        acc = perm[acc]
        order += 1
    return order


def generate_korbit_word(n: int, k: int) -> CaterpillarWord:
    """A word whose derived polytope has exactly k orbits at rank n.

    Starts at color 0 and then alternates 1, 2, so no fold or flip can be
    a symmetry: the word is not a palindrome and color 0 never recurs.
    """
    if n < 3 or k < 3:
        raise ValueError("need rank at least 3 and orbit count at least 3")
    letters = [0] + [1 + i % 2 for i in range(k - 2)]
    return CaterpillarWord(n, tuple(letters))


@dataclass(frozen=True)
class KorbitReport:
    word: tuple[int, ...]
    boolean_dim: int
    n_flags: int
    aut_order: int
    aut_is_boolean: bool
    orbits: int
    stg_is_caterpillar: bool


def build_korbit_polytope(n: int, k: int) -> tuple[RankedPoset, KorbitReport]:
    """Derive the k-orbit rank-n polytope and verify its advertised shape.

    Pipeline: word, Boolean voltages, intersection battery, derived
    maniplex, face poset.  The report records the full automorphism group
    order, whether it is Boolean, the flag orbit count, and whether the
    symmetry type graph is the caterpillar itself.
    """
    cw = generate_korbit_word(n, k)
    va = boolean_voltages(cw)
    ok, why = check_polytopal_voltage(va)
    if not ok:
        raise AssertionError(f"caterpillar voltages failed the battery: {why}")
    derived = Premaniplex(derived_graph(va))
    poset = poset_from_maniplex(derived)
    autos = automorphism_group(derived)
    boolean = all(automorphism_order(g) <= 2 for g in autos)
    orbits = flag_orbits(derived, autos).n_blocks
    stg = symmetry_type_graph(derived, autos)
    matches = premaniplex_isomorphic(stg.premaniplex, va.base) is not None
    report = KorbitReport(cw.word, va.group.dim, derived.n_vertices,
                          len(autos), boolean, orbits, matches)
    return poset, report
