"""Caterpillar words, their Boolean voltages, foldings, and k-orbit polytopes.

Voltage tables and symmetry counts asserted here were derived by hand from
the fresh/copy recursion and double-checked against the brute-force
automorphism search, so they act as frozen regression values.
"""

from __future__ import annotations

from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import (caterpillar01_premaniplex, oracle_quotient,
                     premaniplex_congruences)
from maniplexes.caterpillar import (
    CaterpillarWord,
    automorphism_order,
    boolean_voltages,
    build_korbit_polytope,
    caterpillar_to_premaniplex,
    classify_caterpillar,
    enumerate_foldings,
    generate_korbit_word,
)
from maniplexes.library import point_premaniplex, simplex_poset
from maniplexes.poset import flag_graph, polytopality_report, poset_from_maniplex
from maniplexes.premaniplex import Premaniplex, is_maniplex, premaniplex_isomorphic
from maniplexes.symmetry import automorphism_group, flag_orbits, symmetry_type_graph
from maniplexes.voltage import check_polytopal_voltage, derived_graph


def walk_words(n, max_len):
    """Every valid word of length at most max_len at the given rank."""
    out = [()]

    def grow(w):
        if len(w) == max_len:
            return
        for c in (w[-1] - 1, w[-1] + 1):
            if 0 <= c < n:
                out.append(w + (c,))
                grow(w + (c,))

    for c in range(n):
        out.append((c,))
        grow((c,))
    return out


def semi_voltages(va):
    """Map (vertex, color) -> voltage over the semi-edges of the base."""
    g = va.base.graph
    return {(int(g.initial[d]), int(g.color[d])): int(va.volt[d])
            for d in range(g.n_darts) if int(g.inverse[d]) == d}


def blocks_of(labels):
    groups: dict[int, set[int]] = {}
    for v, b in enumerate(labels):
        groups.setdefault(b, set()).add(v)
    return frozenset(frozenset(s) for s in groups.values())


class TestCaterpillarWord:
    def test_rejects_color_jumps(self):
        with pytest.raises(ValueError, match="differ by exactly one"):
            CaterpillarWord(3, (0, 2))

    def test_rejects_out_of_range_colors(self):
        with pytest.raises(ValueError, match="out of range"):
            CaterpillarWord(3, (0, 1, 2, 3))
        with pytest.raises(ValueError, match="out of range"):
            CaterpillarWord(3, (-1, 0))

    def test_link_colors(self):
        cw = CaterpillarWord(3, (0, 1))
        assert cw.link_colors(0) == {0}
        assert cw.link_colors(1) == {0, 1}
        assert cw.link_colors(2) == {1}
        assert CaterpillarWord(3, ()).link_colors(0) == set()
        assert cw.length == 2


class TestCaterpillarGraph:
    def test_matches_handmade_three_vertex_path(self):
        built = caterpillar_to_premaniplex(CaterpillarWord(3, (0, 1))).graph
        hand = caterpillar01_premaniplex().graph
        assert built.n_vertices == hand.n_vertices
        assert np.array_equal(built.initial, hand.initial)
        assert np.array_equal(built.inverse, hand.inverse)
        assert np.array_equal(built.color, hand.color)

    def test_empty_word_is_the_point(self):
        built = caterpillar_to_premaniplex(CaterpillarWord(3, ())).graph
        pt = point_premaniplex(3).graph
        assert np.array_equal(built.initial, pt.initial)
        assert np.array_equal(built.inverse, pt.inverse)
        assert np.array_equal(built.color, pt.color)

    def test_palindrome_word_layout(self):
        # links in word order first, then semi-edges by vertex and color
        g = caterpillar_to_premaniplex(CaterpillarWord(3, (0, 1, 0))).graph
        assert g.n_vertices == 4
        links = [(int(g.color[d]), int(g.initial[d]), g.terminal(d))
                 for d in range(0, 6, 2)]
        assert links == [(0, 0, 1), (1, 1, 2), (0, 2, 3)]
        semis = [(int(g.color[d]), int(g.initial[d]))
                 for d in range(6, g.n_darts)]
        assert semis == [(1, 0), (2, 0), (2, 1), (2, 2), (1, 3), (2, 3)]

    @pytest.mark.parametrize("word", [(), (1,), (0, 1), (2, 1, 0, 1)])
    def test_one_dart_per_color_per_vertex(self, word):
        cw = CaterpillarWord(3, word)
        x = caterpillar_to_premaniplex(cw)
        assert x.graph.n_darts == 3 * (len(word) + 1)
        ok, why = is_maniplex(x)
        assert not ok and why.startswith("semi-edge")

    def test_links_are_the_unique_spanning_tree(self):
        from maniplexes.colored_graph import spanning_forest

        g = caterpillar_to_premaniplex(CaterpillarWord(4, (1, 2, 3, 2))).graph
        tree = spanning_forest(g)
        assert tree == [0, 2, 4, 6]
        # every dart outside the links is a semi-edge, so no other tree exists
        for d in range(8, g.n_darts):
            assert int(g.inverse[d]) == d


class TestBooleanVoltages:
    def test_point_gets_one_generator_per_color(self):
        va = boolean_voltages(CaterpillarWord(3, ()))
        assert va.group.dim == 3
        assert list(va.volt) == [1, 2, 4]

    def test_word_01_table(self):
        va = boolean_voltages(CaterpillarWord(3, (0, 1)))
        assert va.group.dim == 4
        assert list(va.volt) == [0, 0, 0, 0, 1, 2, 2, 4, 8]

    def test_word_010_table(self):
        # vertex 3 copies the color-2 voltage across the whole tail
        va = boolean_voltages(CaterpillarWord(3, (0, 1, 0)))
        assert va.group.dim == 4
        assert list(va.volt) == [0] * 6 + [1, 2, 2, 4, 8, 4]

    def test_base_is_the_caterpillar(self):
        cw = CaterpillarWord(4, (1, 2))
        va = boolean_voltages(cw)
        cat = caterpillar_to_premaniplex(cw).graph
        assert np.array_equal(va.base.graph.initial, cat.initial)
        assert np.array_equal(va.base.graph.color, cat.color)

    @pytest.mark.parametrize("word", [(0,), (0, 1), (1, 0, 1), (0, 1, 2, 1)])
    def test_adjacent_semi_edges_share_voltage_iff_far_from_link(self, word):
        cw = CaterpillarWord(3, word)
        volt = semi_voltages(boolean_voltages(cw))
        for i in range(1, len(word) + 1):
            c_i = word[i - 1]
            for r in range(3):
                for s in range(3):
                    if (i - 1, r) in volt and (i, s) in volt:
                        same = volt[(i, s)] == volt[(i - 1, r)]
                        assert same == (r == s and abs(r - c_i) != 1)

    @pytest.mark.parametrize("word", [(1, 0, 1), (0, 1, 2, 1), (2, 1, 2, 1)])
    def test_equal_voltages_fill_the_whole_interval(self, word):
        cw = CaterpillarWord(3, word)
        volt = semi_voltages(boolean_voltages(cw))
        for (i, r), gamma in volt.items():
            for (j, s), gamma2 in volt.items():
                if r != s or gamma != gamma2 or i >= j:
                    continue
                for ell in range(i + 1, j):
                    assert volt.get((ell, r)) == gamma

    @pytest.mark.parametrize("n", [3, 4])
    def test_step_direction_phrasing_is_identical(self, n):
        # same recursion stated through delta_i = c_{i+1} - c_i: internal
        # vertices get a fresh generator only at color c_i - delta_i, the
        # last vertex at both neighbours of c_k
        for word in walk_words(n, 4):
            cw = CaterpillarWord(n, word)
            k = len(word)
            volt: dict[tuple[int, int], int] = {}
            fresh = 0
            for v in range(k + 1):
                for c in range(n):
                    if c in cw.link_colors(v):
                        continue
                    if v == 0:
                        new = True
                    elif v < k:
                        new = c == 2 * word[v - 1] - word[v]
                    else:
                        new = abs(c - word[k - 1]) == 1
                    if new:
                        volt[(v, c)] = 1 << fresh
                        fresh += 1
                    else:
                        volt[(v, c)] = volt[(v - 1, c)]
            va = boolean_voltages(cw)
            assert va.group.dim == fresh
            assert semi_voltages(va) == volt

    def test_every_word_passes_the_intersection_battery(self):
        for word in walk_words(3, 3):
            va = boolean_voltages(CaterpillarWord(3, word))
            ok, why = check_polytopal_voltage(va)
            assert ok, (word, why)
            derived = Premaniplex(derived_graph(va))
            assert is_maniplex(derived)[0]
            assert derived.n_vertices == (len(word) + 1) * va.group.order

    @pytest.mark.parametrize("word,dim", [((0, 1), 4), ((1, 0, 1), 5)])
    def test_derived_face_poset_is_a_polytope(self, word, dim):
        va = boolean_voltages(CaterpillarWord(3, word))
        assert va.group.dim == dim
        poset = poset_from_maniplex(Premaniplex(derived_graph(va)))
        assert polytopality_report(poset).is_polytope

    @settings(max_examples=60, deadline=None)
    @given(st.integers(3, 4), st.integers(0, 3), st.lists(st.booleans(), max_size=4))
    def test_random_words_derive_maniplexes(self, n, start, steps):
        if start >= n:
            return
        word = []
        c = start
        for up in steps:
            c = c + 1 if up else c - 1
            if not 0 <= c < n:
                return
            word.append(c)
        va = boolean_voltages(CaterpillarWord(n, (start, *word)))
        assert check_polytopal_voltage(va)[0]
        assert is_maniplex(Premaniplex(derived_graph(va)))[0]


class TestFoldings:
    def test_empty_word_has_no_folds(self):
        assert enumerate_foldings(CaterpillarWord(3, ())) == []

    def test_word_01_folds_only_onto_the_point(self):
        reps = enumerate_foldings(CaterpillarWord(3, (0, 1)))
        assert len(reps) == 1
        rep = reps[0]
        assert (rep.r, rep.quotient_word, rep.pattern_case) == (0, (), 2)
        assert (rep.a, rep.b) == ((0,), (1,))
        assert rep.vertex_map == (0, 0, 0)

    def test_palindrome_folds(self):
        reps = enumerate_foldings(CaterpillarWord(3, (0, 1, 0)))
        assert [(r.r, r.pattern_case, r.a, r.b, r.vertex_map) for r in reps] == [
            (0, 1, (0, 0), (1,), (0, 0, 0, 0)),
            (1, 1, (1,), (), (0, 1, 1, 0)),
        ]
        assert reps[1].quotient_word == (0,)

    def test_seven_letter_word_folds(self):
        reps = enumerate_foldings(CaterpillarWord(3, (1, 2, 1, 0, 1, 0, 1)))
        assert [(r.r, r.pattern_case, r.a, r.b) for r in reps] == [
            (0, 1, (1, 1, 1, 1), (2, 0, 0)),
            (1, 1, (2, 0), (0,)),
        ]
        assert reps[1].vertex_map == (0, 1, 1, 0, 0, 1, 1, 0)

    def test_partial_layers_never_fold(self):
        # lengths where k+1 is neither a multiple of 2r+2 nor r+1 beyond it
        reps = enumerate_foldings(CaterpillarWord(3, (0, 1, 0, 1)))
        assert [r.r for r in reps] == [0]

    @pytest.mark.parametrize("word", [(0, 1), (0, 1, 0), (1, 2, 1, 0, 1),
                                      (1, 0, 1, 0, 1), (0, 1, 2, 1)])
    def test_fold_maps_are_onto_prefixes(self, word):
        cw = CaterpillarWord(3, word)
        for rep in enumerate_foldings(cw):
            assert rep.vertex_map[0] == 0
            assert set(rep.vertex_map) == set(range(rep.r + 1))
            assert len(rep.quotient_word) == rep.r
            assert rep.quotient_word == word[:rep.r]

    @pytest.mark.parametrize("word", [(0, 1), (0, 1, 0), (1, 2, 1, 0, 1)])
    def test_quotient_by_fold_is_the_prefix_caterpillar(self, word):
        cw = CaterpillarWord(3, word)
        x = caterpillar_to_premaniplex(cw)
        for rep in enumerate_foldings(cw):
            q = oracle_quotient(x, rep.vertex_map)
            cat = caterpillar_to_premaniplex(CaterpillarWord(3, rep.quotient_word))
            assert np.array_equal(q.mono, cat.mono)

    @pytest.mark.parametrize("n", [3, 4])
    def test_folds_are_exactly_the_congruences(self, n):
        for word in walk_words(n, 4):
            cw = CaterpillarWord(n, word)
            x = caterpillar_to_premaniplex(cw)
            folds = {blocks_of(rep.vertex_map) for rep in enumerate_foldings(cw)}
            folds.add(blocks_of(range(len(word) + 1)))
            assert folds == {blocks_of(lbl) for lbl in premaniplex_congruences(x)}


class TestClassification:
    def test_guaranteed_word(self):
        cls = classify_caterpillar(CaterpillarWord(3, (0, 1)), confirm=True)
        assert cls.symmetric is False
        assert cls.boolean_stg is True
        assert cls.case3 is None and cls.case4 is None
        assert cls.confirmed is True

    def test_palindrome_is_symmetric_and_loses_orbits(self):
        cls = classify_caterpillar(CaterpillarWord(3, (0, 1, 0)), confirm=True)
        assert cls.symmetric is True
        assert cls.boolean_stg is False
        assert cls.confirmed is False
        va = boolean_voltages(CaterpillarWord(3, (0, 1, 0)))
        derived = Premaniplex(derived_graph(va))
        autos = automorphism_group(derived)
        # the end-to-end flip lifts: twice the voltage group, with an
        # order-4 element, and the symmetry type collapses to one link
        assert derived.n_vertices == 64
        assert len(autos) == 32
        assert max(automorphism_order(a) for a in autos) == 4
        assert flag_orbits(derived, autos).n_blocks == 2
        stg = symmetry_type_graph(derived, autos)
        short = caterpillar_to_premaniplex(CaterpillarWord(3, (0,)))
        assert premaniplex_isomorphic(stg.premaniplex, short) is not None

    def test_palindrome_with_matching_fold(self):
        cls = classify_caterpillar(CaterpillarWord(3, (1, 0, 1)))
        assert cls.symmetric is True
        assert cls.case3 == (1, (0,), 0)

    def test_case3_shape_detected(self):
        cls = classify_caterpillar(CaterpillarWord(3, (1, 2, 1, 0, 1, 0, 1)))
        assert cls.symmetric is False
        assert cls.case3 == (1, (2, 0), 0)
        assert cls.case4 is None
        assert cls.boolean_stg is False

    def test_case3_word_can_still_be_a_full_symmetry_type(self):
        # the structural cases overlap: this word matches the folding
        # pattern yet its derived polytope has no symmetry beyond the
        # voltage group, so the caterpillar is its symmetry type anyway
        cw = CaterpillarWord(3, (1, 2, 1, 0, 1, 0, 1))
        assert classify_caterpillar(cw, confirm=True).confirmed is True
        va = boolean_voltages(cw)
        derived = Premaniplex(derived_graph(va))
        autos = automorphism_group(derived)
        assert va.group.dim == 7
        assert derived.n_vertices == 1024
        assert len(autos) == 128
        assert all(automorphism_order(a) <= 2 for a in autos)
        stg = symmetry_type_graph(derived, autos)
        assert premaniplex_isomorphic(stg.premaniplex, va.base) is not None

    def test_case4_shape_detected_and_also_confirmed(self):
        cw = CaterpillarWord(3, (1, 2, 1, 0, 1))
        cls = classify_caterpillar(cw, confirm=True)
        assert cls.symmetric is False
        assert cls.case3 is None
        assert cls.case4 == (1, 2, 0)
        assert cls.confirmed is True
        va = boolean_voltages(cw)
        derived = Premaniplex(derived_graph(va))
        autos = automorphism_group(derived)
        assert (va.group.dim, derived.n_vertices, len(autos)) == (6, 384, 64)

    def test_automorphism_order_on_a_simplex(self):
        flags = Premaniplex(flag_graph(simplex_poset(3)))
        orders = Counter(automorphism_order(a)
                         for a in automorphism_group(flags))
        assert orders == {1: 1, 2: 9, 3: 8, 4: 6}


class TestKorbit:
    def test_word_shapes(self):
        assert generate_korbit_word(3, 3).word == (0, 1)
        assert generate_korbit_word(3, 4).word == (0, 1, 2)
        assert generate_korbit_word(3, 5).word == (0, 1, 2, 1)
        assert generate_korbit_word(4, 3).word == (0, 1)
        assert generate_korbit_word(5, 7).word == (0, 1, 2, 1, 2, 1)

    def test_words_avoid_every_obstruction(self):
        for n, k in [(3, 3), (3, 4), (3, 5), (4, 3), (4, 6)]:
            cls = classify_caterpillar(generate_korbit_word(n, k))
            assert cls.boolean_stg

    def test_rejects_degenerate_requests(self):
        with pytest.raises(ValueError, match="at least 3"):
            generate_korbit_word(2, 3)
        with pytest.raises(ValueError, match="at least 3"):
            generate_korbit_word(3, 2)

    @pytest.mark.parametrize("n,k,dim,flags,aut", [
        (3, 3, 4, 48, 16),
        (3, 4, 4, 64, 16),
        (4, 3, 5, 96, 32),
    ])
    def test_small_grid(self, n, k, dim, flags, aut):
        poset, report = build_korbit_polytope(n, k)
        assert report.word == generate_korbit_word(n, k).word
        assert report.boolean_dim == dim
        assert report.n_flags == flags
        assert report.aut_order == aut
        assert report.aut_is_boolean
        assert report.orbits == k
        assert report.stg_is_caterpillar
        assert report.aut_order * report.orbits == report.n_flags
        assert poset.rank == n

    def test_three_orbit_polyhedron_is_a_polytope(self):
        poset, report = build_korbit_polytope(3, 3)
        assert polytopality_report(poset).is_polytope
        assert [len(poset.faces_of_rank(r)) for r in range(3)] == [8, 12, 4]
