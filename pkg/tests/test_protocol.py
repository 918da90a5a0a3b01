"""Round complexes, chromatic subdivision, matrix form, iterated builds."""

import pytest

from oracles import fubini, ordered_set_partitions

from wrtopo import bits
from wrtopo.complexes import all_permutations, apply_permutation, dim, vertex_color
from wrtopo.errors import DimensionTooLarge, NotAProtocolSimplex
from wrtopo.executions import view_family
from wrtopo.protocol import (
    build_iterated,
    build_wr,
    chi_power,
    chromatic_subdivision,
    in_next_level,
    matrix_form,
    matrix_to_simplex,
    profile_simplex,
    resolve_view_masks,
    sigma_parts,
    standard_complex,
)

m = bits.mask_of

SIGMA_1 = frozenset({(1, m([1, 2])), (2, m([0, 2])), (0, m([0, 1, 2]))})
SIGMA_2 = frozenset({(0, m([0, 1])), (1, m([0, 1, 2])), (2, m([0, 1, 2]))})
FULL_TRIANGLE = frozenset({(0, m([0, 1, 2])), (1, m([0, 1, 2])), (2, m([0, 1, 2]))})


class TestBuildWr:
    def test_two_process_round_complex_is_the_known_path(self):
        c = build_wr(1, 0).complex
        expected = {
            frozenset({(0, m([0])), (1, m([0, 1]))}),
            frozenset({(0, m([0, 1])), (1, m([0, 1]))}),
            frozenset({(0, m([0, 1])), (1, m([1]))}),
        }
        assert c.maximal == frozenset(expected)

    def test_deepest_complex_counts_partitions(self):
        assert len(build_wr(2, 2).complex.maximal) == fubini(3) == 13

    def test_round_complexes_nest(self):
        w0, w1, w2 = (build_wr(2, l).complex for l in (0, 1, 2))
        assert all(w1.contains(s) for s in w2.maximal)
        assert all(w0.contains(s) for s in w1.maximal)
        assert len(w0.maximal) == 25 > len(w1.maximal)

    def test_membership_is_subprofile_membership(self):
        c = build_wr(2, 0).complex
        for p in view_family(2, 0)[:5]:
            s = profile_simplex(p)
            for v in s:
                assert c.contains(frozenset({v}))
        assert not c.contains(frozenset({(0, m([0])), (1, m([1]))}))

    def test_dimension_guard(self):
        with pytest.raises(DimensionTooLarge):
            build_wr(9, 0)


class TestChromaticSubdivision:
    def test_segment_subdivides_into_three(self):
        sub = chromatic_subdivision(standard_complex(1))
        assert len(sub.complex.maximal) == 3

    def test_triangle_subdivision_matches_deepest_round_complex(self):
        sub = chromatic_subdivision(standard_complex(2))
        assert resolve_view_masks(sub.complex) == build_wr(2, 2).complex

    def test_single_vertex_fixed(self):
        from wrtopo.complexes import closure

        vertex = closure([frozenset({(0, m([0]))})])
        sub = chromatic_subdivision(vertex)
        assert len(sub.complex.maximal) == 1
        assert resolve_view_masks(sub.complex) == vertex

    def test_partition_count_per_simplex(self):
        sub = chromatic_subdivision(standard_complex(3))
        top = [s for s in sub.complex.maximal if len(s) == 4]
        assert len(top) == fubini(4) == 75

    def test_carrier_is_monotone_and_rigid(self):
        sub = chromatic_subdivision(standard_complex(2))
        for s in sub.complex.maximal:
            for v in s:
                carrier = sub.carrier_of(v)
                assert carrier == v[1]
                assert vertex_color(v) in {vertex_color(u) for u in carrier}
        for s in sub.complex.simplices():
            union = frozenset().union(*(sub.carrier_of(v) for v in s))
            for v in s:
                assert sub.carrier_of(v) <= union

    def test_deepest_families_embed_in_round_zero(self):
        for n in (1, 2):
            w0 = build_wr(n, 0).complex
            for s in build_wr(n, n).complex.maximal:
                assert w0.contains(s)


class TestMatrixForm:
    def test_three_column_example(self):
        s = frozenset({(0, m([0])), (1, m([0, 1])), (2, m([0, 1, 2]))})
        form = matrix_form(s, 2)
        assert form.columns == (
            (m([0]), m([0])),
            (m([0, 1]), m([1])),
            (m([0, 1, 2]), m([2])),
        )

    def test_single_full_vertex(self):
        s = frozenset({(2, m([0, 1, 2]))})
        assert matrix_form(s, 2).columns == ((m([0, 1, 2]), m([2])),)

    def test_full_profile_single_column(self):
        assert matrix_form(FULL_TRIANGLE, 2).columns == ((m([0, 1, 2]), m([0, 1, 2])),)

    def test_incomparable_views_are_ordered_compatibly(self):
        s = frozenset({(0, m([0, 1])), (1, m([1, 2]))})
        form = matrix_form(s, 2)
        views = [v for v, _ in form.columns]
        assert views[0] == m([1, 2])  # owner 1 must be visible to owner 0

    def test_roundtrip_on_whole_complex(self):
        for s in build_wr(2, 0).complex.simplices():
            assert matrix_to_simplex(matrix_form(s, 2)) == s

    def test_unrealizable_simplex_rejected(self):
        s = frozenset({(0, m([0])), (1, m([1]))})
        assert not build_wr(2, 0).complex.contains(s)
        with pytest.raises(NotAProtocolSimplex):
            matrix_form(s, 2)

    def test_column_conditions_hold(self):
        for s in build_wr(2, 0).complex.simplices():
            form = matrix_form(s, 2)
            cols = form.columns
            assert cols[-1][0] == m([0, 1, 2])
            owners = [o for _, o in cols]
            for i, (vi, oi) in enumerate(cols):
                for j in range(i, len(cols)):
                    assert oi & ~cols[j][0] == 0
                for j in range(i + 1, len(cols)):
                    assert oi & owners[j] == 0


class TestSigmaParts:
    def test_two_full_example(self):
        parts = sigma_parts(SIGMA_2, 0, 2)
        assert parts.lagging == frozenset({(0, m([0, 1]))})
        assert parts.exact == frozenset({(1, m([0, 1, 2])), (2, m([0, 1, 2]))})
        assert parts.lagging_union == m([0, 1])
        assert parts.round_union == m([0, 1, 2])

    def test_one_full_example(self):
        parts = sigma_parts(SIGMA_1, 0, 2)
        assert parts.lagging_union == m([0, 1, 2]) == parts.round_union

    def test_full_profile_has_no_lagging_part(self):
        parts = sigma_parts(FULL_TRIANGLE, 0, 2)
        assert parts.lagging == frozenset()
        assert parts.lagging_union == 0


class TestNextLevelMembership:
    def test_reference_failures(self):
        assert in_next_level(SIGMA_2, 0, 2) is False
        assert in_next_level(SIGMA_1, 0, 2) is False

    def test_reference_success(self):
        s = frozenset({(0, m([0])), (1, m([0, 1])), (2, m([0, 1, 2]))})
        assert in_next_level(s, 0, 2) is True

    @pytest.mark.parametrize("n", [1, 2])
    def test_agrees_with_execution_enumeration(self, n):
        for l in range(n):
            here = build_wr(n, l).complex
            nxt = build_wr(n, l + 1).complex
            for s in here.simplices():
                assert in_next_level(s, l, n) == nxt.contains(s)

    def test_non_survivors_read_everyone(self):
        # Every removed simplex has a round union of full size, shared
        # with all of its cofaces.
        here = build_wr(2, 0).complex
        nxt = build_wr(2, 1).complex
        for s in here.simplices():
            if nxt.contains(s):
                continue
            parts = sigma_parts(s, 0, 2)
            assert bits.size(parts.round_union) == 3
            for mx in here.maximal_containing(s):
                assert sigma_parts(mx, 0, 2).round_union == parts.round_union

    def test_action_preserves_round_complexes(self):
        for l in (0, 1, 2):
            c = build_wr(2, l).complex
            for perm in all_permutations(2):
                assert apply_permutation(c, perm) == c


class TestIterated:
    def test_level_one_is_round_zero(self):
        it = build_iterated(1, 1)
        assert it.complex == build_wr(1, 0).complex
        assert it.k == 1

    def test_two_level_segment_is_nine_edges(self):
        it = build_iterated(1, 2)
        assert len(it.complex.maximal) == 9
        assert all(dim(s) == 1 for s in it.complex.maximal)
        assert it.complex == chi_power(1, 2)

    def test_two_level_triangle_contains_copies(self):
        from wrtopo.protocol import one_round_copy

        it = build_iterated(2, 2)
        assert len(it.complex.maximal) == 625
        for base in list(it.previous.complex.maximal)[:3]:
            for s in one_round_copy(base):
                assert it.complex.contains(s)

    def test_carriers_are_supporting_simplices(self):
        it = build_iterated(2, 2)
        prev = it.previous.complex
        for v in list(it.complex.vertices())[:50]:
            carrier = it.carrier[v]
            assert prev.contains(carrier)
            assert vertex_color(v) in {vertex_color(u) for u in carrier}

    def test_carrier_monotone_on_faces(self):
        it = build_iterated(1, 2)
        for s in it.complex.maximal:
            union = frozenset().union(*(it.carrier[v] for v in s))
            for v in s:
                assert it.carrier[v] <= union

    def test_size_guard(self):
        with pytest.raises(DimensionTooLarge):
            build_iterated(2, 3)
        with pytest.raises(DimensionTooLarge):
            build_iterated(3, 2)


class TestChiPower:
    def test_levels(self):
        assert chi_power(1, 1) == build_wr(1, 1).complex
        assert len(chi_power(1, 2).maximal) == 9
        assert len(chi_power(1, 3).maximal) == 27
        assert len(chi_power(2, 2).maximal) == 169

    def test_partition_structure(self):
        # Each level-2 top simplex subdivides a level-1 top simplex.
        sub = chi_power(2, 2)
        level1 = build_wr(2, 2).complex
        for s in list(sub.maximal)[:10]:
            support = frozenset().union(*(v[1] for v in s))
            assert level1.contains(support)

    def test_partition_oracle_baseline(self):
        assert [fubini(k) for k in (2, 3, 4)] == [3, 13, 75]
        assert len(ordered_set_partitions((0, 1))) == 3
