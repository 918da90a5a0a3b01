"""Collapse engine: intervals, round peeling, staged subdivisions, iterated."""

import pytest

from oracles import greedy_collapse

from wrtopo import bits
from wrtopo.complexes import (
    CollapseStep,
    all_permutations,
    apply_step,
    euler_characteristic,
    permute_simplex,
    simplex_key,
    star_interval,
    verify_trace,
)
from wrtopo.engine import (
    chromatic_collapse_horn,
    chromatic_collapse_void,
    collapse_round,
    completion_vertices,
    equivariant_collapse_round,
    full_collapse,
    horn_complex,
    interval_bounds,
    interval_decomposition,
    iterated_collapse,
)
from wrtopo.errors import AlreadyInNextLevel, DimensionTooLarge
from wrtopo.protocol import (
    build_iterated,
    build_wr,
    chi_power,
    chromatic_subdivision,
    in_next_level,
    resolve_view_masks,
)

m = bits.mask_of

SIGMA_1 = frozenset({(1, m([1, 2])), (2, m([0, 2])), (0, m([0, 1, 2]))})
SIGMA_2 = frozenset({(0, m([0, 1])), (1, m([0, 1, 2])), (2, m([0, 1, 2]))})
FULL_TRIANGLE = frozenset({(0, m([0, 1, 2])), (1, m([0, 1, 2])), (2, m([0, 1, 2]))})


def removed_simplices(n, l):
    here = build_wr(n, l).complex
    nxt = build_wr(n, l + 1).complex
    return here, nxt, [s for s in here.simplices() if not nxt.contains(s)]


class TestCompletionVertices:
    def test_two_full_reference(self):
        assert completion_vertices(SIGMA_2, 0, 2) == frozenset({(2, m([0, 1, 2]))})

    def test_one_full_reference(self):
        assert completion_vertices(SIGMA_1, 0, 2) == frozenset({(0, m([0, 1, 2]))})

    def test_full_profile_completes_with_every_vertex(self):
        assert completion_vertices(FULL_TRIANGLE, 0, 2) == FULL_TRIANGLE

    def test_empty_formula_rejected(self):
        survivor = frozenset({(0, m([0])), (1, m([0, 1]))})
        assert in_next_level(survivor, 0, 2)
        with pytest.raises(AlreadyInNextLevel):
            completion_vertices(survivor, 0, 2)

    def test_bounds_of_references(self):
        assert interval_bounds(SIGMA_2, 0, 2) == (
            frozenset({(0, m([0, 1])), (1, m([0, 1, 2]))}),
            SIGMA_2,
        )
        assert interval_bounds(SIGMA_1, 0, 2) == (
            frozenset({(1, m([1, 2])), (2, m([0, 2]))}),
            SIGMA_1,
        )

    def test_lower_bound_idempotent(self):
        _, _, removed = removed_simplices(2, 0)
        for s in removed:
            bottom, top = interval_bounds(s, 0, 2)
            assert interval_bounds(bottom, 0, 2) == (bottom, top)


class TestPropositionSuite:
    """Exhaustive structural checks over every removed simplex at n=2."""

    @pytest.mark.parametrize("l", [0, 1])
    def test_bounds_sandwich_and_survive_nothing(self, l):
        here, nxt, removed = removed_simplices(2, l)
        for s in removed:
            bottom, top = interval_bounds(s, l, 2)
            inv = completion_vertices(s, l, 2)
            assert top == bottom | inv
            assert bottom <= s <= top
            assert here.contains(top)
            assert not nxt.contains(bottom)
            assert not in_next_level(bottom, l, 2)

    @pytest.mark.parametrize("l", [0, 1])
    def test_interval_rigidity(self, l):
        _, _, removed = removed_simplices(2, l)
        for s in removed:
            bottom, top = interval_bounds(s, l, 2)
            span = tuple(top - bottom)
            import itertools

            for r in range(len(span) + 1):
                for extra in itertools.combinations(span, r):
                    tau = bottom | frozenset(extra)
                    assert interval_bounds(tau, l, 2) == (bottom, top)

    @pytest.mark.parametrize("l", [0, 1])
    def test_interval_trichotomy(self, l):
        _, _, removed = removed_simplices(2, l)
        intervals = {}
        for s in removed:
            intervals.setdefault(interval_bounds(s, l, 2), set()).add(s)
        members = list(intervals.values())
        for i, a in enumerate(members):
            for b in members[i + 1:]:
                assert not (a & b)

    @pytest.mark.parametrize("l", [0, 1])
    def test_action_commutes_with_bounds(self, l):
        _, _, removed = removed_simplices(2, l)
        for s in removed:
            bottom, top = interval_bounds(s, l, 2)
            for perm in all_permutations(2):
                image = permute_simplex(s, perm)
                ibottom, itop = interval_bounds(image, l, 2)
                assert ibottom == permute_simplex(bottom, perm)
                assert itop == permute_simplex(top, perm)

    @pytest.mark.parametrize("l", [0, 1])
    def test_action_permutes_intervals(self, l):
        _, _, removed = removed_simplices(2, l)
        by_top = {}
        for s in removed:
            bottom, top = interval_bounds(s, l, 2)
            by_top.setdefault(top, set()).add(s)
        for top, members in by_top.items():
            for perm in all_permutations(2):
                image_top = permute_simplex(top, perm)
                assert {permute_simplex(x, perm) for x in members} == by_top[image_top]


class TestIntervalDecomposition:
    def test_round_zero_covers_difference(self):
        here, nxt, removed = removed_simplices(2, 0)
        decomp = interval_decomposition(2, 0)
        union = set()
        for iv in decomp.intervals:
            assert not (union & iv.members)
            union |= iv.members
        assert union == set(removed)
        assert len(decomp.intervals) == 12

    def test_members_all_fail_membership(self):
        for iv in interval_decomposition(2, 0).intervals:
            for s in iv.members:
                assert not in_next_level(s, 0, 2)

    def test_two_process_round_is_empty(self):
        assert interval_decomposition(1, 0).intervals == ()

    def test_second_round_is_empty(self):
        assert interval_decomposition(2, 1).intervals == ()

    def test_ordering_keys_decrease(self):
        from wrtopo.protocol import sigma_parts

        decomp = interval_decomposition(2, 0)
        keys = [
            (len(sigma_parts(iv.top, 0, 2).lagging), len(iv.top))
            for iv in decomp.intervals
        ]
        assert keys == sorted(keys, reverse=True)


class TestRoundCollapse:
    @pytest.mark.parametrize("l", [0, 1])
    def test_round_trace_verifies_and_lands(self, l):
        trace = collapse_round(2, l)
        verify_trace(trace)
        assert trace.source == build_wr(2, l).complex
        assert trace.target == build_wr(2, l + 1).complex

    def test_two_process_trace_is_empty(self):
        trace = collapse_round(1, 0)
        assert trace.steps == ()
        verify_trace(trace)

    def test_each_face_has_unique_top(self):
        trace = collapse_round(2, 0)
        current = trace.source
        for step in trace.steps:
            containing = current.maximal_containing(step.free)
            assert len(containing) == 1
            assert containing[0] == max(step.removed, key=len)
            current = apply_step(current, step)

    def test_euler_characteristic_stays_one(self):
        trace = collapse_round(2, 0)
        current = trace.source
        assert euler_characteristic(current) == 1
        for step in trace.steps:
            current = apply_step(current, step)
            assert euler_characteristic(current) == 1

    def test_full_collapse_reaches_subdivision(self):
        trace = full_collapse(2)
        verify_trace(trace)
        assert trace.target == build_wr(2, 2).complex


class TestEquivariantCollapse:
    def test_two_orbits_containing_the_references(self):
        trace = equivariant_collapse_round(2, 0)
        assert len(trace.steps) == 2
        first_tops = {s for s in trace.steps[0].removed if len(s) == 3}
        second_tops = {s for s in trace.steps[1].removed if len(s) == 3}
        assert SIGMA_1 in first_tops and len(first_tops) == 6
        assert SIGMA_2 in second_tops and len(second_tops) == 6

    def test_trace_verifies_and_matches_plain(self):
        trace = equivariant_collapse_round(2, 0)
        verify_trace(trace)
        assert trace.target == collapse_round(2, 0).target

    def test_flattening_orbits_gives_same_residual(self):
        from wrtopo.complexes import collapse

        trace = equivariant_collapse_round(2, 0)
        current = trace.source
        for step in trace.steps:
            for face in sorted(step.faces, key=simplex_key):
                current = collapse(current, face)
        assert current == trace.target

    def test_orbit_images_of_intervals(self):
        trace = equivariant_collapse_round(2, 0)
        current = trace.source
        for step in trace.steps:
            rep = step.free
            interval = star_interval(current, rep)
            for perm in all_permutations(2):
                image = permute_simplex(rep, perm)
                assert star_interval(current, image) == {
                    permute_simplex(s, perm) for s in interval
                }
            current = apply_step(current, step)


class TestVoidCollapse:
    @pytest.mark.parametrize("n", [1, 2])
    def test_reaches_void(self, n):
        trace = chromatic_collapse_void(n)
        verify_trace(trace)
        assert trace.source == build_wr(n, n).complex
        assert trace.target.void

    def test_counts_every_simplex(self):
        trace = chromatic_collapse_void(2)
        total = build_wr(2, 2).complex.simplices(include_empty=True)
        removed = set()
        for step in trace.steps:
            assert not (removed & step.removed)
            removed |= step.removed
        assert removed == total
        assert len(total) == 50  # 12 vertices, 24 edges, 13 triangles, empty

    def test_stage_faces_have_expected_dimension(self):
        trace = chromatic_collapse_void(2)
        for step in trace.steps:
            stage = int(step.phase.split("stage")[1])
            assert len(step.free) == 2 - stage + 1

    def test_greedy_oracle_agrees_it_is_collapsible(self):
        assert greedy_collapse(build_wr(1, 1).complex).void
        assert greedy_collapse(build_wr(2, 2).complex).void


class TestHornCollapse:
    @pytest.mark.parametrize("p", [0, 1, 2])
    def test_reaches_horn_subdivision(self, p):
        trace = chromatic_collapse_horn(2, p)
        verify_trace(trace)
        expected = resolve_view_masks(
            chromatic_subdivision(horn_complex(2, p)).complex
        )
        assert trace.target == expected

    def test_two_process_case(self):
        trace = chromatic_collapse_horn(1, 0)
        verify_trace(trace)
        expected = resolve_view_masks(
            chromatic_subdivision(horn_complex(1, 0)).complex
        )
        assert trace.target == expected
        assert len(trace.target.maximal) == 1

    def test_stages_appear_in_order(self):
        trace = chromatic_collapse_horn(2, 0)
        stages = [step.phase.split(":")[1] for step in trace.steps]
        assert stages == sorted(stages, key=lambda s: int(s[5]))

    def test_horn_bound_checked(self):
        with pytest.raises(DimensionTooLarge):
            chromatic_collapse_horn(2, 5)


class TestIteratedCollapse:
    def test_segment_level_two_is_already_subdivided(self):
        trace = iterated_collapse(1, 2)
        assert trace.steps == ()
        assert trace.target == chi_power(1, 2)
        assert len(trace.target.maximal) == 9

    def test_segment_level_three(self):
        trace = iterated_collapse(1, 3)
        assert trace.target == chi_power(1, 3)

    def test_triangle_level_two_full_run(self):
        trace = iterated_collapse(2, 2)
        verify_trace(trace)
        assert trace.source == build_iterated(2, 2).complex
        assert trace.target == chi_power(2, 2)

    def test_parallel_phase_reaches_subdivided_level_one(self):
        trace = iterated_collapse(2, 2)
        current = trace.source
        for step in trace.steps:
            if not step.phase.startswith("parallel"):
                break
            current = apply_step(current, step)
        expected = chromatic_subdivision(build_wr(2, 0).complex).complex
        assert current == expected

    def test_parallel_steps_have_disjoint_intervals(self):
        trace = iterated_collapse(2, 2)
        current = trace.source
        for step in trace.steps:
            if step.phase.startswith("parallel"):
                union = set()
                for face in step.faces:
                    interval = star_interval(current, face)
                    assert not (union & interval)
                    union |= interval
            current = apply_step(current, step)

    def test_size_guard(self):
        with pytest.raises(DimensionTooLarge):
            iterated_collapse(2, 3)
