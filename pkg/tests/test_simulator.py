"""Scheduler-driven runs of the recursive scan protocol."""

import pytest

from wrtopo import bits
from wrtopo.errors import DimensionTooLarge, IncompleteScript
from wrtopo.executions import Profile, is_view, validate_is, view_family
from wrtopo.protocol import build_wr, profile_simplex
from wrtopo.simulator import (
    FuzzReport,
    Scheduler,
    fuzz,
    run,
    run_exhaustive,
    run_to_completion_script,
)

m = bits.mask_of


def sequential(n):
    return Scheduler.scripted(run_to_completion_script(n, range(n + 1)))


def lock_step(n):
    # Everyone writes, then reads round-robin: a single concurrency class.
    script = list(range(n + 1)) * (n + 2)
    return Scheduler.scripted(tuple(script))


class TestScriptedRuns:
    def test_sequential_run_matches_reference_profile(self):
        result = run(2, sequential(2))
        assert result.profile == Profile({0: m([0]), 1: m([0, 1]), 2: m([0, 1, 2])})

    def test_lock_step_gives_full_views_in_one_round(self):
        result = run(2, lock_step(2))
        assert result.profile == Profile({i: m([0, 1, 2]) for i in range(3)})
        assert result.execution.length == 1

    def test_round_sizes_follow_exit_rule(self):
        result = run(2, sequential(2))
        for i, sizes in result.round_sizes.items():
            exit_round = len(sizes) - 1
            assert sizes[-1] == 2 + 1 - exit_round
            for k, size in enumerate(sizes[:-1]):
                assert size != 2 + 1 - k

    def test_execution_validates_and_agrees_with_profile(self):
        for scheduler in (sequential(2), lock_step(2), Scheduler.seeded(7)):
            result = run(2, scheduler)
            validate_is(result.execution)
            assert is_view(result.execution) == result.profile

    def test_participation_shrinks(self):
        result = run(2, sequential(2))
        rounds = result.execution.rounds
        for a, b in zip(rounds, rounds[1:]):
            assert b.participants & ~a.participants == 0
            assert b.participants != a.participants

    def test_two_process_runs_stay_in_family(self):
        family = set(view_family(1, 0))
        for scheduler in (sequential(1), lock_step(1), Scheduler.seeded(3)):
            assert run(1, scheduler).profile in family

    def test_incomplete_script_rejected(self):
        with pytest.raises(IncompleteScript):
            run(2, Scheduler.scripted((0, 1, 2)))

    def test_script_for_terminated_process_rejected(self):
        script = run_to_completion_script(1, (0, 1)) + (0,)
        with pytest.raises(IncompleteScript):
            run(1, Scheduler.scripted(script))

    def test_determinism(self):
        a = run(2, Scheduler.seeded(123))
        b = run(2, Scheduler.seeded(123))
        assert a.profile == b.profile
        assert a.execution == b.execution


class TestExhaustive:
    def test_two_processes_give_three_profiles(self):
        assert set(run_exhaustive(1)) == set(view_family(1, 1))

    def test_three_processes_give_thirteen_profiles(self):
        profiles = run_exhaustive(2)
        assert len(profiles) == 13
        chi = build_wr(2, 2).complex
        assert {profile_simplex(p) for p in profiles} == set(chi.maximal)

    def test_profiles_satisfy_snapshot_axioms(self):
        for p in run_exhaustive(2):
            views = p.as_dict()
            for i, vi in views.items():
                assert bits.has(vi, i)
                for j, vj in views.items():
                    assert vi | vj in (vi, vj)
                    if bits.has(vi, j):
                        assert vj & ~vi == 0

    def test_bound(self):
        with pytest.raises(DimensionTooLarge):
            run_exhaustive(3)


class TestFuzz:
    def test_small_campaign_clean_and_covering(self):
        report = fuzz(1, 100, seed=5)
        assert isinstance(report, FuzzReport)
        assert report.violations == ()
        assert report.covered == report.total == 3

    def test_single_run_hits_one_profile(self):
        report = fuzz(2, 1, seed=11)
        assert report.violations == ()
        assert report.covered == 1

    def test_triangle_campaign(self):
        report = fuzz(2, 500, seed=11)
        assert report.violations == ()
        assert report.covered == report.total == 13
