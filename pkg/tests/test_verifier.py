import pytest
from hypothesis import given, settings, strategies as st

from wernick.solver import ConstructionPlan
from wernick.verifier import (check_spec, execute, instance_seed, mutants, mutation_analysis, rejects,
                              sample_scene, slice_agrees, verify)


def test_problem_7_verifies(solved):
    o = solved[7]
    rep = verify(o.plan, o.problem, 30)
    assert rep.ok and rep.passed == 30 and not rep.failing_seeds
    assert rep.text().splitlines()[0] == "problem 7: 30/30 passed at tol 1e-09"


def test_verification_is_seed_deterministic(solved):
    o = solved[47]
    assert verify(o.plan, o.problem, 10, 3).text() == verify(o.plan, o.problem, 10, 3).text()
    assert verify(o.plan, o.problem, 5, 0).text() != verify(o.plan, o.problem, 5, 1).text()


def test_zero_instances_is_invalid(solved):
    o = solved[7]
    rep = verify(o.plan, o.problem, 0)
    assert rep.invalid and not rep.ok
    assert "Invalid" in rep.text()


def test_instance_seeds_are_distinct():
    seeds = {instance_seed(b, i) for b in range(5) for i in range(100)}
    assert len(seeds) == 500


def test_scene_is_deterministic():
    a, b = sample_scene(("A", "B", "H"), 9), sample_scene(("A", "B", "H"), 9)
    assert a.assignment == b.assignment


def test_empty_plan_fails_unless_goal_is_given(solved):
    p = solved[7].problem
    assert rejects(ConstructionPlan(p, [], solved=True), p, 5)


def test_a_wrong_ratio_is_caught(solved):
    o = solved[4]
    bad = [m for m in mutants(o.plan) if m.kind == "ratio" and m.step == 1]
    assert bad and all(rejects(m.plan, o.problem, 20) for m in bad)


def test_harmonic_symmetry_is_not_a_mutant(solved):
    for o in solved.values():
        for m in mutants(o.plan):
            s = o.plan.steps[m.step]
            if s.op == "harmonic_conjugate":
                assert m.detail != "inputs 1<->2"


def test_mutants_differ_from_original(solved):
    for o in solved.values():
        for m in mutants(o.plan):
            assert m.plan.steps[m.step] != o.plan.steps[m.step]


def test_mutation_report_for_two_plans(solved):
    rep = mutation_analysis([solved[4].plan, solved[7].plan], n_instances=20)
    assert rep.total == rep.killed + len(rep.survivors)
    assert rep.kill_rate == 1.0
    assert rep.text().startswith(f"mutants={rep.total} killed={rep.killed}")


@settings(max_examples=20)
@given(st.integers(0, 10**6), st.sampled_from([4, 7, 47, 60, 133]))
def test_clean_plan_agrees_with_raw(solved, raw_plans, seed, i):
    o = solved[i]
    scene = sample_scene(o.problem.given, seed)
    assert slice_agrees(raw_plans[i], o.plan, scene)


@settings(max_examples=20)
@given(st.integers(0, 10**6))
def test_some_branch_meets_the_spec(solved, seed):
    o = solved[133]
    scene = sample_scene(o.problem.given, seed)
    assert any(check_spec(t, o.problem, scene) for t in execute(o.plan, scene))
