import re

import pytest

from wernick.emit import GclcError, NoCompleteTrace, round_trip_error, run_gclc, to_gclc, to_svg, to_text
from wernick.emit.gclc import ident
from wernick.kb.refs import describe
from wernick.solver import ConstructionPlan
from wernick.verifier import sample_scene

PROBLEM_7 = [
    "Using the point A and the point H, construct the line AH_a;",
    "Using the point B and the point H, construct the line BH_b;",
    "Using the point A and the line BH_b, construct the line AC;",
    "Using the point B and the line AH_a, construct the line BC;",
    "Using the line AC and the line BC, construct the point C.",
]


def test_problem_7_sentences(solved, kb):
    assert to_text(solved[7].plan, kb).sentences == PROBLEM_7
    assert to_text(solved[7].plan, kb).text().startswith("1. Using the point A")


def test_every_sentence_names_its_objects(solved, kb):
    for o in solved.values():
        sp = to_text(o.plan, kb)
        assert len(sp) == len(o.plan)
        for n, (s, step) in enumerate(zip(sp.sentences, o.plan.steps)):
            assert s.endswith("." if n == len(sp) - 1 else ";")
            assert not re.search(r"\?\w", s)
            assert describe(step.output) in s


def test_empty_plan_has_no_sentences(solved):
    assert to_text(ConstructionPlan(solved[7].problem, [], True)).sentences == []


def test_problem_7_script(solved):
    plan = solved[7].plan
    script = to_gclc(plan, sample_scene(plan.problem.given, 0))
    lines = script.lines()
    assert len(lines) == 17
    assert lines[3:8] == [
        "line l_A_Ha A H", "line l_B_Hb B H", "perp l_A_C A l_B_Hb", "perp l_B_C B l_A_Ha", "intersec C l_A_C l_B_C",
    ]
    assert [l.split()[0] for l in lines[:3]] == ["point"] * 3


def test_scripts_run_and_reproduce_the_trace(solved):
    worst = 0.0
    for o in solved.values():
        for seed in range(3):
            scene = sample_scene(o.problem.given, seed)
            script = to_gclc(o.plan, scene)
            values = run_gclc(script.text())  # fails on any undeclared identifier
            assert ident(o.plan.steps[-1].output) in values if o.plan.steps else True
            worst = max(worst, round_trip_error(o.plan, scene, script))
    assert worst < 1e-9


def test_script_coordinates_fit_the_canvas(solved):
    plan = solved[60].plan
    text = to_gclc(plan, sample_scene(plan.problem.given, 4)).text()
    for m in re.finditer(r"^point \S+ (\S+) (\S+)$", text, re.M):
        assert all(0 <= float(v) <= 60 for v in m.groups())


@pytest.mark.parametrize("text", [
    "point A 0 0\nline l A B\n",
    "point A 0 0\nfrobnicate A\n",
    "point A 0 0\npoint A 1 1\n",
    "point A x 0\n",
])
def test_interpreter_rejects_bad_scripts(text):
    with pytest.raises(GclcError):
        run_gclc(text)


def test_problem_7_figure(solved):
    plan = solved[7].plan
    scene = sample_scene(plan.problem.given, 0)
    svg = to_svg(plan, scene)
    assert svg.count('class="side"') == 3
    assert svg.count('class="aux"') == 2
    assert svg.count('class="point"') == 4
    assert [m[1] for m in re.finditer(r'class="label"[^>]*>([^<]+)<', svg)] == ["A", "B", "H", "C"]
    assert svg == to_svg(plan, scene)


def test_all_figures_render(solved):
    for o in solved.values():
        svg = to_svg(o.plan, sample_scene(o.problem.given, 1))
        assert svg.startswith("<?xml") and svg.rstrip().endswith("</svg>")


def test_no_trace_for_an_unsolved_plan(solved):
    p = solved[7].problem
    with pytest.raises(NoCompleteTrace):
        to_svg(ConstructionPlan(p, [], True), sample_scene(p.given, 0))
