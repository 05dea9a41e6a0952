"""Choosing the numeric branch a rendering is drawn from."""
from __future__ import annotations

from ..geom import DEFAULT_TOL, Tolerance
from ..solver import ConstructionPlan
from ..verifier import BranchTrace, Scene, check_spec, execute


class NoCompleteTrace(RuntimeError):
    """No branch of the plan yields the specified triangle on the scene."""


def solution_trace(plan: ConstructionPlan, scene: Scene, tol: Tolerance = DEFAULT_TOL) -> BranchTrace:
    """The first branch, in branch order, that passes the specification check."""
    for t in execute(plan, scene, tol):
        if check_spec(t, plan.problem, scene, tol):
            return t
    raise NoCompleteTrace(f"no branch of the plan for {plan.problem.label} passes on seed {scene.seed}")
