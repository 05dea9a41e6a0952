"""Randomized numeric model checking of construction plans."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from . import geom
from .geom import DEFAULT_TOL, Tolerance, dist
from .kb.refs import Ref, pt
from .numeric import apply_op, ndg_holds
from .sampling import SamplingExhausted, sample_triangle
from .solver import ConstructionPlan, ConstructionStep, ProblemSpec

__all__ = [
    "BranchTrace", "SamplingExhausted", "Scene", "VerificationReport",
    "MutationReport", "check_spec", "execute", "mutants", "mutation_analysis", "rejects", "sample_scene",
    "slice_agrees", "verify",
]

MAX_TRACES = 4096


@dataclass
class Scene:
    assignment: dict[Ref, object]
    triangle: tuple
    seed: int
    given: tuple[str, ...]

    @property
    def scale(self) -> float:
        """Diagonal of the bounding box of the given points."""
        pts = [self.assignment[pt(g)] for g in self.given]
        xs = [p.x for p in pts]
        ys = [p.y for p in pts]
        return max(math.hypot(max(xs) - min(xs), max(ys) - min(ys)), 1e-300)


def sample_scene(given, seed: int) -> Scene:
    given = tuple(given)
    for g in given:
        if g not in geom.LABELS:
            raise ValueError(f"unknown point {g!r}")
    tri, pts = sample_triangle(np.random.default_rng(seed), needed=given)
    return Scene({pt(g): pts[g] for g in given}, tri, seed, given)


@dataclass
class BranchTrace:
    choices: tuple[int, ...]
    values: dict
    complete: bool
    failed_at: Optional[int] = None
    reason: str = ""


def _run(steps, values, scale, tol, choices, out, choose):
    i = len(choices)
    if i == len(steps):
        out.append(BranchTrace(tuple(choices), dict(values), True))
        return
    if len(out) >= MAX_TRACES:
        return
    s = steps[i]
    for c in s.ndg:
        if not ndg_holds(c, values, scale=scale, tol=tol):
            out.append(BranchTrace(tuple(choices), dict(values), False, i, c.kind))
            return
    try:
        branches = apply_op(s, values, scale=scale, tol=tol)
    except (geom.GeometryError, KeyError) as e:
        out.append(BranchTrace(tuple(choices), dict(values), False, i, type(e).__name__))
        return
    if not branches:
        out.append(BranchTrace(tuple(choices), dict(values), False, i, "NoResult"))
        return
    picks = range(len(branches)) if choose is None else choose(i, s, branches)
    for b in picks:
        values[s.output] = branches[b]
        choices.append(b)
        _run(steps, values, scale, tol, choices, out, choose)
        choices.pop()
        del values[s.output]


def execute(
    plan: ConstructionPlan, scene: Scene, tol: Tolerance = DEFAULT_TOL, choose: Optional[Callable] = None
) -> list[BranchTrace]:
    """Run the plan over every branch of every multi-valued step.

    ``choose(i, step, branches)`` may restrict which branch indices are
    followed at step ``i``.
    """
    out: list[BranchTrace] = []
    _run(plan.steps, dict(scene.assignment), scene.scale, tol, [], out, choose)
    return out


def spec_residual(trace: BranchTrace, problem: ProblemSpec, scene: Scene) -> float:
    """Largest mismatch between the givens and the constructed triangle's points."""
    try:
        a, b, c = (trace.values[pt(g)] for g in ("A", "B", "C"))
        got = geom.characteristic_points(a, b, c)
    except (KeyError, geom.GeometryError):
        return math.inf
    worst = 0.0
    for g in problem.given:
        p = got.get(g)
        if p is None:
            return math.inf
        worst = max(worst, dist(p, scene.assignment[pt(g)]))
    return worst / scene.scale


def check_spec(trace: BranchTrace, problem: ProblemSpec, scene: Scene, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether the constructed triangle has the given points where the scene has them."""
    if not trace.complete:
        return False
    return spec_residual(trace, problem, scene) <= tol.rel


@dataclass
class InstanceResult:
    seed: int
    passed: bool
    branch: Optional[tuple[int, ...]]
    residual: float
    traces: int
    passing: int

    def line(self) -> str:
        br = "-" if self.branch is None else ".".join(map(str, self.branch)) or "()"
        return (
            f"seed={self.seed} {'pass' if self.passed else 'fail'} branch={br} "
            f"residual={self.residual:.3e} traces={self.traces} passing={self.passing}"
        )


@dataclass
class VerificationReport:
    problem: ProblemSpec
    tried: int
    passed: int
    instances: list[InstanceResult] = field(default_factory=list)
    ndg_failures: Counter = field(default_factory=Counter)
    tol: float = DEFAULT_TOL.rel

    @property
    def invalid(self) -> bool:
        return self.tried == 0

    @property
    def ok(self) -> bool:
        return not self.invalid and self.passed == self.tried

    @property
    def failing_seeds(self) -> list[int]:
        return [r.seed for r in self.instances if not r.passed]

    def text(self) -> str:
        head = f"problem {self.problem.id}: {self.passed}/{self.tried} passed at tol {self.tol:g}"
        if self.invalid:
            head += " (Invalid: no instances)"
        lines = [head]
        if self.ndg_failures:
            lines.append("ndg pruned: " + ", ".join(f"{k}={v}" for k, v in sorted(self.ndg_failures.items())))
        lines += [r.line() for r in self.instances]
        return "\n".join(lines) + "\n"


def instance_seed(base_seed: int, i: int) -> int:
    return base_seed * 1_000_003 + i


def verify(
    plan: ConstructionPlan,
    problem: ProblemSpec,
    n_instances: int = 100,
    base_seed: int = 0,
    tol: Tolerance = DEFAULT_TOL,
) -> VerificationReport:
    report = VerificationReport(problem, n_instances, 0, tol=tol.rel)
    for i in range(n_instances):
        seed = instance_seed(base_seed, i)
        scene = sample_scene(problem.given, seed)
        traces = execute(plan, scene, tol)
        best, best_res, passing = None, math.inf, 0
        for t in traces:
            if not t.complete:
                report.ndg_failures[t.reason] += 1
                continue
            r = spec_residual(t, problem, scene)
            if r <= tol.rel:
                passing += 1
            if r < best_res:
                best, best_res = t, r
        ok = best is not None and best_res <= tol.rel
        report.passed += ok
        report.instances.append(
            InstanceResult(seed, ok, best.choices if best is not None else None, best_res, len(traces), passing)
        )
    return report


# -- slice soundness -------------------------------------------------------------

def slice_agrees(raw: ConstructionPlan, clean_plan: ConstructionPlan, scene: Scene, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Raw and clean plans give the same goal points on ``scene``.

    The clean plan's first passing branch fixes the choices; the raw plan is
    run choosing, at each shared step, the branch with the same value, and the
    first branch elsewhere.
    """
    problem = clean_plan.problem
    traces = [t for t in execute(clean_plan, scene, tol) if check_spec(t, problem, scene, tol)]
    if not traces:
        return False
    target = traces[0].values
    scale = scene.scale

    def choose(i, step, branches):
        want = target.get(step.output)
        if want is None or not isinstance(want, geom.Vec2):
            if want is None:
                return [0]
            for j, b in enumerate(branches):
                if b == want:
                    return [j]
            return [0]
        for j, b in enumerate(branches):
            if dist(b, want) <= tol.rel * scale:
                return [j]
        return []

    done = _run_lenient(raw.steps, dict(scene.assignment), scale, tol, choose)
    for g in problem.goal:
        a, b = done.get(pt(g)), target.get(pt(g))
        if a is None or b is None or dist(a, b) > tol.rel * scale:
            return False
    return True


def _run_lenient(steps, values, scale, tol, choose) -> dict:
    # steps outside the slice may fail; their outputs just stay unknown
    for i, s in enumerate(steps):
        try:
            if not all(ndg_holds(c, values, scale=scale, tol=tol) for c in s.ndg):
                continue
            branches = apply_op(s, values, scale=scale, tol=tol)
        except (geom.GeometryError, KeyError):
            continue
        picks = choose(i, s, branches) if branches else []
        if picks:
            values[s.output] = branches[picks[0]]
    return values


# -- mutation --------------------------------------------------------------------

# input pairs whose exchange changes the meaning of the step
_SWAPS = {
    "ratio_point": ((0, 1), (0, 2), (1, 2)),
    "circle_center_through": ((0, 1),),
    "mirror_line": ((0, 1),),
    # the conjugate is symmetric in its first two inputs
    "harmonic_conjugate": ((0, 2), (1, 2)),
}
_RATIONAL_ARG = {"ratio_point": 3, "homothety_line": 1}


@dataclass(frozen=True)
class Mutant:
    step: int
    kind: str
    detail: str
    plan: ConstructionPlan = field(compare=False, repr=False)

    def text(self) -> str:
        return f"step {self.step + 1} {self.kind}: {self.detail}"


def _with_step(plan: ConstructionPlan, i: int, step: ConstructionStep) -> ConstructionPlan:
    steps = list(plan.steps)
    steps[i] = step
    return ConstructionPlan(plan.problem, steps, plan.solved)


def mutants(plan: ConstructionPlan) -> list[Mutant]:
    """Single-step mutants: a changed rational parameter or two swapped inputs.

    Mutants identical to the original step are skipped.
    """
    out = []
    for i, s in enumerate(plan.steps):
        k = _RATIONAL_ARG.get(s.op)
        if k is not None:
            r = s.inputs[k]
            seen = {r}
            for new in (r + 1, -r, 1 / r if r else None):
                if new is None or new in seen:
                    continue
                seen.add(new)
                ins = s.inputs[:k] + (Fraction(new),) + s.inputs[k + 1:]
                out.append(Mutant(i, "ratio", f"{r} -> {new}", _with_step(plan, i, replace(s, inputs=ins))))
        for x, y in _SWAPS.get(s.op, ()):
            if s.inputs[x] == s.inputs[y]:
                continue
            ins = list(s.inputs)
            ins[x], ins[y] = ins[y], ins[x]
            out.append(Mutant(i, "swap", f"inputs {x + 1}<->{y + 1}", _with_step(plan, i, replace(s, inputs=tuple(ins)))))
    return out


def rejects(plan: ConstructionPlan, problem: ProblemSpec, n_instances: int = 100, base_seed: int = 0,
            tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether some instance fails; stops at the first failing one."""
    for i in range(n_instances):
        scene = sample_scene(problem.given, instance_seed(base_seed, i))
        if not any(check_spec(t, problem, scene, tol) for t in execute(plan, scene, tol)):
            return True
    return False


@dataclass
class MutationReport:
    total: int = 0
    killed: int = 0
    survivors: list[tuple[ProblemSpec, Mutant]] = field(default_factory=list)

    @property
    def kill_rate(self) -> float:
        return self.killed / self.total if self.total else 1.0

    def text(self) -> str:
        lines = [f"mutants={self.total} killed={self.killed} rate={self.kill_rate:.4f}"]
        lines += [f"survivor: problem {p.id} {m.text()}" for p, m in self.survivors]
        return "\n".join(lines) + "\n"


def mutation_analysis(plans: list[ConstructionPlan], n_instances: int = 100, base_seed: int = 0,
                      tol: Tolerance = DEFAULT_TOL) -> MutationReport:
    report = MutationReport()
    for plan in plans:
        for m in mutants(plan):
            report.total += 1
            if rejects(m.plan, plan.problem, n_instances, base_seed, tol):
                report.killed += 1
            else:
                report.survivors.append((plan.problem, m))
    return report
