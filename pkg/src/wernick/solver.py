"""Waterfall forward-chaining search for construction plans."""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

import numpy as np

from . import geom
from .kb.build import KnowledgeBase, load_kb
from .kb.check import eval_ref
from .kb.refs import Fact, Ref, bis, pt, sort_key
from .kb.store import KnownObjects, Overlay, match, resolve
from .numeric import apply_op, ndg_holds
from .sampling import sample_triangle

GOAL = ("A", "B", "C")
DEFAULT_MAX_STEPS = 10_000
DEFAULT_MAX_SECS = 30.0


@dataclass(frozen=True)
class ProblemSpec:
    id: Union[int, str]
    given: tuple[str, ...]
    goal: tuple[str, ...] = GOAL
    status: str = "Unknown"

    @property
    def label(self) -> str:
        return f"{self.id} ({', '.join(self.given)})"


@dataclass(frozen=True)
class NDGCondition:
    kind: str
    args: tuple

    def text(self) -> str:
        return f"{self.kind}({', '.join(_txt(a) for a in self.args)})"


NDG_KINDS = {
    "distinct": "Distinct",
    "noncollinear": "NonCollinear",
    "notonline": "NotOnLine",
    "intersects": "Intersects",
    "outside": "OutsideCircle",
    "nonzeroangle": "NonZeroAngle",
    "notmidpoint": "NotMidpoint",
}


@dataclass(frozen=True)
class ConstructionStep:
    """One application of a primitive construction.

    ``inputs`` are the arguments of the numeric operation; ``deps`` are all
    constructed objects the step reads, which may include helpers such as the
    known common point of two intersected curves.
    """

    rule: str
    op: str
    inputs: tuple
    output: Ref
    deps: tuple[Ref, ...]
    ndg: tuple[NDGCondition, ...] = ()
    binding: tuple = ()
    aux: tuple = ()

    def aux_dict(self) -> dict:
        return dict(self.aux)

    def bound(self) -> dict:
        return dict(self.binding)

    def text(self) -> str:
        s = f"{self.rule}({', '.join(_txt(a) for a in self.inputs)}) -> {_txt(self.output)}"
        if self.ndg:
            s += f" [ndg: {'; '.join(c.text() for c in self.ndg)}]"
        return s


def _txt(a) -> str:
    if isinstance(a, Ref):
        return a.text()
    if hasattr(a, "text"):
        return a.text()
    return str(a)


@dataclass
class ConstructionPlan:
    problem: ProblemSpec
    steps: list[ConstructionStep]
    solved: bool = True

    @property
    def ndg(self) -> list[NDGCondition]:
        out = []
        for s in self.steps:
            for c in s.ndg:
                if c not in out:
                    out.append(c)
        return out

    def __len__(self):
        return len(self.steps)

    def text(self) -> str:
        return "".join(f"{i}: {s.text()}\n" for i, s in enumerate(self.steps, 1))

    def outputs(self) -> list[Ref]:
        return [s.output for s in self.steps]


@dataclass
class Failure:
    problem: ProblemSpec
    reason: str  # "Exhausted" or "Budget"
    steps: list[ConstructionStep] = field(default_factory=list)
    detail: str = ""

    solved = False

    def text(self) -> str:
        return f"Failure{{{self.reason}}} after {len(self.steps)} steps {self.detail}".rstrip() + "\n"


@dataclass(frozen=True)
class Budget:
    max_steps: int = DEFAULT_MAX_STEPS
    max_secs: float = DEFAULT_MAX_SECS


class KnownSet(KnownObjects):
    """Constructed objects with provenance: 0 for givens, else the step number."""

    def __init__(self, given: Iterable[str]):
        super().__init__()
        self.provenance: dict[Ref, int] = {}
        for g in given:
            self.record(pt(g), 0)

    def record(self, obj: Ref, step: int) -> None:
        if obj in self.members:
            raise ValueError(f"{obj} already constructed")
        self.add(obj)
        self.provenance[obj] = step


# -- the search ----------------------------------------------------------------

class _Values(dict):
    """Exact values of symbolic objects in one triangle, computed on demand."""

    def __init__(self, pts):
        super().__init__()
        self.pts = pts

    def __missing__(self, r):
        v = self[r] = eval_ref(r, self.pts)
        return v


class Witness:
    """Fixed generic triangles used to reject steps that are degenerate in general.

    Two objects may be distinct symbolically yet coincide for every triangle
    (two names for one line, say); intersecting them is not a construction.
    A step is admitted only if its conditions hold and it yields an output
    on each witness.
    """

    def __init__(self, seeds=(20240601, 31337)):
        self.scenes = []
        for s in seeds:
            (a, b, c), pts = sample_triangle(np.random.default_rng(s))
            scale = max(geom.dist(a, b), geom.dist(b, c), geom.dist(c, a))
            self.scenes.append((_Values(pts), scale))

    def admits(self, step: "ConstructionStep") -> bool:
        for values, scale in self.scenes:
            try:
                if not all(ndg_holds(c, values, scale=scale) for c in step.ndg):
                    return False
                if not apply_op(step, values, scale=scale):
                    return False
            except geom.GeometryError:
                return False
        return True


_WITNESS: Optional[Witness] = None


def default_witness() -> Witness:
    global _WITNESS
    if _WITNESS is None:
        _WITNESS = Witness()
    return _WITNESS


def _lemma20(kb: KnowledgeBase, facts: Overlay, known: KnownSet) -> None:
    """Centers lie on the side bisector of every chord between known points."""
    for c in list(facts.candidates("center", {})):
        circle, center = c
        if center in known:
            continue
        on = sorted(
            (v[0] for v in facts.candidates("oncircle", {1: circle}) if v[0] in known),
            key=sort_key,
        )
        for i, p in enumerate(on):
            for q in on[i + 1:]:
                named = [v[0] for v in facts.candidates("pbis", {1: p, 2: q})]
                if named:
                    l = min(named, key=sort_key)
                else:
                    l = bis(p.args[0], q.args[0])
                    facts.add(Fact("pbis", (l, p, q)))
                facts.add(Fact("online", (center, l)))


def _instantiations(rule, facts, known):
    for b in match(rule.premises, facts, {}, known):
        yield b


def _inst_key(rule, b, goal):
    # goal points first, then the least instantiation in canonical order
    out = b[rule.output.name]
    args = tuple(resolve(a, b) for a in rule.op.args)
    return (out not in goal,) + tuple(sort_key(a) for a in args) + (sort_key(out),)


def _make_step(rule, b, facts, known) -> ConstructionStep:
    inputs = tuple(resolve(a, b) for a in rule.op.args)
    output = b[rule.output.name]
    deps = [x for x in inputs if isinstance(x, Ref)]
    aux = []
    if rule.op.name == "intersect":
        a, c = inputs
        common = sorted(
            {v[0] for v in facts.candidates("on", {1: a}) if v[0] in known}
            & {v[0] for v in facts.candidates("on", {1: c}) if v[0] in known},
            key=sort_key,
        )
        if common:
            aux.append(("exclude", tuple(common)))
            deps.extend(common)
    elif rule.op.name in ("angle_measure", "angle_bisector"):
        v, x, y = (b.get(n) for n in ("V", "X", "Y"))
        aux.append(("vertex", v))
        deps.append(v)
        if x in known and y in known:
            aux.append(("rays", (x, y)))
            deps.extend((x, y))
        if "k" in b:
            aux.append(("kind", b["k"]))
    ndg = []
    for call in rule.ndg:
        vals = tuple(resolve(a, b) for a in call.args)
        ndg.append(NDGCondition(NDG_KINDS[call.name], vals))
    seen = []
    for d in deps:
        if d not in seen:
            seen.append(d)
    binding = tuple(sorted(((k, v) for k, v in b.items()), key=lambda kv: kv[0]))
    return ConstructionStep(rule.id, rule.op.name, inputs, output, tuple(seen), tuple(ndg), binding, tuple(aux))


def solve(kb: KnowledgeBase, problem: ProblemSpec, budget: Budget = Budget()) -> Union[ConstructionPlan, Failure]:
    """Waterfall search: apply the first applicable rule, then restart."""
    t0 = time.perf_counter()
    for g in problem.given:
        if g not in kb.vocabulary:
            raise ValueError(f"unknown point {g!r}")
    known = KnownSet(problem.given)
    facts = Overlay(kb.facts)
    witness = default_witness()
    goal = [pt(g) for g in problem.goal]
    steps: list[ConstructionStep] = []
    while not all(g in known for g in goal):
        if len(steps) >= budget.max_steps:
            return Failure(problem, "Budget", steps, f"step limit {budget.max_steps}")
        if time.perf_counter() - t0 > budget.max_secs:
            return Failure(problem, "Budget", steps, f"time limit {budget.max_secs}s")
        _lemma20(kb, facts, known)
        step = None
        for rule in kb.rules:
            cands = sorted(_instantiations(rule, facts, known), key=lambda b: _inst_key(rule, b, goal))
            for b in cands:
                cand = _make_step(rule, b, facts, known)
                if witness.admits(cand):
                    step = cand
                    break
            if step is not None:
                break
        if step is None:
            return Failure(problem, "Exhausted", steps)
        steps.append(step)
        known.record(step.output, len(steps))
    return ConstructionPlan(problem, steps, True)


def clean(plan: ConstructionPlan) -> ConstructionPlan:
    """Backward dependency slice from the goal points."""
    if not plan.solved:
        raise ValueError("only solved plans can be cleaned")
    given = {pt(g) for g in plan.problem.given}
    needed = {pt(g) for g in plan.problem.goal} - given
    keep = []
    for s in reversed(plan.steps):
        if s.output in needed:
            keep.append(s)
            needed.discard(s.output)
            needed.update(d for d in s.deps if d not in given)
    keep.reverse()
    return ConstructionPlan(plan.problem, keep, True)


# -- corpus ------------------------------------------------------------------------

@dataclass
class Outcome:
    problem: ProblemSpec
    solved: bool
    raw_len: int
    clean_len: int
    secs: float
    plan: Optional[ConstructionPlan] = None
    failure: Optional[Failure] = None

    @property
    def discrepancy(self) -> bool:
        # a "solution" for a problem known to be unsolvable needs investigation
        return self.solved and self.problem.status == "U"


@dataclass
class CorpusSummary:
    outcomes: list[Outcome]

    def count(self, status: Optional[str] = None, solved: Optional[bool] = None) -> int:
        return sum(
            1 for o in self.outcomes
            if (status is None or o.problem.status == status) and (solved is None or o.solved == solved)
        )

    @property
    def discrepancies(self) -> list[Outcome]:
        return [o for o in self.outcomes if o.discrepancy]

    def max_clean_len(self) -> int:
        return max((o.clean_len for o in self.outcomes if o.solved), default=0)


def run_one(kb: KnowledgeBase, problem: ProblemSpec, budget: Budget = Budget()) -> Outcome:
    t0 = time.perf_counter()
    res = solve(kb, problem, budget)
    secs = time.perf_counter() - t0
    if isinstance(res, Failure):
        return Outcome(problem, False, len(res.steps), 0, secs, failure=res)
    c = clean(res)
    return Outcome(problem, True, len(res), len(c), secs, plan=c)


_WORKER_KB: Optional[KnowledgeBase] = None


def _init_worker(text: str, order: list[str]) -> None:
    global _WORKER_KB
    _WORKER_KB = load_kb(text).with_rules(order)


def _work(args) -> Outcome:
    problem, budget = args
    return run_one(_WORKER_KB, problem, budget)


def solve_corpus(
    kb: KnowledgeBase, problems: list[ProblemSpec], parallelism: int = 1, budget: Budget = Budget()
) -> CorpusSummary:
    """Solve every problem; results are ordered like ``problems``."""
    if parallelism <= 1 or len(problems) <= 1 or not kb.text:
        return CorpusSummary([run_one(kb, p, budget) for p in problems])
    order = [r.id for r in kb.rules]
    with ProcessPoolExecutor(parallelism, initializer=_init_worker, initargs=(kb.text, order)) as ex:
        outs = list(ex.map(_work, [(p, budget) for p in problems]))
    return CorpusSummary(outs)
