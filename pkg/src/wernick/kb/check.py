"""Numeric soundness check of the knowledge base against the geometry kernel."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

from .. import geom
from ..geom import DEFAULT_TOL, NumCircle, NumLine, Tolerance, Vec2, dist
from ..sampling import sample_triangle
from .build import KnowledgeBase
from .refs import STRUCTURAL, TRIANGLE_ANGLES, AngleExpr, Fact, Ref, points_in


class Unevaluable(ValueError):
    """A reference whose defining points are absent in this triangle."""


def _p(pts: Mapping[str, Optional[Vec2]], name: str) -> Vec2:
    v = pts.get(name)
    if v is None:
        raise Unevaluable(name)
    return v


def eval_ref(r: Ref, pts: Mapping[str, Optional[Vec2]]):
    """Numeric value of a symbolic object in the triangle with points ``pts``."""
    a = r.args
    if r.tag == "pt":
        return _p(pts, a[0])
    if r.tag == "line":
        return geom.line_through(_p(pts, a[0]), _p(pts, a[1]))
    if r.tag == "bis":
        return geom.perp_bisector(_p(pts, a[0]), _p(pts, a[1]))
    if r.tag == "hom":
        return geom.homothety_line(_p(pts, a[0]), a[1], eval_ref(a[2], pts))
    if r.tag == "circ":
        return geom.circle_center_through(_p(pts, a[0]), _p(pts, a[1]))
    if r.tag == "diam":
        return geom.diameter_circle(_p(pts, a[0]), _p(pts, a[1]))
    if r.tag == "angle":
        return geom.angle_at(_p(pts, a[1]), _p(pts, a[0]), _p(pts, a[2]))
    if r.tag == "arc":
        return geom.angle_locus(_p(pts, a[0]), _p(pts, a[1]), angle_value(a[2], pts))
    raise TypeError(r)


def angle_value(e: AngleExpr, pts) -> float:
    base = None
    if e.base:
        x, v, y = TRIANGLE_ANGLES[e.base]
        base = geom.angle_at(_p(pts, v), _p(pts, x), _p(pts, y))
    return e.value(base)


def _spread(pts) -> tuple[float, dict[str, float]]:
    """Triangle diameter and each point's distance from the centroid."""
    a, b, c = pts["A"], pts["B"], pts["C"]
    cen = (a + b + c) / 3
    far = {n: dist(p, cen) for n, p in pts.items() if p is not None}
    return max(dist(a, b), dist(b, c), dist(c, a)), far


def fact_scale(names, pts, spread) -> float:
    diameter, far = spread
    return max(diameter, max((far[n] for n in names if n in far), default=0.0))


def _bisector_residual(direction: Vec2, vx: Vec2, vy: Vec2, kind: str) -> float:
    u, w = vx.unit(), vy.unit()
    res = []
    if kind in ("internal", "either"):
        res.append(abs(direction.cross((u + w).unit())))
    if kind in ("external", "either"):
        res.append(abs(direction.cross((u - w).unit())))
    return min(res)


def fact_residual(f: Fact, pts, *, scale: Optional[float] = None, cache: Optional[dict] = None) -> float:
    """Violation of ``f`` relative to the scale of the points involved.

    Distances are divided by the scale; angle and direction checks are
    already dimensionless.
    """
    if scale is None:
        scale = fact_scale([n for n in points_in(f) if n in pts], pts, _spread(pts))
    if cache is None:
        cache = {}

    def ev(r):
        v = cache.get(r)
        if v is None:
            v = cache[r] = eval_ref(r, pts)
        return v

    a = f.args
    p = f.pred
    if p == "online":
        return ev(a[1]).distance(ev(a[0])) / scale
    if p == "oncircle":
        return ev(a[1]).residual(ev(a[0])) / scale
    if p in ("onlocus", "seesangle"):
        s = ev(a[0])
        if p == "onlocus":
            locus: geom.NumArcPair = ev(a[1])
            x, y, alpha = locus.base_x, locus.base_y, locus.angle
        else:
            x, y, alpha = ev(a[1]), ev(a[2]), angle_value(a[3], pts)
        return abs(geom.angle_at(s, x, y) - alpha)
    if p == "perp":
        l1, l2 = ev(a[0]), ev(a[1])
        return abs(l1.normal.dot(l2.normal))
    if p == "vecratio":
        x, y, z, w = (ev(t) for t in a[:4])
        r = float(a[4])
        return ((y - x) - (w - z) * r).norm() / (scale * max(1.0, abs(r)))
    if p == "harmonic":
        x, y, z, w = (ev(t) for t in a)
        d = (y - x).unit()
        off = max(abs(d.cross(q - x)) for q in (z, w))
        tz, tw, ty = d.dot(z - x), d.dot(w - x), d.dot(y - x)
        # XZ/ZY = -XW/WY, multiplied out
        cross_ratio = abs(tz * (ty - tw) + tw * (ty - tz)) / (scale * scale)
        return max(off / scale, cross_ratio)
    if p == "tangent":
        l: NumLine = ev(a[0])
        k: NumCircle = ev(a[1])
        return abs(l.distance(k.center) - k.radius) / scale
    if p == "bisects":
        l: NumLine = ev(a[0])
        x, v, y = (ev(t) for t in a[1:4])
        return max(l.distance(v) / scale, _bisector_residual(l.direction, x - v, y - v, a[4]))
    if p == "reflection":
        u, x = ev(a[0]), ev(a[1])
        return dist(u, geom.reflect(x, ev(a[2]))) / scale
    raise ValueError(f"no numeric meaning for {p}")


@dataclass
class Violation:
    fact: Fact
    sample: int
    residual: float

    def text(self) -> str:
        return f"sample {self.sample}: {self.fact.text()} residual {self.residual:.3g}"


@dataclass
class KBCheckReport:
    n_samples: int
    n_facts: int
    tol: float
    violations: list[Violation] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations

    def failing_facts(self) -> set[Fact]:
        return {v.fact for v in self.violations}

    def text(self) -> str:
        head = (
            f"{self.n_facts} facts x {self.n_samples} triangles, tol {self.tol:g}: "
            f"{len(self.violations)} violations"
        )
        if self.violations:
            head += f" in {len(self.failing_facts())} facts"
        return "\n".join([head, *(v.text() for v in self.violations[:50])])


def numeric_check_kb(
    kb: KnowledgeBase,
    n_samples: int = 1000,
    tol: Tolerance = DEFAULT_TOL,
    *,
    seed: int = 0,
    facts: Optional[list[Fact]] = None,
) -> KBCheckReport:
    """Evaluate every geometric fact of ``kb`` on random triangles.

    Triangles lacking a characteristic point (isosceles cases) are resampled
    by the sampler, so every fact is checked on every sample.
    """
    t0 = time.perf_counter()
    facts = kb.geometric_facts() if facts is None else [f for f in facts if f.pred not in STRUCTURAL]
    names = [[n for n in points_in(f) if n in geom.LABELS] for f in facts]
    rng = np.random.default_rng(seed)
    report = KBCheckReport(n_samples, len(facts), tol.rel)
    for s in range(n_samples):
        _, pts = sample_triangle(rng)
        spread = _spread(pts)
        cache: dict = {}
        for f, fn in zip(facts, names):
            try:
                r = fact_residual(f, pts, scale=fact_scale(fn, pts, spread), cache=cache)
            except geom.GeometryError:
                r = math.inf
            if not r <= tol.rel:
                report.violations.append(Violation(f, s, r))
    report.seconds = time.perf_counter() - t0
    return report

