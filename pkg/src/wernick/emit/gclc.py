"""GCLC-style scripts for construction plans, with an interpreter for them.

Commands from the GCLC core used here:

    point X x y          line l A B          perp l X m        parallel l X m
    intersec P a b       intersec2 P Q a b   circle k O A      med l A B
    midpoint M A B       towards X A B t     translate X A B Y foot F X m
    bis l A V B          reflexion X m Y     cmark_b/_r X      drawsegment A B
    drawdashline l       drawdashcircle k

``towards X A B t`` is A + t(B - A); ``translate X A B Y`` is Y + (B - A);
``reflexion X m Y`` mirrors Y in m; ``intersec2`` names the intersection
points in (x, y) order.  Steps with no GCLC counterpart use these
extensions, marked with ``%ext`` in the script:

    harmonic W X Y Z     W with (X,Y;Z,W) harmonic
    mirror l m a         the line m reflected in a
    anglebis l a b i     the i-th bisector of lines a, b (normal order)
    angle t a b i        the i-th angle between lines a, b (acute first)
    arcs T X Y t c p     points S with angle XSY = c*t + p*pi
    intersecn P i a b    the i-th intersection of two curves in (x, y) order
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .. import geom
from ..geom import DEFAULT_TOL, NumArcPair, NumCircle, NumLine, Tolerance, Vec2, dist
from ..kb.refs import Ref, pt
from ..solver import ConstructionPlan, ConstructionStep
from ..verifier import BranchTrace, Scene
from .trace import solution_trace

BOX = 60.0
MARGIN = 5.0
SIDES = (("A", "B"), ("A", "C"), ("B", "C"))


class UnsupportedStep(ValueError):
    pass


class GclcError(ValueError):
    pass


@dataclass
class GclcScript:
    header: list[str] = field(default_factory=list)
    body: list[str] = field(default_factory=list)
    footer: list[str] = field(default_factory=list)

    def lines(self) -> list[str]:
        return self.header + self.body + self.footer

    def text(self) -> str:
        return "".join(l + "\n" for l in self.lines())


# -- interpreter ---------------------------------------------------------------

def _num(tok: str) -> float:
    try:
        return float(Fraction(tok))
    except (ValueError, ZeroDivisionError):
        raise GclcError(f"not a number: {tok!r}") from None


class Machine:
    """Executes script commands; ``env`` maps identifiers to values."""

    def __init__(self, scale: float = BOX, tol: Tolerance = DEFAULT_TOL):
        self.env: dict[str, object] = {}
        self.scale = scale
        self.tol = tol

    def get(self, name: str, kind=None):
        if name not in self.env:
            raise GclcError(f"undeclared identifier {name!r}")
        v = self.env[name]
        if kind is not None and not isinstance(v, kind):
            kinds = kind if isinstance(kind, tuple) else (kind,)
            raise GclcError(f"{name!r} is not a {' or '.join(k.__name__ for k in kinds)}")
        return v

    def define(self, name: str, value) -> None:
        if name in self.env:
            raise GclcError(f"identifier {name!r} defined twice")
        self.env[name] = value

    def run(self, text: str) -> dict[str, object]:
        for n, raw in enumerate(text.splitlines(), 1):
            line = raw.split("%", 1)[0].strip()
            if line:
                try:
                    self.exec(line)
                except geom.GeometryError as e:
                    raise GclcError(f"line {n}: {line}: {e}") from e
                except GclcError as e:
                    raise GclcError(f"line {n}: {e}") from e
        return self.env

    def exec(self, line: str) -> None:
        cmd, *a = line.split()
        P, L, C = Vec2, NumLine, NumCircle
        kw = {"scale": self.scale, "tol": self.tol}
        g = self.get
        if cmd.startswith("cmark_"):
            g(a[0], P)
            return
        if cmd == "drawsegment":
            g(a[0], P), g(a[1], P)
            return
        if cmd == "drawdashline":
            g(a[0], L)
            return
        if cmd == "drawdashcircle":
            g(a[0], C)
            return
        want = {
            "point": 3, "line": 3, "perp": 3, "parallel": 3, "intersec": 3, "intersec2": 4,
            "circle": 3, "med": 3, "midpoint": 3, "towards": 4, "translate": 4, "foot": 3,
            "bis": 4, "reflexion": 3, "harmonic": 4, "mirror": 3, "anglebis": 4, "angle": 4,
            "arcs": 6, "intersecn": 4,
        }
        if cmd not in want:
            raise GclcError(f"unknown command {cmd!r}")
        if len(a) != want[cmd]:
            raise GclcError(f"{cmd} takes {want[cmd]} arguments")
        if cmd == "point":
            v = geom.vec(_num(a[1]), _num(a[2]))
        elif cmd == "line":
            v = geom.line_through(g(a[1], P), g(a[2], P), **kw)
        elif cmd == "perp":
            v = geom.perp_through(g(a[1], P), g(a[2], L))
        elif cmd == "parallel":
            v = geom.parallel_through(g(a[1], P), g(a[2], L))
        elif cmd == "intersec":
            pts = geom.intersect(g(a[1], L), g(a[2], L), **kw)
            if not pts:
                raise GclcError(f"{a[1]} and {a[2]} do not meet")
            v = pts[0]
        elif cmd == "intersec2":
            x, y = g(a[2], (L, C)), g(a[3], (L, C))
            pts = geom.intersect(x, y, **kw)
            if not pts:
                raise GclcError(f"{a[2]} and {a[3]} do not meet")
            self.define(a[0], pts[0])
            v = pts[-1]
            a = a[1:]
        elif cmd == "circle":
            v = geom.circle_center_through(g(a[1], P), g(a[2], P), **kw)
        elif cmd == "med":
            v = geom.perp_bisector(g(a[1], P), g(a[2], P), **kw)
        elif cmd == "midpoint":
            v = geom.midpoint(g(a[1], P), g(a[2], P))
        elif cmd == "towards":
            x, y = g(a[1], P), g(a[2], P)
            v = x + (y - x) * _num(a[3])
        elif cmd == "translate":
            v = g(a[3], P) + (g(a[2], P) - g(a[1], P))
        elif cmd == "foot":
            v = g(a[2], L).foot(g(a[1], P))
        elif cmd == "bis":
            x, c, y = g(a[1], P), g(a[2], P), g(a[3], P)
            l1, l2 = geom.line_through(c, x, **kw), geom.line_through(c, y, **kw)
            u, w = (x - c).unit(), (y - c).unit()
            v = geom.angle_bisector(l1, l2, c + u + w, tol=self.tol)
        elif cmd == "reflexion":
            v = geom.reflect(g(a[2], P), g(a[1], L))
        elif cmd == "harmonic":
            v = geom.harmonic_conjugate(g(a[1], P), g(a[2], P), g(a[3], P), **kw)
        elif cmd == "mirror":
            v = geom.mirror_line(g(a[1], L), g(a[2], L))
        elif cmd == "anglebis":
            v = _pick(geom.angle_bisectors(g(a[1], L), g(a[2], L), tol=self.tol), a[3])
        elif cmd == "angle":
            v = _pick(_angles(g(a[1], L), g(a[2], L), self.tol), a[3])
        elif cmd == "arcs":
            t = g(a[3], float)
            v = geom.angle_locus(g(a[1], P), g(a[2], P), _num(a[4]) * t + _num(a[5]) * math.pi, **kw)
        else:  # intersecn
            curves = (L, C, NumArcPair)
            v = _pick(geom.intersect(g(a[2], curves), g(a[3], curves), **kw), a[1])
        self.define(a[0], v)


def _pick(options: list, tok: str):
    try:
        i = int(tok)
    except ValueError:
        raise GclcError(f"not an index: {tok!r}") from None
    if not 1 <= i <= len(options):
        raise GclcError(f"index {i} out of range 1..{len(options)}")
    return options[i - 1]


def _angles(l1: NumLine, l2: NumLine, tol: Tolerance) -> list[float]:
    c = abs(l1.direction.dot(l2.direction))
    if 1.0 - c <= tol.degeneracy_floor:
        raise geom.ParallelLines("no angle between parallel lines")
    t = math.acos(min(1.0, c))
    return [t, math.pi - t]


def run_gclc(text: str, tol: Tolerance = DEFAULT_TOL) -> dict[str, object]:
    """Execute a script; returns every defined identifier's value."""
    return Machine(tol=tol).run(text)


# -- emitter -----------------------------------------------------------------

def ident(obj) -> str:
    """Script identifier for a KB object."""
    def lab(s: str) -> str:
        return s.replace("'", "p")

    if isinstance(obj, str):
        return lab(obj)
    a = obj.args
    if obj.tag == "pt":
        return lab(a[0])
    if obj.tag == "line":
        return f"l_{lab(a[0])}_{lab(a[1])}"
    if obj.tag == "bis":
        return f"s_{lab(a[0])}_{lab(a[1])}"
    if obj.tag == "hom":
        k = str(a[1]).replace("-", "m").replace("/", "_")
        return f"h_{lab(a[0])}_{k}_{ident(a[2])}"
    if obj.tag == "circ":
        return f"k_{lab(a[0])}_{lab(a[1])}"
    if obj.tag == "diam":
        return f"d_{lab(a[0])}_{lab(a[1])}"
    if obj.tag == "angle":
        return "w_" + "_".join(lab(x) for x in a)
    if obj.tag == "arc":
        return f"loc_{lab(a[0])}_{lab(a[1])}"
    raise UnsupportedStep(f"no identifier for {obj.text()}")


def _fmt(x: float) -> str:
    s = f"{x:.13f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _ratio(r) -> str:
    r = Fraction(r)
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


@dataclass(frozen=True)
class Placement:
    """Uniform scaling of scene coordinates into the drawing box."""

    origin: Vec2
    factor: float
    shift: Vec2

    @classmethod
    def fit(cls, pts: list[Vec2], box: float = BOX, margin: float = MARGIN) -> "Placement":
        xs, ys = [p.x for p in pts], [p.y for p in pts]
        w, h = max(xs) - min(xs), max(ys) - min(ys)
        span = max(w, h, 1e-300)
        f = (box - 2 * margin) / span
        shift = geom.vec(margin + ((box - 2 * margin) - w * f) / 2, margin + ((box - 2 * margin) - h * f) / 2)
        return cls(geom.vec(min(xs), min(ys)), f, shift)

    def __call__(self, p: Vec2) -> Vec2:
        return (p - self.origin) * self.factor + self.shift

    def map(self, v):
        """Image of a point, line or circle; other values are unchanged."""
        if isinstance(v, Vec2):
            return self(v)
        if isinstance(v, NumLine):
            n = v.normal
            return NumLine(n, self.factor * (v.offset - n.dot(self.origin)) + n.dot(self.shift))
        if isinstance(v, NumCircle):
            return NumCircle(self(v.center), v.radius * self.factor)
        return v


class _Emitter:
    def __init__(self, plan: ConstructionPlan, trace: BranchTrace, place: Placement, tol: Tolerance):
        self.plan = plan
        self.trace = trace
        self.place = place
        self.m = Machine(tol=tol)
        self.tol = tol
        self.script = GclcScript()
        self.names: dict[Ref, str] = {}
        self.line_points: dict[str, tuple[str, str]] = {}
        self.centers: dict[str, str] = {}
        self.temp = 0

    def emit(self, line: str, part: Optional[list] = None) -> None:
        self.m.exec(line.split("%", 1)[0])
        (self.script.body if part is None else part).append(line)

    def fresh(self, stem: str) -> str:
        self.temp += 1
        return f"{stem}{self.temp}"

    def name(self, obj) -> str:
        if isinstance(obj, Ref):
            return self.names[obj]
        raise UnsupportedStep(f"no identifier for {obj!r}")

    def target(self, step: ConstructionStep):
        return self.place.map(self.trace.values[step.output])

    def which(self, options: list, want) -> int:
        """1-based index of the option equal to the traced value."""
        eps = self.tol.rel * BOX * 1e3
        for i, o in enumerate(options, 1):
            if isinstance(o, Vec2) and isinstance(want, Vec2) and dist(o, want) <= eps:
                return i
            if isinstance(o, NumLine) and isinstance(want, NumLine) and geom.same_line(o, want, eps):
                return i
            if isinstance(o, float) and isinstance(want, float) and abs(o - want) <= 1e-9:
                return i
        raise UnsupportedStep("traced value matches no branch")

    def declare(self) -> None:
        for g in self.plan.problem.given:
            p = self.place(self.trace.values[pt(g)])
            self.names[pt(g)] = ident(g)
            self.emit(f"point {ident(g)} {_fmt(p.x)} {_fmt(p.y)}", self.script.header)

    def step(self, s: ConstructionStep) -> None:
        out = ident(s.output)
        n = [self.name(x) if isinstance(x, Ref) else x for x in s.inputs]
        op = s.op
        if op == "line_through":
            self.emit(f"line {out} {n[0]} {n[1]}")
            self.line_points[out] = (n[0], n[1])
        elif op == "perp_through":
            self.emit(f"perp {out} {n[0]} {n[1]}")
        elif op == "perp_bisector":
            self.emit(f"med {out} {n[0]} {n[1]}")
        elif op == "circle_center_through":
            self.emit(f"circle {out} {n[0]} {n[1]}")
            self.centers[out] = n[0]
        elif op == "reflect":
            self.emit(f"reflexion {out} {n[1]} {n[0]}")
        elif op == "ratio_point":
            self._ratio(s, out, n)
        elif op == "intersect":
            self._intersect(s, out, n)
        elif op == "diameter_circle":
            mid = self.fresh("m")
            self.emit(f"midpoint {mid} {n[0]} {n[1]}")
            self.emit(f"circle {out} {mid} {n[0]}")
            self.centers[out] = mid
        elif op == "circumcircle":
            s1, s2, o = self.fresh("s"), self.fresh("s"), self.fresh("o")
            self.emit(f"med {s1} {n[0]} {n[1]}")
            self.emit(f"med {s2} {n[1]} {n[2]}")
            self.emit(f"intersec {o} {s1} {s2}")
            self.emit(f"circle {out} {o} {n[0]}")
            self.centers[out] = o
        elif op == "tangent_circle":
            f = self.fresh("f")
            self.emit(f"foot {f} {n[0]} {n[1]}")
            self.emit(f"circle {out} {n[0]} {f}")
            self.centers[out] = n[0]
        elif op == "tangent_line":
            self._tangent(s, out, n)
        elif op == "homothety_line":
            f, img = self.fresh("f"), self.fresh("f")
            self.emit(f"foot {f} {n[0]} {n[2]}")
            self.emit(f"towards {img} {n[0]} {f} {_ratio(n[1])}")
            self.emit(f"parallel {out} {img} {n[2]}")
        elif op == "mirror_line":
            pts = self.line_points.get(n[0])
            if pts:
                p1, p2 = self.fresh("r"), self.fresh("r")
                self.emit(f"reflexion {p1} {n[1]} {pts[0]}")
                self.emit(f"reflexion {p2} {n[1]} {pts[1]}")
                self.emit(f"line {out} {p1} {p2}")
                self.line_points[out] = (p1, p2)
            else:
                self.emit(f"mirror {out} {n[0]} {n[1]}  %ext")
        elif op == "angle_bisector":
            self._bisector(s, out, n)
        elif op == "angle_measure":
            opts = _angles(self.m.env[n[0]], self.m.env[n[1]], self.tol)
            self.emit(f"angle {out} {n[0]} {n[1]} {self.which(opts, self.target(s))}  %ext")
        elif op == "angle_locus":
            e = n[2]
            self.emit(f"arcs {out} {n[0]} {n[1]} {n[3]} {_ratio(e.coeff)} {_ratio(e.plus_pi)}  %ext")
        elif op == "harmonic_conjugate":
            self.emit(f"harmonic {out} {n[0]} {n[1]} {n[2]}  %ext")
        else:
            raise UnsupportedStep(f"no GCLC expansion for {op}")
        self.names[s.output] = out

    def _ratio(self, s, out, n) -> None:
        # u = x - r(z - y): shift x by y - z, then go r of the way there
        x, y, z, r = n
        if z == x:
            if Fraction(r) == Fraction(1, 2):
                self.emit(f"midpoint {out} {x} {y}")
            else:
                self.emit(f"towards {out} {x} {y} {_ratio(r)}")
            return
        t = self.fresh("t")
        self.emit(f"translate {t} {z} {y} {x}")
        self.emit(f"towards {out} {x} {t} {_ratio(r)}")

    def _intersect(self, s, out, n) -> None:
        a, b = (self.m.env[x] for x in n)
        if isinstance(a, NumLine) and isinstance(b, NumLine):
            self.emit(f"intersec {out} {n[0]} {n[1]}")
            return
        pts = geom.intersect(a, b, scale=BOX, tol=self.tol)
        i = self.which(pts, self.target(s))
        if isinstance(a, NumArcPair) or isinstance(b, NumArcPair):
            self.emit(f"intersecn {out} {i} {n[0]} {n[1]}  %ext")
            return
        other = self.fresh("x")
        first, second = (out, other) if i == 1 else (other, out)
        self.emit(f"intersec2 {first} {second} {n[0]} {n[1]}")

    def _tangent(self, s, out, n) -> None:
        x, k = n
        c = self.centers.get(k)
        if c is None:
            raise UnsupportedStep(f"center of {k} is not named")
        m, t, p1, p2 = self.fresh("m"), self.fresh("c"), self.fresh("p"), self.fresh("p")
        self.emit(f"midpoint {m} {x} {c}")
        self.emit(f"circle {t} {m} {x}")
        self.emit(f"intersec2 {p1} {p2} {t} {k}")
        lines = [geom.line_through(self.m.env[x], self.m.env[p], scale=BOX, tol=self.tol) for p in (p1, p2)]
        p = (p1, p2)[self.which(lines, self.target(s)) - 1]
        self.emit(f"line {out} {x} {p}")
        self.line_points[out] = (x, p)

    def _bisector(self, s, out, n) -> None:
        aux = s.aux_dict()
        want = self.target(s)
        if aux.get("kind") == "internal" and "rays" in aux and aux.get("vertex") in self.names:
            v = self.names[aux["vertex"]]
            x, y = (self.names[r] for r in aux["rays"])
            cand = geom.angle_bisector(
                geom.line_through(self.m.env[v], self.m.env[x], scale=BOX, tol=self.tol),
                geom.line_through(self.m.env[v], self.m.env[y], scale=BOX, tol=self.tol),
                self.m.env[v] + (self.m.env[x] - self.m.env[v]).unit() + (self.m.env[y] - self.m.env[v]).unit(),
                tol=self.tol,
            )
            if self.which([cand], want) == 1:
                self.emit(f"bis {out} {x} {v} {y}")
                return
        opts = geom.angle_bisectors(self.m.env[n[0]], self.m.env[n[1]], tol=self.tol)
        self.emit(f"anglebis {out} {n[0]} {n[1]} {self.which(opts, want)}  %ext")

    def footer(self) -> None:
        f = self.script.footer
        given = set(self.plan.problem.given)
        marks = [g for g in self.plan.problem.given]
        marks += [s.output.args[0] for s in self.plan.steps if s.output.kind == "point"]
        for p in marks:
            self.emit(f"cmark_{'b' if p in given else 'r'} {ident(p)}", f)
        if all(pt(v) in self.names for v in "ABC"):
            sides = [geom.line_through(self.m.env[a], self.m.env[b], scale=BOX, tol=self.tol) for a, b in SIDES]
            for a, b in SIDES:
                self.emit(f"drawsegment {a} {b}", f)
        else:
            sides = []
        eps = self.tol.rel * BOX * 1e3
        for s in self.plan.steps:
            name = self.names[s.output]
            v = self.m.env[name]
            if isinstance(v, NumLine) and not any(geom.same_line(v, l, eps) for l in sides):
                self.emit(f"drawdashline {name}", f)
            elif isinstance(v, NumCircle):
                self.emit(f"drawdashcircle {name}", f)


def to_gclc(plan: ConstructionPlan, scene: Scene, tol: Tolerance = DEFAULT_TOL) -> GclcScript:
    """Script for ``plan`` with the given points of ``scene`` placed in [0,60]².

    Branching steps follow the first branch that yields the specified
    triangle on ``scene``.
    """
    trace = solution_trace(plan, scene, tol)
    place = Placement.fit([trace.values[pt(g)] for g in plan.problem.given])
    e = _Emitter(plan, trace, place, tol)
    e.declare()
    for s in plan.steps:
        e.step(s)
    e.footer()
    return e.script


def round_trip_error(plan: ConstructionPlan, scene: Scene, script: GclcScript, tol: Tolerance = DEFAULT_TOL) -> float:
    """Largest distance, relative to the box, between scripted and traced goal points."""
    trace = solution_trace(plan, scene, tol)
    place = Placement.fit([trace.values[pt(g)] for g in plan.problem.given])
    env = run_gclc(script.text(), tol)
    worst = 0.0
    for g in plan.problem.goal:
        got = env.get(ident(g))
        if not isinstance(got, Vec2):
            return math.inf
        worst = max(worst, dist(got, place(trace.values[pt(g)])))
    return worst / BOX
