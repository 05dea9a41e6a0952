"""Floating-point plane geometry for triangle constructions.

Every construction primitive the solver knows about has a numeric
counterpart here.  Degeneracy is judged relative to a caller-supplied
``scale`` (typically the diagonal of the scene's bounding box).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Union


class GeometryError(ValueError):
    pass


class DegenerateInput(GeometryError):
    pass


class IdenticalObjects(GeometryError):
    pass


class PointNotOutside(GeometryError):
    pass


class ParallelLines(GeometryError):
    pass


class ZeroRatio(GeometryError):
    pass


class DegenerateTriangle(GeometryError):
    pass


@dataclass(frozen=True)
class Tolerance:
    rel: float = 1e-9
    degeneracy_floor: float = 1e-7

    def __post_init__(self):
        if not 0 < self.rel < self.degeneracy_floor < 1:
            raise ValueError(f"need 0 < rel < degeneracy_floor < 1, got {self}")


DEFAULT_TOL = Tolerance()


class Vec2(NamedTuple):
    x: float
    y: float

    def __add__(self, o):  # type: ignore[override]
        return Vec2(self.x + o[0], self.y + o[1])

    def __sub__(self, o):
        return Vec2(self.x - o[0], self.y - o[1])

    def __mul__(self, k):  # type: ignore[override]
        return Vec2(self.x * k, self.y * k)

    __rmul__ = __mul__

    def __truediv__(self, k):
        return Vec2(self.x / k, self.y / k)

    def __neg__(self):
        return Vec2(-self.x, -self.y)

    def dot(self, o) -> float:
        return self.x * o[0] + self.y * o[1]

    def cross(self, o) -> float:
        return self.x * o[1] - self.y * o[0]

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def unit(self) -> "Vec2":
        n = self.norm()
        if n == 0.0:
            raise DegenerateInput("zero vector has no direction")
        return Vec2(self.x / n, self.y / n)

    def perp(self) -> "Vec2":
        return Vec2(-self.y, self.x)


def vec(x: float, y: float) -> Vec2:
    x, y = float(x), float(y)
    if not (math.isfinite(x) and math.isfinite(y)):
        raise DegenerateInput(f"non-finite coordinates ({x}, {y})")
    return Vec2(x, y)


def dist(p, q) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


def midpoint(p: Vec2, q: Vec2) -> Vec2:
    return Vec2((p.x + q.x) / 2, (p.y + q.y) / 2)


class NumLine(NamedTuple):
    """The line ``{p : normal . p == offset}`` with a unit normal."""

    normal: Vec2
    offset: float

    @property
    def direction(self) -> Vec2:
        return Vec2(self.normal.y, -self.normal.x)

    def signed_distance(self, p) -> float:
        return self.normal.dot(p) - self.offset

    def distance(self, p) -> float:
        return abs(self.signed_distance(p))

    def foot(self, p: Vec2) -> Vec2:
        return p - self.normal * self.signed_distance(p)

    def anchor(self) -> Vec2:
        return self.normal * self.offset

    def residual(self, p) -> float:
        return self.distance(p)


class NumCircle(NamedTuple):
    center: Vec2
    radius: float

    def residual(self, p) -> float:
        return abs(dist(self.center, p) - self.radius)


class NumArcPair(NamedTuple):
    """Points S with angle X-S-Y equal to ``angle``: two arcs mirrored in XY."""

    base_x: Vec2
    base_y: Vec2
    angle: float

    def circles(self) -> tuple[NumCircle, NumCircle]:
        x, y = self.base_x, self.base_y
        m = midpoint(x, y)
        half = dist(x, y) / 2
        n = (y - x).perp().unit()
        h = half / math.tan(self.angle)
        r = half / math.sin(self.angle)
        # a center at m + h*n carries the arc on the +n side
        return NumCircle(m + n * h, r), NumCircle(m - n * h, r)

    def contains(self, p, tol: float) -> bool:
        try:
            return abs(angle_at(p, self.base_x, self.base_y) - self.angle) <= tol
        except DegenerateInput:
            return False

    def residual(self, p) -> float:
        r = min(c.residual(p) for c in self.circles())
        side_ok = any(
            _arc_side_ok(self, c, p) for c in self.circles() if c.residual(p) == r
        )
        return r if side_ok else math.inf


def _arc_side_ok(arc: NumArcPair, c: NumCircle, p: Vec2) -> bool:
    x, y = arc.base_x, arc.base_y
    n = (y - x).perp()
    s_center = n.dot(c.center - x)
    s_p = n.dot(p - x)
    if arc.angle < math.pi / 2:
        return s_center * s_p > 0
    if arc.angle > math.pi / 2:
        return s_center * s_p < 0
    return True


Curve = Union[NumLine, NumCircle, NumArcPair]


def angle_at(vertex, p, q) -> float:
    """Unsigned angle p-vertex-q in [0, pi]."""
    u = Vec2(p[0] - vertex[0], p[1] - vertex[1])
    v = Vec2(q[0] - vertex[0], q[1] - vertex[1])
    if u.norm() == 0.0 or v.norm() == 0.0:
        raise DegenerateInput("angle with a zero-length side")
    return math.atan2(abs(u.cross(v)), u.dot(v))


def _line_from_normal(n: Vec2, c: float) -> NumLine:
    # sign convention keeps equal lines comparable
    if n.x < 0 or (n.x == 0 and n.y < 0):
        n, c = -n, -c
    return NumLine(n, c)


def line_through(p: Vec2, q: Vec2, *, scale: float = 1.0, tol: Tolerance = DEFAULT_TOL) -> NumLine:
    d = q - p
    if d.norm() <= tol.degeneracy_floor * scale:
        raise DegenerateInput("line through coincident points")
    n = d.perp().unit()
    return _line_from_normal(n, n.dot(p))


def circle_center_through(c: Vec2, p: Vec2, *, scale: float = 1.0, tol: Tolerance = DEFAULT_TOL) -> NumCircle:
    r = dist(c, p)
    if r <= tol.degeneracy_floor * scale:
        raise DegenerateInput("circle of zero radius")
    return NumCircle(c, r)


def perp_bisector(p: Vec2, q: Vec2, *, scale: float = 1.0, tol: Tolerance = DEFAULT_TOL) -> NumLine:
    d = q - p
    if d.norm() <= tol.degeneracy_floor * scale:
        raise DegenerateInput("bisector of a zero-length segment")
    n = d.unit()
    return _line_from_normal(n, n.dot(midpoint(p, q)))


def perp_through(p: Vec2, l: NumLine) -> NumLine:
    n = l.direction
    return _line_from_normal(n, n.dot(p))


def parallel_through(p: Vec2, l: NumLine) -> NumLine:
    return _line_from_normal(l.normal, l.normal.dot(p))


def diameter_circle(p: Vec2, q: Vec2, *, scale: float = 1.0, tol: Tolerance = DEFAULT_TOL) -> NumCircle:
    r = dist(p, q) / 2
    if r <= tol.degeneracy_floor * scale:
        raise DegenerateInput("diameter circle of coincident points")
    return NumCircle(midpoint(p, q), r)


def circumcircle(p: Vec2, q: Vec2, r: Vec2, *, scale: float = 1.0, tol: Tolerance = DEFAULT_TOL) -> NumCircle:
    b = q - p
    c = r - p
    d = 2 * b.cross(c)
    floor = tol.degeneracy_floor * scale
    if min(b.norm(), c.norm(), dist(q, r)) <= floor or abs(d) <= floor * max(b.norm(), c.norm()):
        raise DegenerateInput("circle through collinear or coincident points")
    b2, c2 = b.dot(b), c.dot(c)
    ux = (c.y * b2 - b.y * c2) / d
    uy = (b.x * c2 - c.x * b2) / d
    center = vec(p.x + ux, p.y + uy)
    return NumCircle(center, math.hypot(ux, uy))


def angle_locus(x: Vec2, y: Vec2, alpha: float, *, scale: float = 1.0, tol: Tolerance = DEFAULT_TOL) -> NumArcPair:
    if dist(x, y) <= tol.degeneracy_floor * scale:
        raise DegenerateInput("angle locus over a zero-length segment")
    if not (tol.degeneracy_floor < alpha < math.pi - tol.degeneracy_floor):
        raise DegenerateInput(f"angle {alpha} outside (0, pi)")
    return NumArcPair(x, y, float(alpha))


def reflect(p: Vec2, l: NumLine) -> Vec2:
    return p - l.normal * (2 * l.signed_distance(p))


def tangent_circle(c: Vec2, l: NumLine, *, scale: float = 1.0, tol: Tolerance = DEFAULT_TOL) -> NumCircle:
    r = l.distance(c)
    if r <= tol.degeneracy_floor * scale:
        raise DegenerateInput("center lies on the tangent line")
    return NumCircle(c, r)


def tangent_lines(p: Vec2, k: NumCircle, *, scale: float = 1.0, tol: Tolerance = DEFAULT_TOL) -> list[NumLine]:
    d = dist(p, k.center)
    if d <= k.radius + tol.degeneracy_floor * scale:
        raise PointNotOutside("point is not outside the circle")
    # touching points lie on the Thales circle over p and the center
    touch = intersect(k, diameter_circle(p, k.center, scale=scale, tol=tol), scale=scale, tol=tol)
    return [line_through(p, t, scale=scale, tol=tol) for t in touch]


def angle_bisectors(l1: NumLine, l2: NumLine, *, tol: Tolerance = DEFAULT_TOL) -> list[NumLine]:
    """Both bisectors of two crossing lines, ordered by normal."""
    if abs(l1.normal.cross(l2.normal)) <= tol.degeneracy_floor:
        raise ParallelLines("parallel lines have no angle bisector")
    out = []
    for sigma in (1.0, -1.0):
        n = l1.normal - l2.normal * sigma
        m = n.norm()
        out.append(_line_from_normal(n / m, (l1.offset - sigma * l2.offset) / m))
    out.sort(key=lambda l: (l.normal.x, l.normal.y))
    return out


def angle_bisector(l1: NumLine, l2: NumLine, region_hint: Vec2, *, tol: Tolerance = DEFAULT_TOL) -> NumLine:
    if abs(l1.normal.cross(l2.normal)) <= tol.degeneracy_floor:
        raise ParallelLines("parallel lines have no angle bisector")
    s1 = l1.signed_distance(region_hint)
    s2 = l2.signed_distance(region_hint)
    sigma = 1.0 if s1 * s2 >= 0 else -1.0
    n = l1.normal - l2.normal * sigma
    m = n.norm()
    return _line_from_normal(n / m, (l1.offset - sigma * l2.offset) / m)


def mirror_line(l: NumLine, axis: NumLine) -> NumLine:
    p = l.anchor()
    q = p + l.direction
    return line_through(reflect(p, axis), reflect(q, axis))


def homothety_point(center: Vec2, r, p: Vec2) -> Vec2:
    return center + (p - center) * float(r)


def homothety_line(center: Vec2, r, l: NumLine) -> NumLine:
    if r == 0:
        raise ZeroRatio("homothety with ratio 0 collapses the line")
    image = homothety_point(center, r, l.foot(center))
    return _line_from_normal(l.normal, l.normal.dot(image))


def ratio_point(x: Vec2, y: Vec2, z: Vec2, r) -> Vec2:
    """The point u with vector(u, x) = r * vector(y, z)."""
    r = float(r)
    return Vec2(x.x - r * (z.x - y.x), x.y - r * (z.y - y.y))


def harmonic_conjugate(x: Vec2, y: Vec2, z: Vec2, *, scale: float = 1.0, tol: Tolerance = DEFAULT_TOL) -> Vec2:
    """The point w on line xy with xz/zy = -xw/wy."""
    d = y - x
    n2 = d.dot(d)
    if n2 <= (tol.degeneracy_floor * scale) ** 2:
        raise DegenerateInput("harmonic conjugate over coincident points")
    t = d.dot(z - x) / n2
    if abs(2 * t - 1) <= tol.degeneracy_floor:
        raise DegenerateInput("the midpoint has no harmonic conjugate")
    return x + d * (t / (2 * t - 1))


def _sorted_points(pts):
    return sorted(pts, key=lambda p: (p.x, p.y))


def _line_line(a: NumLine, b: NumLine, scale: float, tol: Tolerance) -> list[Vec2]:
    det = a.normal.cross(b.normal)
    if abs(det) <= tol.degeneracy_floor:
        if abs(a.offset - b.offset * (1 if a.normal.dot(b.normal) > 0 else -1)) <= tol.rel * scale:
            raise IdenticalObjects("identical lines")
        return []
    x = (a.offset * b.normal.y - b.offset * a.normal.y) / det
    y = (a.normal.x * b.offset - b.normal.x * a.offset) / det
    return [vec(x, y)]


def _line_circle(l: NumLine, k: NumCircle, scale: float, tol: Tolerance) -> list[Vec2]:
    d = l.signed_distance(k.center)
    foot = k.center - l.normal * d
    gap = abs(d) - k.radius
    if gap > tol.rel * scale:
        return []
    if abs(gap) <= tol.rel * scale:
        return [foot]
    h = math.sqrt(k.radius * k.radius - d * d)
    t = l.direction
    return _sorted_points([foot - t * h, foot + t * h])


def _circle_circle(a: NumCircle, b: NumCircle, scale: float, tol: Tolerance) -> list[Vec2]:
    d = dist(a.center, b.center)
    eps = tol.rel * scale
    if d <= eps:
        if abs(a.radius - b.radius) <= eps:
            raise IdenticalObjects("identical circles")
        return []
    if d > a.radius + b.radius + eps or d < abs(a.radius - b.radius) - eps:
        return []
    u = (b.center - a.center) / d
    t = (d * d + a.radius * a.radius - b.radius * b.radius) / (2 * d)
    base = a.center + u * t
    h2 = a.radius * a.radius - t * t
    if h2 <= (eps * a.radius) or abs(d - a.radius - b.radius) <= eps or abs(d - abs(a.radius - b.radius)) <= eps:
        return [base]
    h = math.sqrt(h2)
    return _sorted_points([base + u.perp() * h, base - u.perp() * h])


def _on_arc(arc: NumArcPair, c: NumCircle, p: Vec2) -> bool:
    return _arc_side_ok(arc, c, p)


def intersect(a: Curve, b: Curve, *, scale: float = 1.0, tol: Tolerance = DEFAULT_TOL) -> list[Vec2]:
    """Common points of two curves, sorted by (x, y)."""
    if isinstance(b, NumArcPair) and not isinstance(a, NumArcPair):
        a, b = b, a
    if isinstance(a, NumArcPair):
        if isinstance(b, NumArcPair):
            raise GeometryError("intersection of two angle loci is not supported")
        pts = []
        for c in a.circles():
            for p in intersect(c, b, scale=scale, tol=tol):
                if _on_arc(a, c, p) and dist(p, a.base_x) > tol.rel * scale and dist(p, a.base_y) > tol.rel * scale:
                    pts.append(p)
        return _sorted_points(pts)
    if isinstance(a, NumLine) and isinstance(b, NumLine):
        return _line_line(a, b, scale, tol)
    if isinstance(a, NumCircle) and isinstance(b, NumCircle):
        return _circle_circle(a, b, scale, tol)
    if isinstance(a, NumCircle):
        a, b = b, a
    return _line_circle(a, b, scale, tol)


def residual(curve: Curve, p) -> float:
    return curve.residual(p)


def same_line(a: NumLine, b: NumLine, eps: float) -> bool:
    s = 1.0 if a.normal.dot(b.normal) > 0 else -1.0
    return (a.normal - b.normal * s).norm() <= eps and abs(a.offset - s * b.offset) <= eps


# -- triangle characteristic points ---------------------------------------

LABELS = (
    "A", "B", "C", "O", "Ma", "Mb", "Mc", "G", "Ha", "Hb", "Hc", "H",
    "Ta", "Tb", "Tc", "I", "T'a", "T'b", "T'c", "H'bc", "H'ac", "H'ab",
    "Pa", "Pb", "Pc", "Na", "Nb", "Nc",
)


def min_angle(a: Vec2, b: Vec2, c: Vec2) -> float:
    return min(angle_at(a, b, c), angle_at(b, c, a), angle_at(c, a, b))


def characteristic_points(
    a: Vec2, b: Vec2, c: Vec2, *, tol: Tolerance = DEFAULT_TOL
) -> dict[str, Optional[Vec2]]:
    """All named points of triangle abc.

    External-bisector feet and arc midpoints are ``None`` when the triangle
    is isosceles about that vertex.
    """
    a, b, c = Vec2(*a), Vec2(*b), Vec2(*c)
    la, lb, lc = dist(b, c), dist(c, a), dist(a, b)
    scale = max(la, lb, lc)
    if min(la, lb, lc) <= tol.degeneracy_floor * max(scale, 1e-300):
        raise DegenerateTriangle("coincident vertices")
    try:
        if min_angle(a, b, c) <= tol.degeneracy_floor:
            raise DegenerateTriangle("collinear vertices")
    except DegenerateInput as e:
        raise DegenerateTriangle(str(e)) from None

    pts: dict[str, Optional[Vec2]] = {"A": a, "B": b, "C": c}
    pts["Ma"], pts["Mb"], pts["Mc"] = midpoint(b, c), midpoint(c, a), midpoint(a, b)
    o = circumcircle(a, b, c, scale=scale, tol=tol).center
    pts["O"] = o
    pts["G"] = (a + b + c) / 3
    bc, ca, ab = line_through(b, c), line_through(c, a), line_through(a, b)
    pts["Ha"], pts["Hb"], pts["Hc"] = bc.foot(a), ca.foot(b), ab.foot(c)
    pts["H"] = a + b + c - o * 2
    per = la + lb + lc
    pts["Ta"] = (b * lb + c * lc) / (lb + lc)
    pts["Tb"] = (a * la + c * lc) / (la + lc)
    pts["Tc"] = (a * la + b * lb) / (la + lb)
    pts["I"] = (a * la + b * lb + c * lc) / per
    floor = tol.degeneracy_floor * scale

    def ext(p, wp, q, wq):
        if abs(wp - wq) <= floor:
            return None
        return (p * wp - q * wq) / (wp - wq)

    pts["T'a"] = ext(b, lb, c, lc)
    pts["T'b"] = ext(a, la, c, lc)
    pts["T'c"] = ext(a, la, b, lb)
    h = pts["H"]
    pts["H'bc"], pts["H'ac"], pts["H'ab"] = reflect(h, bc), reflect(h, ca), reflect(h, ab)
    i = pts["I"]
    pts["Pa"], pts["Pb"], pts["Pc"] = bc.foot(i), ca.foot(i), ab.foot(i)

    def arc_mid(v, t, p, q):
        # the bisector from v meets the perpendicular bisector of pq
        try:
            got = intersect(line_through(v, t), perp_bisector(p, q), scale=scale, tol=tol)
        except (IdenticalObjects, DegenerateInput):
            return None
        if not got or abs(dist(p, v) - dist(q, v)) <= floor:
            return None
        return got[0]

    pts["Na"] = arc_mid(a, pts["Ta"], b, c)
    pts["Nb"] = arc_mid(b, pts["Tb"], c, a)
    pts["Nc"] = arc_mid(c, pts["Tc"], a, b)
    return pts
