"""Numeric meaning of construction steps and non-degeneracy conditions."""
from __future__ import annotations

import math
from typing import Mapping

from . import geom
from .geom import DEFAULT_TOL, Tolerance, Vec2, dist
from .kb.refs import Ref


class UnsupportedOp(ValueError):
    pass


def _value(x, values: Mapping[Ref, object]):
    return values[x] if isinstance(x, Ref) else x


def _drop_known(pts: list[Vec2], known: list[Vec2], eps: float) -> list[Vec2]:
    return [p for p in pts if all(dist(p, k) > eps for k in known)]


def apply_op(step, values: Mapping[Ref, object], *, scale: float, tol: Tolerance = DEFAULT_TOL) -> list:
    """Every candidate value of ``step.output``; several when the step branches.

    Raises ``geom.GeometryError`` when the inputs are degenerate for the op.
    """
    ins = [_value(x, values) for x in step.inputs]
    aux = step.aux_dict()
    op = step.op
    kw = {"scale": scale, "tol": tol}
    if op == "line_through":
        return [geom.line_through(*ins, **kw)]
    if op == "perp_through":
        return [geom.perp_through(*ins)]
    if op == "ratio_point":
        return [geom.ratio_point(*ins)]
    if op == "intersect":
        pts = geom.intersect(ins[0], ins[1], **kw)
        known = [values[e] for e in aux.get("exclude", ())]
        return _drop_known(pts, known, tol.degeneracy_floor * scale)
    if op == "circle_center_through":
        return [geom.circle_center_through(*ins, **kw)]
    if op == "perp_bisector":
        return [geom.perp_bisector(*ins, **kw)]
    if op == "reflect":
        return [geom.reflect(*ins)]
    if op == "diameter_circle":
        return [geom.diameter_circle(*ins, **kw)]
    if op == "circumcircle":
        return [geom.circumcircle(*ins, **kw)]
    if op == "tangent_circle":
        return [geom.tangent_circle(*ins, **kw)]
    if op == "tangent_line":
        return geom.tangent_lines(*ins, **kw)
    if op == "mirror_line":
        return [geom.mirror_line(*ins)]
    if op == "homothety_line":
        return [geom.homothety_line(*ins)]
    if op == "angle_bisector":
        l1, l2 = ins
        kind = aux.get("kind")
        if "rays" in aux and kind in ("internal", "external"):
            v = values[aux["vertex"]]
            x, y = (values[r] for r in aux["rays"])
            u, w = (x - v).unit(), (y - v).unit()
            hint = v + (u + w if kind == "internal" else u - w)
            return [geom.angle_bisector(l1, l2, hint, tol=tol)]
        return geom.angle_bisectors(l1, l2, tol=tol)
    if op == "angle_measure":
        if "rays" in aux:
            v = values[aux["vertex"]]
            x, y = (values[r] for r in aux["rays"])
            return [geom.angle_at(v, x, y)]
        l1, l2 = ins
        c = abs(l1.direction.dot(l2.direction))
        if 1.0 - c <= tol.degeneracy_floor:
            raise geom.ParallelLines("no angle between parallel lines")
        theta = math.acos(min(1.0, c))
        return [theta, math.pi - theta]
    if op == "harmonic_conjugate":
        return [geom.harmonic_conjugate(*ins, **kw)]
    if op == "angle_locus":
        x, y, e, a = ins
        return [geom.angle_locus(x, y, e.value(a), **kw)]
    raise UnsupportedOp(op)


def ndg_holds(cond, values: Mapping[Ref, object], *, scale: float, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether a non-degeneracy condition holds for concrete values."""
    args = [_value(a, values) for a in cond.args]
    floor = tol.degeneracy_floor * scale
    k = cond.kind
    try:
        if k == "Distinct":
            return dist(args[0], args[1]) > floor
        if k == "NonCollinear":
            p, q, r = args
            return abs((q - p).cross(r - p)) > floor * scale
        if k == "NotOnLine":
            return args[1].distance(args[0]) > floor
        if k == "Intersects":
            return bool(geom.intersect(args[0], args[1], scale=scale, tol=tol))
        if k == "OutsideCircle":
            p, c = args
            return dist(p, c.center) > c.radius + floor
        if k == "NotMidpoint":
            x, y, z = args
            return dist(z, (x + y) / 2) > floor
        if k == "NonZeroAngle":
            return tol.degeneracy_floor < args[0] < math.pi - tol.degeneracy_floor
    except geom.GeometryError:
        return False
    raise ValueError(f"unknown condition {k}")
