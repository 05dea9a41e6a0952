"""SVG drawing of one numeric instance of a construction plan."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .. import geom
from ..geom import DEFAULT_TOL, NumCircle, NumLine, Tolerance, Vec2
from ..kb.refs import label_display, pt
from ..solver import ConstructionPlan
from ..verifier import Scene
from .trace import solution_trace

SIDES = (("A", "B"), ("A", "C"), ("B", "C"))


@dataclass(frozen=True)
class SvgOptions:
    width: int = 480
    margin: float = 0.05  # of the larger extent, on every side
    digits: int = 3
    point_radius: float = 0.008  # of the larger extent
    font_size: float = 0.035


def _clip(l: NumLine, x0: float, y0: float, x1: float, y1: float) -> Optional[tuple[Vec2, Vec2]]:
    """The part of ``l`` inside the box, if any."""
    p, d = l.anchor(), l.direction
    lo, hi = -float("inf"), float("inf")
    for start, step, a, b in ((p.x, d.x, x0, x1), (p.y, d.y, y0, y1)):
        if abs(step) < 1e-15:
            if not a <= start <= b:
                return None
            continue
        t1, t2 = (a - start) / step, (b - start) / step
        lo, hi = max(lo, min(t1, t2)), min(hi, max(t1, t2))
    if lo >= hi:
        return None
    return p + d * lo, p + d * hi


def to_svg(plan: ConstructionPlan, scene: Scene, options: SvgOptions = SvgOptions(), tol: Tolerance = DEFAULT_TOL) -> str:
    """Triangle sides solid, constructed lines and circles dashed, points labeled.

    The view fits every point and circle with a margin; lines are clipped
    to it.  Angles and angle loci are not drawn.
    """
    trace = solution_trace(plan, scene, tol)
    vals = trace.values
    labels = list(plan.problem.given)
    labels += [s.output.args[0] for s in plan.steps if s.output.kind == "point" and s.output.args[0] not in labels]
    pts = {g: vals[pt(g)] for g in labels}
    circles = [vals[s.output] for s in plan.steps if isinstance(vals[s.output], NumCircle)]
    xs = [p.x for p in pts.values()] + [c.center.x + s * c.radius for c in circles for s in (-1, 1)]
    ys = [p.y for p in pts.values()] + [c.center.y + s * c.radius for c in circles for s in (-1, 1)]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1e-12)
    m = options.margin * span
    x0, x1, y0, y1 = min(xs) - m, max(xs) + m, min(ys) - m, max(ys) + m
    w, h = x1 - x0, y1 - y0
    nd = options.digits

    def f(v: float) -> str:
        s = f"{v:.{nd}f}"
        return "0" if float(s) == 0 else s

    def xy(p: Vec2) -> tuple[str, str]:
        # SVG's y axis points down
        return f(p.x), f(-p.y)

    height = round(options.width * h / w)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{options.width}" height="{height}" '
        f'viewBox="{f(x0)} {f(-y1)} {f(w)} {f(h)}">',
        f"<title>{plan.problem.label}</title>",
        '<g fill="none" stroke="#555" stroke-dasharray="4 3" vector-effect="non-scaling-stroke">',
    ]
    have_sides = all(pt(v) in vals for v in "ABC")
    side_lines = [geom.line_through(vals[pt(a)], vals[pt(b)]) for a, b in SIDES] if have_sides else []
    eps = tol.rel * span * 1e3
    for s in plan.steps:
        v = vals[s.output]
        if isinstance(v, NumLine):
            if any(geom.same_line(v, l, eps / span + eps) for l in side_lines):
                continue
            seg = _clip(v, x0, y0, x1, y1)
            if seg:
                (ax, ay), (bx, by) = xy(seg[0]), xy(seg[1])
                out.append(f'<line class="aux" x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" stroke-width="1" vector-effect="non-scaling-stroke"/>')
        elif isinstance(v, NumCircle):
            cx, cy = xy(v.center)
            out.append(f'<circle class="aux" cx="{cx}" cy="{cy}" r="{f(v.radius)}" stroke-width="1" vector-effect="non-scaling-stroke"/>')
    out.append("</g>")
    out.append('<g stroke="#000" vector-effect="non-scaling-stroke">')
    if have_sides:
        for a, b in SIDES:
            (ax, ay), (bx, by) = xy(vals[pt(a)]), xy(vals[pt(b)])
            out.append(f'<line class="side" x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" stroke-width="2" vector-effect="non-scaling-stroke"/>')
    out.append("</g>")
    r = options.point_radius * span
    fs = options.font_size * span
    given = set(plan.problem.given)
    for g in labels:
        x, y = xy(pts[g])
        color = "#00c" if g in given else "#c00"
        out.append(f'<circle class="point" cx="{x}" cy="{y}" r="{f(r)}" fill="{color}"/>')
        out.append(
            f'<text class="label" x="{f(pts[g].x + r * 1.5)}" y="{f(-pts[g].y - r * 1.5)}" '
            f'font-size="{f(fs)}" font-family="serif">{label_display(g)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
