"""Random non-degenerate triangles shared by the verifier and the KB check."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .geom import DegenerateTriangle, Vec2, characteristic_points, dist, min_angle


class SamplingExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class SamplerConfig:
    box: float = 100.0
    min_angle_deg: float = 5.0
    max_side_ratio: float = 20.0
    max_tries: int = 1000


DEFAULT_SAMPLER = SamplerConfig()


def acceptable(a: Vec2, b: Vec2, c: Vec2, cfg: SamplerConfig = DEFAULT_SAMPLER) -> bool:
    sides = (dist(b, c), dist(c, a), dist(a, b))
    if min(sides) == 0.0 or max(sides) / min(sides) >= cfg.max_side_ratio:
        return False
    return min_angle(a, b, c) > math.radians(cfg.min_angle_deg)


def sample_triangle(
    rng: np.random.Generator,
    needed: Optional[Iterable[str]] = None,
    cfg: SamplerConfig = DEFAULT_SAMPLER,
) -> tuple[tuple[Vec2, Vec2, Vec2], dict[str, Vec2]]:
    """Draw vertices uniformly from the box until the triangle is usable.

    ``needed`` restricts which characteristic points must exist; by default
    all of them.
    """
    for _ in range(cfg.max_tries):
        xy = rng.uniform(0.0, cfg.box, size=6)
        a, b, c = Vec2(xy[0], xy[1]), Vec2(xy[2], xy[3]), Vec2(xy[4], xy[5])
        if not acceptable(a, b, c, cfg):
            continue
        try:
            pts = characteristic_points(a, b, c)
        except DegenerateTriangle:
            continue
        want = pts.keys() if needed is None else needed
        if any(pts[n] is None for n in want):
            continue
        return (a, b, c), pts
    raise SamplingExhausted(f"no usable triangle after {cfg.max_tries} draws")
