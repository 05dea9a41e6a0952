import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

import oracles
from wernick import geom
from wernick.geom import NumCircle, Vec2, dist, vec
from wernick.sampling import SamplingExhausted, SamplerConfig, acceptable, sample_triangle

coord = st.floats(-100, 100, allow_nan=False)
point = st.builds(vec, coord, coord)
ratio = st.fractions(min_value=-5, max_value=5, max_denominator=12).filter(lambda r: r != 0)


def spread(*pts):
    return max(dist(p, q) for p in pts for q in pts)


def triangles():
    return st.integers(0, 2**32 - 1).map(lambda s: sample_triangle(np.random.default_rng(s)))


@given(triangles())
def test_characteristic_points_match_oracle(tri):
    (a, b, c), pts = tri
    want = oracles.points(a, b, c)
    scale = spread(a, b, c)
    for name, p in pts.items():
        assert p is not None
        assert dist(p, vec(*want[name])) <= 1e-9 * scale, name


def test_characteristic_points_right_triangle():
    pts = geom.characteristic_points(vec(0, 0), vec(4, 0), vec(0, 3))
    assert pts["H"] == pytest.approx(vec(0, 0))
    assert pts["O"] == pytest.approx(vec(2, 1.5))
    assert pts["I"] == pytest.approx(vec(1, 1))
    assert pts["G"] == pytest.approx(vec(4 / 3, 1))


def test_isosceles_has_no_external_foot():
    pts = geom.characteristic_points(vec(0, 3), vec(-2, 0), vec(2, 0))
    assert pts["T'a"] is None and pts["Na"] is None
    assert pts["T'b"] is not None


def test_degenerate_triangle_rejected():
    with pytest.raises(geom.DegenerateTriangle):
        geom.characteristic_points(vec(0, 0), vec(1, 1), vec(2, 2))
    with pytest.raises(geom.DegenerateTriangle):
        geom.characteristic_points(vec(0, 0), vec(0, 0), vec(2, 1))


@given(point, point)
def test_line_through_contains_both(p, q):
    assume(dist(p, q) > 1e-3)
    l = geom.line_through(p, q, scale=200)
    assert l.distance(p) <= 1e-9 * 200 and l.distance(q) <= 1e-9 * 200
    assert l.normal.norm() == pytest.approx(1.0)


def test_line_through_coincident():
    with pytest.raises(geom.DegenerateInput):
        geom.line_through(vec(1, 1), vec(1, 1))


@given(point, point, point)
def test_perp_through(p, q, x):
    assume(dist(p, q) > 1e-3)
    l = geom.line_through(p, q, scale=200)
    m = geom.perp_through(x, l)
    assert m.distance(x) <= 1e-9 * 200
    assert abs(m.normal.dot(l.normal)) <= 1e-12


@given(point, point, point, ratio)
def test_ratio_point_definition(x, y, z, r):
    u = geom.ratio_point(x, y, z, r)
    # vector(u, x) = r * vector(y, z)
    lhs, rhs = x - u, (z - y) * float(r)
    assert dist(lhs, rhs) <= 1e-9 * max(1.0, spread(x, y, z))


@given(point, point, point)
def test_reflect_is_an_involution(p, q, x):
    assume(dist(p, q) > 1e-3)
    l = geom.line_through(p, q, scale=200)
    y = geom.reflect(x, l)
    assert dist(geom.reflect(y, l), x) <= 1e-9 * 200
    assert l.signed_distance(y) == pytest.approx(-l.signed_distance(x), abs=1e-9 * 200)


@given(point, point, st.floats(-3, 3))
def test_harmonic_conjugate(x, y, t):
    assume(dist(x, y) > 1e-2 and abs(2 * t - 1) > 1e-2 and abs(t) > 1e-3 and abs(t - 1) > 1e-3)
    z = x + (y - x) * t
    w = geom.harmonic_conjugate(x, y, z, scale=200)
    # signed ratios xz/zy = -xw/wy along the line
    d = y - x

    def s(p):
        return (p - x).dot(d) / d.dot(d)

    sz, sw = s(z), s(w)
    assert sz / (1 - sz) == pytest.approx(-sw / (1 - sw), rel=1e-7)
    assert dist(geom.harmonic_conjugate(x, y, w, scale=200), z) <= 1e-7 * spread(x, y, z, w)
    # symmetric in its first two points
    assert dist(geom.harmonic_conjugate(y, x, z, scale=200), w) <= 1e-7 * spread(x, y, z, w)


def test_harmonic_conjugate_of_midpoint():
    with pytest.raises(geom.DegenerateInput):
        geom.harmonic_conjugate(vec(0, 0), vec(2, 0), vec(1, 0))


@given(point, point, point, point)
def test_intersection_points_lie_on_both(p, q, r, s):
    assume(min(dist(p, q), dist(r, s)) > 1e-2)
    curves = [
        geom.line_through(p, q, scale=200),
        geom.circle_center_through(p, q, scale=200),
        geom.line_through(r, s, scale=200),
        geom.circle_center_through(r, s, scale=200),
    ]
    for i, a in enumerate(curves):
        for b in curves[i + 1:]:
            try:
                got = geom.intersect(a, b, scale=200)
            except geom.IdenticalObjects:
                continue
            assert got == sorted(got, key=lambda v: (v.x, v.y))
            for x in got:
                assert a.residual(x) <= 1e-6 and b.residual(x) <= 1e-6


def test_identical_lines_do_not_intersect():
    l = geom.line_through(vec(0, 0), vec(1, 1))
    with pytest.raises(geom.IdenticalObjects):
        geom.intersect(l, geom.line_through(vec(2, 2), vec(5, 5)))
    assert geom.intersect(l, geom.line_through(vec(0, 1), vec(1, 2))) == []


def test_tangent_line_circle_meets_once():
    k = NumCircle(vec(0, 0), 1.0)
    l = geom.line_through(vec(-3, 1), vec(3, 1))
    assert geom.intersect(l, k) == [pytest.approx(vec(0, 1))]


@given(point, st.floats(1, 50), st.floats(0, 2 * math.pi), st.floats(1.05, 4))
def test_tangent_lines_touch(c, r, phi, far):
    k = NumCircle(c, r)
    p = c + vec(math.cos(phi), math.sin(phi)) * (r * far)
    lines = geom.tangent_lines(p, k, scale=200)
    assert len(lines) == 2
    for l in lines:
        assert l.distance(p) <= 1e-9 * 400
        assert l.distance(c) == pytest.approx(r, rel=1e-8)


def test_tangent_from_inside():
    with pytest.raises(geom.PointNotOutside):
        geom.tangent_lines(vec(0.5, 0), NumCircle(vec(0, 0), 1.0))


@given(triangles())
def test_angle_bisectors_are_equidistant(tri):
    (a, b, c), _ = tri
    l1, l2 = geom.line_through(a, b), geom.line_through(a, c)
    bis = geom.angle_bisectors(l1, l2)
    assert len(bis) == 2
    assert abs(bis[0].normal.dot(bis[1].normal)) <= 1e-9
    for l in bis:
        p = l.anchor() + l.direction * 7.0
        assert l1.distance(p) == pytest.approx(l2.distance(p), rel=1e-9, abs=1e-9)
    inner = geom.angle_bisector(l1, l2, (b + c) / 2)
    t = geom.characteristic_points(a, b, c)["Ta"]
    assert inner.distance(t) <= 1e-9 * spread(a, b, c)


@given(point, ratio, point, point)
def test_homothety_line(y, r, p, q):
    assume(dist(p, q) > 1e-2)
    l = geom.line_through(p, q, scale=200)
    img = geom.homothety_line(y, r, l)
    assert abs(abs(img.normal.dot(l.normal)) - 1) <= 1e-12
    for x in (p, q):
        assert img.distance(geom.homothety_point(y, r, x)) <= 1e-9 * 1000


def test_homothety_ratio_zero():
    with pytest.raises(geom.ZeroRatio):
        geom.homothety_line(vec(0, 0), Fraction(0), geom.line_through(vec(0, 1), vec(1, 1)))


@given(point, point, point, point)
def test_mirror_line(p, q, r, s):
    assume(dist(p, q) > 1e-2 and dist(r, s) > 1e-2)
    l, axis = geom.line_through(p, q, scale=200), geom.line_through(r, s, scale=200)
    m = geom.mirror_line(l, axis)
    assert m.distance(geom.reflect(p, axis)) <= 1e-8 * 200


@given(triangles())
def test_circumcircle_through_vertices(tri):
    (a, b, c), pts = tri
    k = geom.circumcircle(a, b, c, scale=spread(a, b, c))
    for v in (a, b, c):
        assert k.residual(v) <= 1e-9 * spread(a, b, c)
    assert dist(k.center, pts["O"]) <= 1e-9 * spread(a, b, c)


def test_circumcircle_collinear():
    with pytest.raises(geom.DegenerateInput):
        geom.circumcircle(vec(0, 0), vec(1, 0), vec(2, 0))


@given(triangles())
def test_angle_locus_contains_incenter(tri):
    (a, b, c), pts = tri
    alpha = geom.angle_at(a, b, c) / 2 + math.pi / 2
    locus = geom.angle_locus(pts["Tb"], pts["Tc"], alpha, scale=spread(a, b, c))
    assert locus.residual(pts["I"]) <= 1e-8 * spread(a, b, c)
    l = geom.line_through(a, pts["Ta"])
    got = geom.intersect(l, locus, scale=spread(a, b, c))
    assert any(dist(g, pts["I"]) <= 1e-8 * spread(a, b, c) for g in got)


def test_tolerance_validation():
    with pytest.raises(ValueError):
        geom.Tolerance(rel=1e-3, degeneracy_floor=1e-4)


@given(st.integers(0, 10**6))
def test_sampler_respects_config(seed):
    (a, b, c), pts = sample_triangle(np.random.default_rng(seed))
    assert acceptable(a, b, c)
    assert all(0 <= p.x <= 100 and 0 <= p.y <= 100 for p in (a, b, c))
    assert all(v is not None for v in pts.values())


def test_sampler_is_deterministic():
    one = sample_triangle(np.random.default_rng(5))[0]
    two = sample_triangle(np.random.default_rng(5))[0]
    assert one == two


def test_sampler_exhaustion():
    cfg = SamplerConfig(min_angle_deg=60.0, max_tries=20)
    with pytest.raises(SamplingExhausted):
        sample_triangle(np.random.default_rng(0), cfg=cfg)
