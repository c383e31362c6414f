import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from incpar.geomkit import (GeometryError, PointSet, circumdisk, diameter_disk, diametral_sign,
                            format_points, incircle, incircle_batch, incircle_raw, orient2d,
                            parse_points, random_points)


def frac_orient(a, b, c):
    ax, ay, bx, by, cx, cy = map(Fraction, (*a, *b, *c))
    d = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return (d > 0) - (d < 0)


def frac_incircle_raw(a, b, c, d):
    rows = []
    for p in (a, b, c):
        x, y = Fraction(p[0]) - Fraction(d[0]), Fraction(p[1]) - Fraction(d[1])
        rows.append((x, y, x * x + y * y))
    (a1, a2, a3), (b1, b2, b3), (c1, c2, c3) = rows
    det = a1 * (b2 * c3 - b3 * c2) - a2 * (b1 * c3 - b3 * c1) + a3 * (b1 * c2 - b2 * c1)
    return (det > 0) - (det < 0)


def test_orient_examples():
    assert orient2d((0, 0), (1, 0), (0, 1)) == 1
    assert orient2d((0, 0), (1, 0), (2, 0)) == 0
    assert orient2d((0, 0), (0, 1), (1, 0)) == -1


def test_incircle_examples():
    a, b, c = (0, 0), (1, 0), (0, 1)
    assert incircle(a, b, c, (0.25, 0.25)) == 1
    assert incircle(a, b, c, (5, 5)) == -1
    assert incircle(a, b, c, (1, 1)) == 0
    # orientation is normalized; the raw determinant flips instead
    assert incircle(a, c, b, (0.25, 0.25)) == 1
    assert incircle_raw(a, c, b, (0.25, 0.25)) == -incircle_raw(a, b, c, (0.25, 0.25))
    with pytest.raises(GeometryError):
        incircle((0, 0), (1, 1), (2, 2), (0, 1))


def test_circumdisk_examples():
    d = circumdisk((0, 0), (2, 0), (1, math.sqrt(3)))
    assert d.cx == pytest.approx(1) and d.cy == pytest.approx(1 / math.sqrt(3))
    assert d.radius == pytest.approx(2 / math.sqrt(3))
    d = circumdisk((0, 0), (2, 0), (0, 2))
    assert (d.cx, d.cy) == pytest.approx((1, 1)) and d.radius == pytest.approx(math.sqrt(2))
    with pytest.raises(GeometryError):
        circumdisk((0, 0), (1, 1), (3, 3))
    assert diameter_disk((0, 0), (0, 2)) == (0.0, 1.0, 1.0)


coord = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)
pt = st.tuples(coord, coord)


@given(pt, pt, pt)
def test_orient_exact_and_antisymmetric(a, b, c):
    s = orient2d(a, b, c)
    assert s == frac_orient(a, b, c)
    assert orient2d(b, a, c) == -s
    assert orient2d(b, c, a) == s


@given(pt, pt, pt, pt)
def test_incircle_exact_rotation_and_reversal(a, b, c, d):
    s = incircle_raw(a, b, c, d)
    assert s == frac_incircle_raw(a, b, c, d)
    assert incircle_raw(b, c, a, d) == s
    assert incircle_raw(b, a, c, d) == -s
    if frac_orient(a, b, c) != 0:
        assert incircle(a, b, c, d) == incircle(b, a, c, d) == frac_orient(a, b, c) * s


def test_near_degenerate_cocircular():
    rng = np.random.default_rng(3)
    for _ in range(300):
        th = rng.random(4) * 2 * math.pi
        pts = [(math.cos(t), math.sin(t)) for t in th]
        d = pts[3]
        for bump in (0.0, math.ulp(d[0]), -math.ulp(d[0])):
            q = (d[0] + bump, d[1])
            assert incircle_raw(pts[0], pts[1], pts[2], q) == frac_incircle_raw(pts[0], pts[1], pts[2], q)


def test_batch_matches_scalar():
    rng = np.random.default_rng(1)
    a, b, c = rng.random((3, 2))
    d = rng.random((500, 2))
    d[:3] = (a, b, c)
    got = incircle_batch(*a, *b, *c, d[:, 0], d[:, 1])
    assert got.tolist() == [incircle_raw(a, b, c, p) for p in d]
    # huge coordinates overflow the float filter and must fall back
    far = incircle_batch(0.0, 0.0, 1e300, 0.0, 0.0, 1e300, np.array([1e299]), np.array([1e299]))
    assert far.tolist() == [frac_incircle_raw((0, 0), (1e300, 0), (0, 1e300), (1e299, 1e299))]


def test_diametral_sign():
    assert diametral_sign((0, 0), (2, 0), (1, 0.5)) == 1
    assert diametral_sign((0, 0), (2, 0), (1, 1)) == 0
    assert diametral_sign((0, 0), (2, 0), (3, 0)) == -1


def test_parse_points():
    pts = parse_points(["# header", "0 0", "", "1.5 -2  # note", "3e2 4"])
    assert [(p.x, p.y, p.id) for p in pts] == [(0, 0, 0), (1.5, -2, 1), (300, 4, 2)]
    for bad, line in ((["0 0", "1"], 2), (["x y"], 1), (["nan 1"], 1), (["1 inf"], 1)):
        with pytest.raises(ValueError, match=f"line {line}"):
            parse_points(bad)


@given(st.lists(pt, max_size=30))
def test_format_parse_round_trip(points):
    back = parse_points(format_points(points).splitlines())
    assert [(p.x, p.y) for p in back] == [(float(x), float(y)) for x, y in points]


def test_random_points_and_pointset():
    pts = random_points(100, 4)
    assert pts == random_points(100, 4)
    assert all(0 <= p.x < 1 and 0 <= p.y < 1 for p in pts)
    ps = PointSet.of(pts)
    assert len(ps) == 100 and ps.x[5] == pts[5].x
    with pytest.raises(ValueError):
        PointSet.of([(0.0, float("nan"))])
