import math
import random

import numpy as np
import pytest

import gen
import oracles
from bimlog.errors import DegeneracyError, GeometryKindError, OpenLoopError, PlanarityError, ValidationError
from bimlog.geometry import Arc, CurveLoop, CylindricalHelix, Line, Point3, Profile, scale_geometry, transform_geometry
from bimlog.loops import (
    check_profile,
    loop_area,
    loop_centroid,
    loop_is_closed,
    loop_plane,
    polygon_loop,
    profile_area,
    validate_geometry,
)

SQUARE = [(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)]


def circle(radius=1.0, center=Point3(0, 0, 0)):
    return CurveLoop((Arc(center, radius, 0.0, math.pi), Arc(center, radius, math.pi, 2 * math.pi)))


def test_square_closed():
    assert loop_is_closed(polygon_loop(SQUARE))


def test_missing_edge_is_open():
    lp = polygon_loop(SQUARE)
    assert not loop_is_closed(CurveLoop(lp.curves[:3]))


def test_two_arc_circle_closed():
    assert loop_is_closed(circle())


def test_closure_tolerance_applies():
    pts = [Point3(*p) for p in SQUARE]
    gap = Point3(0, 5e-7, 0)
    lp = CurveLoop((Line(pts[0], pts[1]), Line(pts[1], pts[2]), Line(pts[2], pts[3]), Line(pts[3], pts[0] + gap)))
    assert loop_is_closed(lp)
    assert not loop_is_closed(lp, 1e-7)


def test_plane_normals():
    n = loop_plane(polygon_loop(SQUARE)).normal
    assert abs(abs(n.z) - 1) <= 1e-12
    n = loop_plane(polygon_loop([(3, 0, 0), (3, 1, 0), (3, 1, 1), (3, 0, 1)])).normal
    assert abs(abs(n.x) - 1) <= 1e-12


def test_helical_loop_not_planar():
    h = CylindricalHelix(Point3(0, 0, 0), 1.0, Point3(1, 0, 0), Point3(0, 0, 1), 0.5, 0.0, 2 * math.pi)
    back = Line(h.end, h.start)
    with pytest.raises(PlanarityError):
        loop_plane(CurveLoop((h, back)))


def test_open_loop_has_no_plane():
    with pytest.raises(OpenLoopError):
        loop_plane(CurveLoop(polygon_loop(SQUARE).curves[:3]))


def test_collinear_loop_degenerate():
    a, b = Point3(0, 0, 0), Point3(1, 0, 0)
    with pytest.raises(DegeneracyError):
        loop_plane(CurveLoop((Line(a, b), Line(b, a))))


def test_unit_square_area():
    # the plane frame is rotated, so projection costs a few ulps
    assert loop_area(polygon_loop(SQUARE)) == pytest.approx(1.0, rel=1e-12)
    assert loop_area(polygon_loop(SQUARE[::-1])) == pytest.approx(1.0, rel=1e-12)


def test_circle_area():
    assert abs(loop_area(circle()) - math.pi) <= 1e-6


def test_semicircle_with_diameter():
    lp = CurveLoop((Line(Point3(-2, 0, 0), Point3(2, 0, 0)), Arc(Point3(0, 0, 0), 2.0, 0.0, math.pi)))
    assert abs(loop_area(lp) - 2 * math.pi) <= 1e-6 * 2 * math.pi
    # centroid of a half disc sits 4r/(3 pi) from the diameter
    assert abs(loop_centroid(lp).y - 8 / (3 * math.pi)) <= 1e-5


def test_polygon_area_matches_shoelace():
    r = random.Random("shoelace")
    for _ in range(50):
        lp = gen.polygon(r, z=0.0)
        xy = [(c.end1.x, c.end1.y) for c in lp.curves]
        assert abs(loop_area(lp) - abs(oracles.shoelace_xy(xy))) <= 1e-9 * loop_area(lp)


def test_square_centroid():
    c = loop_centroid(polygon_loop([(0, 0, 0), (4, 0, 0), (4, 4, 0), (0, 4, 0)]))
    assert max(abs(c.x - 2), abs(c.y - 2), abs(c.z)) <= 1e-12


def test_area_rigid_motion_and_scaling():
    r = random.Random("area-motion")
    for _ in range(30):
        lp = gen.curve_loop(r)
        a = loop_area(lp)
        q, _ = np.linalg.qr(np.array([[r.gauss(0, 1) for _ in range(3)] for _ in range(3)]))
        moved = transform_geometry(lp, q, Point3(r.uniform(-50, 50), r.uniform(-50, 50), r.uniform(-50, 50)))
        assert abs(loop_area(moved) - a) <= 1e-9 * a
        k = r.uniform(0.2, 5)
        assert abs(loop_area(scale_geometry(lp, k)) - k * k * a) <= 1e-9 * k * k * a


def test_area_needs_a_loop():
    with pytest.raises(GeometryKindError):
        loop_area(Line(Point3(0, 0, 0), Point3(1, 0, 0)))


def test_profile_area_subtracts_holes():
    outer = gen.rect(0, 0, 4, 3, 0)
    hole = gen.rect(1, 1, 2, 2, 0)
    assert profile_area(Profile((outer, hole))) == pytest.approx(11.0, rel=1e-12)


def test_profile_hole_outside():
    with pytest.raises(ValidationError, match="profile-holes-inside"):
        check_profile(Profile((gen.rect(0, 0, 4, 3, 0), gen.rect(5, 1, 6, 2, 0))))


def test_profile_hole_off_plane():
    with pytest.raises(ValidationError, match="profile-coplanar"):
        check_profile(Profile((gen.rect(0, 0, 4, 3, 0), gen.rect(1, 1, 2, 2, 0.5))))


def test_validate_geometry():
    validate_geometry(circle())
    validate_geometry(Line(Point3(0, 0, 0), Point3(1, 0, 0)))
    with pytest.raises(OpenLoopError):
        validate_geometry(CurveLoop(polygon_loop(SQUARE).curves[:3]))
    with pytest.raises(ValidationError, match="loop-closure"):
        validate_geometry(CurveLoop(()))


def test_polygon_needs_three_points():
    with pytest.raises(DegeneracyError):
        polygon_loop(SQUARE[:2])
