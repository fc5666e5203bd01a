"""Reflection geometry: primitives, reflections, canonical frames."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fold3d import (
    DegenerateInput,
    Line3,
    LinePlaneRelation,
    Plane3,
    Point3,
    canonical_frame_line_plane_crossing,
    canonical_frame_line_plane_parallel,
    canonical_frame_parallel_lines,
    canonical_frame_point_line,
    canonical_frame_point_plane,
    canonical_frame_skew_lines,
    classify_line_plane,
    lines_setwise_equal,
    perpendicular_bisector_plane,
    plane_gap,
    planes_setwise_equal,
    points_equal,
    reflect_line,
    reflect_plane,
    reflect_point,
)
from helpers import (
    point_off_line,
    point_off_plane,
    random_line,
    random_plane,
    random_point,
    skew_lines,
)

Z0 = Plane3((0, 0, 1), 0.0)


class TestPrimitives:
    def test_point_requires_finite(self):
        with pytest.raises(DegenerateInput):
            Point3(0.0, float("nan"), 0.0)

    def test_line_canonical_base_and_direction(self):
        m = Line3(Point3(5, 3, 7), (0, 0, -2))
        assert m.dir == (0.0, 0.0, 1.0)
        assert np.allclose(m.base.xyz, [5, 3, 0])

    def test_plane_canonical_sign(self):
        a = Plane3((0, 0, -1), 2.0)
        b = Plane3((0, 0, 1), -2.0)
        assert a == b
        assert a.offset == -2.0

    def test_plane_coeffs_round_trip(self):
        pl = Plane3.from_coeffs(1.0, 2.0, -2.0, 6.0)
        a, b, c, d = pl.coeffs()
        pl2 = Plane3.from_coeffs(a, b, c, d)
        assert plane_gap(pl, pl2) < 1e-15

    def test_zero_direction_rejected(self):
        with pytest.raises(DegenerateInput):
            Line3(Point3(0, 0, 0), (0, 0, 0))


class TestReflectPoint:
    def test_mirror_across_coordinate_plane(self):
        assert reflect_point(Z0, Point3(1, 2, 3)) == Point3(1, 2, -3)

    def test_point_on_plane_fixed(self):
        p = Point3(4, 5, 0)
        assert reflect_point(Z0, p) is p

    def test_offset_plane(self):
        assert reflect_point(Plane3((0, 0, 1), 1.0), Point3(0, 0, 0)) == Point3(0, 0, 2)

    def test_pairing_is_symmetric(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            delta, p = random_plane(rng), random_point(rng)
            q = reflect_point(delta, p)
            assert points_equal(reflect_point(delta, q), p, 1e-12)


class TestReflectLine:
    def test_parallel_line_stays_parallel(self):
        m = Line3(Point3(0, 0, 1), (1, 0, 0))
        m2 = reflect_line(Z0, m)
        assert np.allclose(m2.direction, [1, 0, 0])
        assert lines_setwise_equal(m2, Line3(Point3(0, 0, -1), (1, 0, 0)), 1e-12)

    def test_perpendicular_line_fixed_setwise(self):
        zaxis = Line3(Point3(0, 0, 0), (0, 0, 1))
        assert lines_setwise_equal(reflect_line(Z0, zaxis), zaxis, 1e-12)

    def test_contained_line_fixed(self):
        m = Line3(Point3(2, 1, 0), (1, 1, 0))
        assert lines_setwise_equal(reflect_line(Z0, m), m, 1e-12)

    def test_image_coplanar_and_span_perpendicular(self):
        rng = np.random.default_rng(1)
        for _ in range(300):
            delta, m = random_plane(rng), random_line(rng)
            m2 = reflect_line(delta, m)
            d1, d2 = m.direction, m2.direction
            w = m2.base.xyz - m.base.xyz
            assert abs(np.dot(w, np.cross(d1, d2))) < 1e-10
            span_normal = np.cross(d1, d2)
            if np.linalg.norm(span_normal) < 1e-8:
                if np.linalg.norm(w - (w @ d1) * d1) < 1e-12:
                    continue  # image equals the source line, span undefined
                span_normal = np.cross(d1, w)
            span_normal /= np.linalg.norm(span_normal)
            assert abs(span_normal @ delta.normal_vec) < 1e-10


class TestReflectPlane:
    def test_parallel_plane(self):
        assert planes_setwise_equal(
            reflect_plane(Z0, Plane3((0, 0, 1), 3.0)), Plane3((0, 0, 1), -3.0), 1e-12
        )

    def test_perpendicular_plane_fixed(self):
        x0 = Plane3((1, 0, 0), 0.0)
        assert planes_setwise_equal(reflect_plane(Z0, x0), x0, 1e-12)

    def test_mirror_itself_fixed(self):
        assert planes_setwise_equal(reflect_plane(Z0, Z0), Z0, 1e-12)


class TestBisector:
    def test_axis_pair(self):
        assert planes_setwise_equal(
            perpendicular_bisector_plane(Point3(0, 0, 0), Point3(0, 0, 2)),
            Plane3((0, 0, 1), 1.0),
            1e-15,
        )

    def test_x_pair(self):
        assert planes_setwise_equal(
            perpendicular_bisector_plane(Point3(1, 0, 0), Point3(-1, 0, 0)),
            Plane3((1, 0, 0), 0.0),
            1e-15,
        )

    def test_coincident_points_rejected(self):
        with pytest.raises(DegenerateInput):
            perpendicular_bisector_plane(Point3(1, 1, 1), Point3(1, 1, 1))

    def test_maps_first_point_to_second(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            p, q = random_point(rng), random_point(rng)
            if points_equal(p, q, 1e-6):
                continue
            delta = perpendicular_bisector_plane(p, q)
            assert points_equal(reflect_point(delta, p), q, 1e-12)


finite_coord = st.floats(min_value=-100, max_value=100, allow_nan=False)


class TestReflectionProperties:
    @given(st.tuples(finite_coord, finite_coord, finite_coord))
    @settings(max_examples=100, deadline=None)
    def test_involution_hypothesis(self, coords):
        delta = Plane3((0.6, -0.48, 0.64), 0.7)
        p = Point3(*coords)
        assert points_equal(reflect_point(delta, reflect_point(delta, p)), p, 1e-10)

    def test_involution_lines_and_planes(self):
        rng = np.random.default_rng(3)
        for _ in range(300):
            delta = random_plane(rng)
            m = random_line(rng)
            assert lines_setwise_equal(reflect_line(delta, reflect_line(delta, m)), m, 1e-10)
            pi = random_plane(rng)
            assert planes_setwise_equal(
                reflect_plane(delta, reflect_plane(delta, pi)), pi, 1e-10
            )

    def test_isometry(self):
        rng = np.random.default_rng(4)
        for _ in range(500):
            delta = random_plane(rng)
            p, q = random_point(rng), random_point(rng)
            assert abs(
                reflect_point(delta, p).distance_to(reflect_point(delta, q))
                - p.distance_to(q)
            ) < 1e-10

    def test_fixed_set_is_exact(self):
        rng = np.random.default_rng(5)
        for _ in range(300):
            delta = random_plane(rng)
            p = random_point(rng)
            on_plane = Point3(*(p.xyz - delta.signed_distance(p) * delta.normal_vec))
            assert reflect_point(delta, on_plane) is on_plane


class TestClassify:
    def test_contained(self):
        m = Line3(Point3(0, 0, 0), (1, 0, 0))
        assert classify_line_plane(m, Z0) is LinePlaneRelation.CONTAINED

    def test_perpendicular(self):
        m = Line3(Point3(0, 0, 0), (0, 0, 1))
        assert classify_line_plane(m, Plane3((0, 0, 1), 1.0)) is LinePlaneRelation.PERPENDICULAR

    def test_oblique(self):
        theta = math.pi / 4
        m = Line3(Point3(0, 0, 0), (0, math.sin(theta), math.cos(theta)))
        assert classify_line_plane(m, Z0) is LinePlaneRelation.OBLIQUE

    def test_parallel_disjoint(self):
        m = Line3(Point3(0, 0, 2), (1, 0, 0))
        assert classify_line_plane(m, Z0) is LinePlaneRelation.PARALLEL_DISJOINT


def _assert_isometry(frame, pts):
    mapped = [frame.apply_point(p) for p in pts]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            assert abs(mapped[i].distance_to(mapped[j]) - pts[i].distance_to(pts[j])) < 1e-10


class TestCanonicalFrames:
    def test_point_line_canonical_config_gives_identity(self):
        p = Point3(0, 0, 1)
        m = Line3(Point3(0, 0, -1), (0, 1, 0))
        frame, a = canonical_frame_point_line(p, m)
        assert a == pytest.approx(1.0)
        assert np.allclose(frame.rotation, np.eye(3))
        assert np.allclose(frame.translation, 0.0)

    def test_point_line_places_and_preserves(self):
        p = Point3(5, 0, 0)
        m = Line3(Point3(0, 0, 0), (0, 0, 1))
        frame, a = canonical_frame_point_line(p, m)
        assert a == pytest.approx(2.5)
        q = frame.apply_point(p)
        assert np.allclose(q.xyz, [0, 0, 2.5], atol=1e-12)
        m2 = frame.apply_line(m)
        assert np.allclose(np.abs(m2.direction), [0, 1, 0], atol=1e-12)
        assert m2.distance_to_point(Point3(0, 0, -2.5)) < 1e-12
        assert frame.apply_point(p).distance_to(m2.closest_point_to(frame.apply_point(p))) == pytest.approx(5.0)
        _assert_isometry(frame, [p, m.base, m.point_at(3.0)])

    def test_point_on_line_rejected(self):
        m = Line3(Point3(0, 0, 0), (0, 0, 1))
        with pytest.raises(DegenerateInput):
            canonical_frame_point_line(Point3(0, 0, 5), m)

    def test_round_trip(self):
        rng = np.random.default_rng(6)
        for _ in range(100):
            p, m = point_off_line(rng)
            frame, _ = canonical_frame_point_line(p, m)
            inv = frame.inverse()
            q = random_point(rng)
            assert points_equal(inv.apply_point(frame.apply_point(q)), q, 1e-12)

    def test_point_plane_frame(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            p, pi = point_off_plane(rng)
            frame, a = canonical_frame_point_plane(p, pi)
            assert np.allclose(frame.apply_point(p).xyz, [0, 0, a], atol=1e-10)
            pic = frame.apply_plane(pi)
            assert planes_setwise_equal(pic, Plane3((0, 0, 1), -a), 1e-10)

    def test_line_plane_crossing_frame(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            m, pi = random_line(rng), random_plane(rng)
            rel = classify_line_plane(m, pi)
            if rel in (LinePlaneRelation.CONTAINED, LinePlaneRelation.PARALLEL_DISJOINT):
                continue
            frame, theta = canonical_frame_line_plane_crossing(m, pi)
            assert 0 <= theta < math.pi / 2 + 1e-12
            mc = frame.apply_line(m)
            assert planes_setwise_equal(frame.apply_plane(pi), Plane3((0, 0, 1), 0.0), 1e-9)
            d = mc.direction
            assert abs(abs(d[1]) - math.sin(theta)) < 1e-9
            assert abs(abs(d[2]) - math.cos(theta)) < 1e-9
            assert mc.distance_to_point(Point3(0, 0, 0)) < 1e-9

    def test_line_plane_parallel_frame(self):
        m = Line3(Point3(3, 1, 1), (0, 1, 0))
        pi = Plane3((0, 0, 1), -1.0)
        frame, a = canonical_frame_line_plane_parallel(m, pi)
        assert a == pytest.approx(1.0)
        mc = frame.apply_line(m)
        assert mc.distance_to_point(Point3(0, 0, a)) < 1e-12
        assert planes_setwise_equal(frame.apply_plane(pi), Plane3((0, 0, 1), -a), 1e-12)

    def test_skew_frame(self):
        rng = np.random.default_rng(9)
        for _ in range(60):
            m, n = skew_lines(rng)
            frame, delta, a = canonical_frame_skew_lines(m, n)
            assert abs(delta) < math.pi / 2
            mc, nc = frame.apply_line(m), frame.apply_line(n)
            assert mc.distance_to_point(Point3(0, 0, a)) < 1e-9
            assert nc.distance_to_point(Point3(0, 0, -a)) < 1e-9
            assert abs(nc.direction @ np.array([0.0, 0.0, 1.0])) < 1e-9

    def test_parallel_lines_frame(self):
        m = Line3(Point3(0, 0, 1), (0, 1, 0))
        n = Line3(Point3(0, 5, -1), (0, 1, 0))
        frame, a = canonical_frame_parallel_lines(m, n)
        assert a == pytest.approx(1.0)
        assert frame.apply_line(m).distance_to_point(Point3(0, 0, 1)) < 1e-12
        assert frame.apply_line(n).distance_to_point(Point3(0, 0, -1)) < 1e-12
