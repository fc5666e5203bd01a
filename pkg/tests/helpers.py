"""Shared random-instance generators for the test suite.

All generators take a numpy Generator so tests stay reproducible; scenes are
desk scale (coordinates within a few units of the origin) and degenerate
configurations are rejected with a separation margin.
"""

from __future__ import annotations

import numpy as np

from fold3d import (
    Constraint,
    Line3,
    Plane3,
    Point3,
    RigidFrame,
    canonical_frame_point_line,
)

MARGIN = 0.3


def random_unit(rng) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def random_point(rng, scale: float = 2.0) -> Point3:
    return Point3(*rng.uniform(-scale, scale, 3))


def random_line(rng, scale: float = 2.0) -> Line3:
    return Line3(random_point(rng, scale), tuple(random_unit(rng)))


def random_plane(rng, scale: float = 2.0) -> Plane3:
    return Plane3(tuple(random_unit(rng)), rng.uniform(-scale, scale))


def random_frame(rng) -> RigidFrame:
    e1 = random_unit(rng)
    e2 = np.cross(random_unit(rng), e1)
    e2 /= np.linalg.norm(e2)
    e3 = np.cross(e1, e2)
    rot = np.vstack([e1, e2, e3])
    return RigidFrame(rot, rng.uniform(-2, 2, 3))


def point_off_line(rng, scale: float = 2.0) -> tuple[Point3, Line3]:
    while True:
        p, m = random_point(rng, scale), random_line(rng, scale)
        if m.distance_to_point(p) > MARGIN:
            return p, m


def point_off_plane(rng, scale: float = 2.0) -> tuple[Point3, Plane3]:
    while True:
        p, pi = random_point(rng, scale), random_plane(rng, scale)
        if pi.distance(p) > MARGIN:
            return p, pi


def instance_i5_i6(rng) -> list[Constraint]:
    p, m = point_off_line(rng)
    q, pi = point_off_plane(rng)
    return [Constraint.I5(p, m), Constraint.I6(q, pi)]


def instance_i5_i9(rng, solvable: bool) -> list[Constraint]:
    """I5 plus a half-line swap; n's direction is placed in the span of
    (p, m) when a solvable instance is requested."""
    p, m = point_off_line(rng)
    if solvable:
        frame, _ = canonical_frame_point_line(p, m)
        dy = rng.uniform(-1.5, 1.5)
        dz = rng.uniform(0.3, 1.0) * rng.choice([-1.0, 1.0])
        d_can = np.array([0.0, dy, dz])
        d_can /= np.linalg.norm(d_can)
        n = Line3(random_point(rng), tuple(frame.rotation.T @ d_can))
    else:
        n = random_line(rng)
    return [Constraint.I5(p, m), Constraint.I9(n)]


def instance_i6_i8_i11(rng) -> list[Constraint]:
    p, pi = point_off_plane(rng)
    return [
        Constraint.I6(p, pi),
        Constraint.I8(random_point(rng)),
        Constraint.I11(random_plane(rng)),
    ]


def instance_3i6(rng) -> list[Constraint]:
    out = []
    for _ in range(3):
        p, pi = point_off_plane(rng)
        out.append(Constraint.I6(p, pi))
    return out


def skew_lines(rng, scale: float = 2.0) -> tuple[Line3, Line3]:
    from fold3d.geometry import line_line_closest

    while True:
        m, n = random_line(rng, scale), random_line(rng, scale)
        _, _, dist, parallel = line_line_closest(m, n)
        if not parallel and dist > MARGIN:
            return m, n


def parallel_lines(rng, scale: float = 2.0) -> tuple[Line3, Line3]:
    m = random_line(rng, scale)
    shift = random_unit(rng)
    shift -= (shift @ m.direction) * m.direction
    norm = np.linalg.norm(shift)
    if norm < 0.1:
        return parallel_lines(rng, scale)
    shift = shift / norm * rng.uniform(MARGIN, 2.0)
    n = Line3(Point3(*(m.base.xyz + shift)), m.dir)
    return m, n


def coplanar_crossing_lines(rng, scale: float = 2.0) -> tuple[Line3, Line3]:
    x = random_point(rng, scale)
    d1 = random_unit(rng)
    while True:
        d2 = random_unit(rng)
        if np.linalg.norm(np.cross(d1, d2)) > 0.2:
            break
    return Line3(x, tuple(d1)), Line3(x, tuple(d2))
