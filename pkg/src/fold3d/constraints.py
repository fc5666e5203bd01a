"""The twelve incidence constraint kinds between scene objects and their
reflections in an unknown fold plane.

Each kind knows its codimension (degrees of freedom of the fold plane it
consumes), a nonnegative residual that is zero exactly on satisfaction, and
either a direct solver (finite kinds I1/I2/I4/I12) or a parameterized
solution family (I8..I11).  Residuals come in two forms:

* ``residual`` / ``residual_grid``: the reported scalar measure.  Units are
  lengths for point incidences (I1, I5, I6, I8), a skew-line gap for I3, a
  max point-to-plane distance for I7, and an angle (radians) plus offset
  length with equal weight for the line/plane self- and pair-incidences
  (I2, I4, I9..I12).
* ``residual_components_grid``: signed, smooth components with the same zero
  set, suitable for Newton-type root finding.  (Exception: the I3 component
  is the coplanarity triple product, which also vanishes for a reflected
  line parallel to the target; root filters recheck the scalar residual.)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from .errors import InvalidConstraint
from .geometry import (
    TOL_INCIDENCE,
    Line3,
    Plane3,
    Point3,
    classify_line_plane,
    LinePlaneRelation,
    line_line_closest,
    lines_setwise_equal,
    perp_unit,
    perpendicular_bisector_plane,
    plane_gap,
    planes_setwise_equal,
    points_equal,
)

_DEDUP_TOL = 1e-6


class IncidenceKind(str, Enum):
    I1 = "I1"
    I2 = "I2"
    I3 = "I3"
    I4 = "I4"
    I5 = "I5"
    I6 = "I6"
    I7 = "I7"
    I8 = "I8"
    I9 = "I9"
    I10 = "I10"
    I11 = "I11"
    I12 = "I12"

    @property
    def index(self) -> int:
        return int(self.value[1:])

    @property
    def codimension(self) -> int:
        return _CODIMENSION[self]

    @property
    def signature(self) -> tuple[str, ...]:
        """Payload object kinds, in order."""
        return _SIGNATURES[self]

    def describe(self) -> str:
        return _DESCRIPTIONS[self]


_CODIMENSION = {
    IncidenceKind.I1: 3,
    IncidenceKind.I2: 3,
    IncidenceKind.I3: 1,
    IncidenceKind.I4: 3,
    IncidenceKind.I5: 2,
    IncidenceKind.I6: 1,
    IncidenceKind.I7: 2,
    IncidenceKind.I8: 1,
    IncidenceKind.I9: 2,
    IncidenceKind.I10: 2,
    IncidenceKind.I11: 1,
    IncidenceKind.I12: 3,
}

_SIGNATURES = {
    IncidenceKind.I1: ("point", "point"),
    IncidenceKind.I2: ("line", "line"),
    IncidenceKind.I3: ("line", "line"),
    IncidenceKind.I4: ("plane", "plane"),
    IncidenceKind.I5: ("point", "line"),
    IncidenceKind.I6: ("point", "plane"),
    IncidenceKind.I7: ("line", "plane"),
    IncidenceKind.I8: ("point",),
    IncidenceKind.I9: ("line",),
    IncidenceKind.I10: ("line",),
    IncidenceKind.I11: ("plane",),
    IncidenceKind.I12: ("plane",),
}

_DESCRIPTIONS = {
    IncidenceKind.I1: "reflected point coincides with the other point",
    IncidenceKind.I2: "reflected line coincides with the other line",
    IncidenceKind.I3: "reflected line meets the other (disjoint) line",
    IncidenceKind.I4: "reflected plane coincides with the other plane",
    IncidenceKind.I5: "reflected point lands on the line",
    IncidenceKind.I6: "reflected point lands on the plane",
    IncidenceKind.I7: "reflected line lands inside the plane",
    IncidenceKind.I8: "point is fixed by the fold",
    IncidenceKind.I9: "line maps to itself with its halves swapped",
    IncidenceKind.I10: "line is fixed pointwise by the fold",
    IncidenceKind.I11: "plane maps to itself with its halves swapped",
    IncidenceKind.I12: "plane is fixed pointwise by the fold",
}


def codimension(c: "Constraint") -> int:
    return c.kind.codimension


@dataclass(frozen=True)
class Constraint:
    """An incidence requirement on the unknown fold plane.

    Construct through the per-kind classmethods; they enforce the kind's
    precondition (e.g. I5 requires the point off the line).
    """

    kind: IncidenceKind
    objects: tuple

    def __post_init__(self):
        expected = {"point": Point3, "line": Line3, "plane": Plane3}
        sig = self.kind.signature
        if len(self.objects) != len(sig):
            raise InvalidConstraint(
                f"{self.kind.value} takes {len(sig)} objects, got {len(self.objects)}"
            )
        for obj, want in zip(self.objects, sig):
            if not isinstance(obj, expected[want]):
                raise InvalidConstraint(
                    f"{self.kind.value} expects a {want}, got {type(obj).__name__}"
                )
        _PRECONDITIONS[self.kind](self.objects)

    # -- factories ---------------------------------------------------------

    @classmethod
    def I1(cls, p: Point3, q: Point3) -> "Constraint":
        return cls(IncidenceKind.I1, (p, q))

    @classmethod
    def I2(cls, m: Line3, n: Line3) -> "Constraint":
        return cls(IncidenceKind.I2, (m, n))

    @classmethod
    def I3(cls, m: Line3, n: Line3) -> "Constraint":
        return cls(IncidenceKind.I3, (m, n))

    @classmethod
    def I4(cls, pi: Plane3, tau: Plane3) -> "Constraint":
        return cls(IncidenceKind.I4, (pi, tau))

    @classmethod
    def I5(cls, p: Point3, m: Line3) -> "Constraint":
        return cls(IncidenceKind.I5, (p, m))

    @classmethod
    def I6(cls, p: Point3, pi: Plane3) -> "Constraint":
        return cls(IncidenceKind.I6, (p, pi))

    @classmethod
    def I7(cls, m: Line3, pi: Plane3) -> "Constraint":
        return cls(IncidenceKind.I7, (m, pi))

    @classmethod
    def I8(cls, p: Point3) -> "Constraint":
        return cls(IncidenceKind.I8, (p,))

    @classmethod
    def I9(cls, m: Line3) -> "Constraint":
        return cls(IncidenceKind.I9, (m,))

    @classmethod
    def I10(cls, m: Line3) -> "Constraint":
        return cls(IncidenceKind.I10, (m,))

    @classmethod
    def I11(cls, pi: Plane3) -> "Constraint":
        return cls(IncidenceKind.I11, (pi,))

    @classmethod
    def I12(cls, pi: Plane3) -> "Constraint":
        return cls(IncidenceKind.I12, (pi,))


def _pre_distinct_points(objs):
    p, q = objs
    if points_equal(p, q, 1e-10):
        raise InvalidConstraint(
            "I1 requires distinct points (P != Q); a fixed point is I8"
        )


def _pre_distinct_lines(objs):
    m, n = objs
    if lines_setwise_equal(m, n, 1e-10):
        raise InvalidConstraint(
            "I2 requires distinct lines (m != n); a line fixed by the fold "
            "is I9 or I10"
        )


def _pre_disjoint_lines(objs):
    m, n = objs
    _, _, dist, parallel = line_line_closest(m, n)
    if dist <= 1e-10:
        if parallel:
            raise InvalidConstraint("I3 requires disjoint lines; these coincide")
        raise InvalidConstraint(
            "I3 requires disjoint lines; these intersect (covered by I7/I10)"
        )


def _pre_distinct_planes(objs):
    pi, tau = objs
    if planes_setwise_equal(pi, tau, 1e-10):
        raise InvalidConstraint(
            "I4 requires distinct planes (pi != tau); a plane fixed by the "
            "fold is I11 or I12"
        )


def _pre_point_off_line(objs):
    p, m = objs
    if m.contains_point(p, 1e-10):
        raise InvalidConstraint(
            "I5 requires the point off the line (P not in m); a point on the "
            "line is covered by I8 and I9"
        )


def _pre_point_off_plane(objs):
    p, pi = objs
    if pi.contains_point(p, 1e-10):
        raise InvalidConstraint(
            "I6 requires the point off the plane (P not in pi); a point on "
            "the plane is covered by I8 and I11"
        )


def _pre_line_off_plane(objs):
    m, pi = objs
    if classify_line_plane(m, pi) is LinePlaneRelation.CONTAINED:
        raise InvalidConstraint(
            "I7 requires the line off the plane (m not in pi); a contained "
            "line is covered by I10 and I11"
        )


_PRECONDITIONS: dict[IncidenceKind, Callable] = {
    IncidenceKind.I1: _pre_distinct_points,
    IncidenceKind.I2: _pre_distinct_lines,
    IncidenceKind.I3: _pre_disjoint_lines,
    IncidenceKind.I4: _pre_distinct_planes,
    IncidenceKind.I5: _pre_point_off_line,
    IncidenceKind.I6: _pre_point_off_plane,
    IncidenceKind.I7: _pre_line_off_plane,
    IncidenceKind.I8: lambda objs: None,
    IncidenceKind.I9: lambda objs: None,
    IncidenceKind.I10: lambda objs: None,
    IncidenceKind.I11: lambda objs: None,
    IncidenceKind.I12: lambda objs: None,
}


# ---------------------------------------------------------------------------
# Residuals, vectorized over a batch of candidate planes
# ---------------------------------------------------------------------------


def _reflect_pts(N: np.ndarray, O: np.ndarray, p: np.ndarray) -> np.ndarray:
    s = N @ p - O
    return p[None, :] - 2.0 * s[:, None] * N


def _reflect_dirs(N: np.ndarray, d: np.ndarray) -> np.ndarray:
    s = N @ d
    return d[None, :] - 2.0 * s[:, None] * N


def _asin_clip(x: np.ndarray) -> np.ndarray:
    return np.arcsin(np.clip(x, -1.0, 1.0))


def _row_norm(a: np.ndarray) -> np.ndarray:
    return np.sqrt(np.einsum("ij,ij->i", a, a))


def _closest_to_origin(B: np.ndarray, D: np.ndarray) -> np.ndarray:
    t = np.einsum("ij,ij->i", B, D)
    return B - t[:, None] * D


def residual_grid(c: Constraint, N: np.ndarray, O: np.ndarray) -> np.ndarray:
    """Scalar residual of each candidate plane (unit normals N, offsets O)."""
    k = c.kind
    if k is IncidenceKind.I1:
        p, q = c.objects
        return _row_norm(_reflect_pts(N, O, p.xyz) - q.xyz)
    if k is IncidenceKind.I2:
        m, n = c.objects
        B = _reflect_pts(N, O, m.base.xyz)
        D = _reflect_dirs(N, m.direction)
        ang = _asin_clip(_row_norm(np.cross(D, n.direction)))
        gap = _row_norm(_closest_to_origin(B, D) - n.base.xyz)
        return ang + gap
    if k is IncidenceKind.I3:
        m, n = c.objects
        B = _reflect_pts(N, O, m.base.xyz)
        D = _reflect_dirs(N, m.direction)
        w = n.base.xyz - B
        cr = np.cross(D, np.broadcast_to(n.direction, D.shape))
        s = _row_norm(cr)
        skew = np.abs(np.einsum("ij,ij->i", w, cr)) / np.where(s > 1e-12, s, 1.0)
        para = _row_norm(w - np.einsum("ij,ij->i", w, D)[:, None] * D)
        return np.where(s > 1e-12, skew, para)
    if k is IncidenceKind.I4:
        pi, tau = c.objects
        n2 = _reflect_dirs(N, pi.normal_vec)
        f2 = _reflect_pts(N, O, pi.foot.xyz)
        o2 = np.einsum("ij,ij->i", n2, f2)
        ang = _asin_clip(_row_norm(np.cross(n2, tau.normal_vec)))
        gap = _row_norm(o2[:, None] * n2 - tau.offset * tau.normal_vec)
        return ang + gap
    if k is IncidenceKind.I5:
        p, m = c.objects
        P2 = _reflect_pts(N, O, p.xyz)
        v = P2 - m.base.xyz
        d = m.direction
        return _row_norm(v - (v @ d)[:, None] * d)
    if k is IncidenceKind.I6:
        p, pi = c.objects
        P2 = _reflect_pts(N, O, p.xyz)
        return np.abs(P2 @ pi.normal_vec - pi.offset)
    if k is IncidenceKind.I7:
        m, pi = c.objects
        a = _reflect_pts(N, O, m.base.xyz)
        b = _reflect_pts(N, O, m.base.xyz + m.direction)
        da = np.abs(a @ pi.normal_vec - pi.offset)
        db = np.abs(b @ pi.normal_vec - pi.offset)
        return np.maximum(da, db)
    if k is IncidenceKind.I8:
        (p,) = c.objects
        return np.abs(N @ p.xyz - O)
    if k is IncidenceKind.I9:
        (m,) = c.objects
        return _asin_clip(_row_norm(np.cross(N, m.direction)))
    if k is IncidenceKind.I10:
        (m,) = c.objects
        return np.abs(_asin_clip(N @ m.direction)) + np.abs(N @ m.base.xyz - O)
    if k is IncidenceKind.I11:
        (pi,) = c.objects
        return np.abs(_asin_clip(N @ pi.normal_vec))
    if k is IncidenceKind.I12:
        (pi,) = c.objects
        ang = _asin_clip(_row_norm(np.cross(N, pi.normal_vec)))
        gap = _row_norm(O[:, None] * N - pi.offset * pi.normal_vec)
        return ang + gap
    raise InvalidConstraint(f"unknown constraint kind {k}")


def residual_components_grid(c: Constraint, N: np.ndarray, O: np.ndarray) -> np.ndarray:
    """Signed smooth residual components of each candidate plane, shape (k, m)."""
    k = c.kind
    if k is IncidenceKind.I1:
        p, q = c.objects
        return _reflect_pts(N, O, p.xyz) - q.xyz
    if k is IncidenceKind.I2:
        m, n = c.objects
        B = _reflect_pts(N, O, m.base.xyz)
        D = _reflect_dirs(N, m.direction)
        cr = np.cross(D, np.broadcast_to(n.direction, D.shape))
        gap = _closest_to_origin(B, D) - n.base.xyz
        return np.concatenate([cr, gap], axis=1)
    if k is IncidenceKind.I3:
        m, n = c.objects
        B = _reflect_pts(N, O, m.base.xyz)
        D = _reflect_dirs(N, m.direction)
        w = n.base.xyz - B
        cr = np.cross(D, np.broadcast_to(n.direction, D.shape))
        return np.einsum("ij,ij->i", w, cr)[:, None]
    if k is IncidenceKind.I4:
        pi, tau = c.objects
        n2 = _reflect_dirs(N, pi.normal_vec)
        f2 = _reflect_pts(N, O, pi.foot.xyz)
        o2 = np.einsum("ij,ij->i", n2, f2)
        cr = np.cross(n2, np.broadcast_to(tau.normal_vec, n2.shape))
        gap = o2[:, None] * n2 - tau.offset * tau.normal_vec
        return np.concatenate([cr, gap], axis=1)
    if k is IncidenceKind.I5:
        p, m = c.objects
        P2 = _reflect_pts(N, O, p.xyz)
        v = P2 - m.base.xyz
        d = m.direction
        return v - (v @ d)[:, None] * d
    if k is IncidenceKind.I6:
        p, pi = c.objects
        P2 = _reflect_pts(N, O, p.xyz)
        return (P2 @ pi.normal_vec - pi.offset)[:, None]
    if k is IncidenceKind.I7:
        m, pi = c.objects
        a = _reflect_pts(N, O, m.base.xyz)
        b = _reflect_pts(N, O, m.base.xyz + m.direction)
        return np.stack(
            [a @ pi.normal_vec - pi.offset, b @ pi.normal_vec - pi.offset], axis=1
        )
    if k is IncidenceKind.I8:
        (p,) = c.objects
        return (N @ p.xyz - O)[:, None]
    if k is IncidenceKind.I9:
        (m,) = c.objects
        return np.cross(N, np.broadcast_to(m.direction, N.shape))
    if k is IncidenceKind.I10:
        (m,) = c.objects
        return np.stack([N @ m.direction, N @ m.base.xyz - O], axis=1)
    if k is IncidenceKind.I11:
        (pi,) = c.objects
        return (N @ pi.normal_vec)[:, None]
    if k is IncidenceKind.I12:
        (pi,) = c.objects
        cr = np.cross(N, np.broadcast_to(pi.normal_vec, N.shape))
        gap = O[:, None] * N - pi.offset * pi.normal_vec
        return np.concatenate([cr, gap], axis=1)
    raise InvalidConstraint(f"unknown constraint kind {k}")


def residual(c: Constraint, delta: Plane3) -> float:
    """Scalar residual of one candidate fold plane; zero iff c is satisfied."""
    N = delta.normal_vec[None, :]
    O = np.array([delta.offset])
    return float(residual_grid(c, N, O)[0])


def stacked_residual_grid(
    constraints, N: np.ndarray, O: np.ndarray
) -> np.ndarray:
    """Sum of the scalar residuals of several constraints."""
    total = np.zeros(len(O))
    for c in constraints:
        total += residual_grid(c, N, O)
    return total


def stacked_residual(constraints, delta: Plane3) -> float:
    return float(
        stacked_residual_grid(constraints, delta.normal_vec[None, :], np.array([delta.offset]))[0]
    )


def payload_radius(constraints) -> float:
    """Radius of a ball around the origin holding the payload anchor points."""
    r = 1.0
    for c in constraints:
        for obj in c.objects:
            if isinstance(obj, Point3):
                r = max(r, float(np.linalg.norm(obj.xyz)))
            elif isinstance(obj, Line3):
                r = max(r, float(np.linalg.norm(obj.base.xyz)))
            elif isinstance(obj, Plane3):
                r = max(r, abs(obj.offset))
    return r


# ---------------------------------------------------------------------------
# Solution container
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FamilyParam:
    """A named free parameter with its default sampling range."""

    name: str
    low: float
    high: float


@dataclass(frozen=True)
class SolutionFamily:
    """A continuum of fold planes parameterized by 1 or 2 free parameters."""

    dimension: int
    parameters: tuple[FamilyParam, ...]
    build: Callable[..., Plane3] = field(repr=False)

    def plane(self, *values: float) -> Plane3:
        if len(values) != self.dimension:
            raise InvalidConstraint(
                f"family takes {self.dimension} parameters, got {len(values)}"
            )
        return self.build(*values)


class Outcome(str, Enum):
    FINITE = "finite"
    INFINITE = "infinite"
    NO_SOLUTION = "no_solution"


@dataclass(frozen=True)
class FoldSolution:
    """Result of a solve: finitely many planes, a family, or nothing.

    A finite result always carries at least one plane; an empty candidate
    list is normalized to the no-solution outcome.
    """

    outcome: Outcome
    planes: tuple[Plane3, ...] = ()
    family: SolutionFamily | None = None
    possibly_incomplete: bool = False
    provenance: str = "dedicated"

    @classmethod
    def finite(
        cls,
        planes,
        possibly_incomplete: bool = False,
        provenance: str = "dedicated",
        dedup_tol: float = _DEDUP_TOL,
    ) -> "FoldSolution":
        kept: list[Plane3] = []
        for p in planes:
            if all(plane_gap(p, q) > dedup_tol for q in kept):
                kept.append(p)
        kept.sort(key=lambda p: (*p.normal, p.offset))
        if not kept:
            return cls(Outcome.NO_SOLUTION, (), None, possibly_incomplete, provenance)
        return cls(Outcome.FINITE, tuple(kept), None, possibly_incomplete, provenance)

    @classmethod
    def infinite(
        cls, family: SolutionFamily, provenance: str = "dedicated"
    ) -> "FoldSolution":
        return cls(Outcome.INFINITE, (), family, False, provenance)

    @classmethod
    def no_solution(
        cls, possibly_incomplete: bool = False, provenance: str = "dedicated"
    ) -> "FoldSolution":
        return cls(Outcome.NO_SOLUTION, (), None, possibly_incomplete, provenance)

    @property
    def count(self) -> int:
        return len(self.planes)


# ---------------------------------------------------------------------------
# Direct solvers for the finite kinds
# ---------------------------------------------------------------------------


def solve_I1(p: Point3, q: Point3, tol: float = TOL_INCIDENCE) -> FoldSolution:
    """The unique fold plane mapping p onto q: their perpendicular bisector."""
    if points_equal(p, q, 1e-10):
        raise InvalidConstraint("I1 requires distinct points; P = Q is the I8 case")
    return FoldSolution.finite([perpendicular_bisector_plane(p, q, tol)])


def solve_I2(m: Line3, n: Line3, tol: float = TOL_INCIDENCE) -> FoldSolution:
    """Fold planes mapping line m onto line n.

    Two mutually perpendicular planes through the intersection when the
    lines are coplanar and non-parallel, one mid plane when parallel, and
    no solution when skew.
    """
    if lines_setwise_equal(m, n, 1e-10):
        raise InvalidConstraint("I2 requires distinct lines; m = n is I9 or I10")
    p1, p2, dist, parallel = line_line_closest(m, n)
    if parallel:
        normal = (p2.xyz - p1.xyz) / dist
        mid = (p1.xyz + p2.xyz) / 2.0
        return FoldSolution.finite([Plane3.from_point_normal(mid, normal)])
    if dist <= tol:
        x = (p1.xyz + p2.xyz) / 2.0
        d1, d2 = m.direction, n.direction
        return FoldSolution.finite(
            [
                Plane3.from_point_normal(x, d1 - d2),
                Plane3.from_point_normal(x, d1 + d2),
            ]
        )
    return FoldSolution.no_solution()


def solve_I4(pi: Plane3, tau: Plane3, tol: float = TOL_INCIDENCE) -> FoldSolution:
    """Fold planes mapping plane pi onto plane tau: the dihedral bisectors."""
    if planes_setwise_equal(pi, tau, 1e-10):
        raise InvalidConstraint("I4 requires distinct planes; pi = tau is I11 or I12")
    n1, n2 = pi.normal_vec, tau.normal_vec
    if np.linalg.norm(np.cross(n1, n2)) <= 1e-10:
        if float(n1 @ n2) < 0:  # sign convention may still differ pre-canonically
            n2, o2 = -n2, -tau.offset
        else:
            o2 = tau.offset
        return FoldSolution.finite([Plane3(tuple(n1), (pi.offset + o2) / 2.0)])
    # a point on the intersection line of the two planes
    a = np.vstack([n1, n2])
    b = np.array([pi.offset, tau.offset])
    x = np.linalg.lstsq(a, b, rcond=None)[0]
    return FoldSolution.finite(
        [Plane3.from_point_normal(x, n1 - n2), Plane3.from_point_normal(x, n1 + n2)]
    )


def solve_I12(pi: Plane3) -> FoldSolution:
    """The fold plane fixing pi pointwise is pi itself."""
    return FoldSolution.finite([pi])


# ---------------------------------------------------------------------------
# Families for the infinite kinds
# ---------------------------------------------------------------------------


def family(c: Constraint) -> SolutionFamily:
    """Parameterized family of all fold planes satisfying an infinite kind."""
    k = c.kind
    if k is IncidenceKind.I8:
        (p,) = c.objects

        def build_i8(theta: float, phi: float) -> Plane3:
            n = np.array(
                [
                    np.sin(theta) * np.cos(phi),
                    np.sin(theta) * np.sin(phi),
                    np.cos(theta),
                ]
            )
            return Plane3.from_point_normal(p, n)

        return SolutionFamily(
            2,
            (FamilyParam("theta", 0.0, np.pi), FamilyParam("phi", 0.0, 2 * np.pi)),
            build_i8,
        )
    if k is IncidenceKind.I9:
        (m,) = c.objects

        def build_i9(s: float) -> Plane3:
            return Plane3.from_point_normal(m.point_at(s), m.direction)

        return SolutionFamily(1, (FamilyParam("s", -10.0, 10.0),), build_i9)
    if k is IncidenceKind.I10:
        (m,) = c.objects
        u = perp_unit(m.direction)
        v = np.cross(m.direction, u)

        def build_i10(phi: float) -> Plane3:
            n = np.cos(phi) * u + np.sin(phi) * v
            return Plane3.from_point_normal(m.base, n)

        return SolutionFamily(1, (FamilyParam("phi", 0.0, np.pi),), build_i10)
    if k is IncidenceKind.I11:
        (pi,) = c.objects
        u = perp_unit(pi.normal_vec)
        v = np.cross(pi.normal_vec, u)

        def build_i11(delta: float, offset: float) -> Plane3:
            n = np.cos(delta) * u + np.sin(delta) * v
            return Plane3(tuple(n), offset)

        return SolutionFamily(
            2,
            (FamilyParam("delta", 0.0, np.pi), FamilyParam("k", -10.0, 10.0)),
            build_i11,
        )
    raise InvalidConstraint(
        f"{k.value} has no solution family; only I8, I9, I10, I11 are "
        "infinite single-incidence kinds"
    )
