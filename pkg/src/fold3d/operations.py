"""Elementary fold operations: enumeration of the valid constraint
combinations and solvers for them.

A fold plane has three degrees of freedom, so an elementary operation is a
multiset of incidence constraints whose codimensions sum to at least 3.
Three combinations are structurally invalid (they over-constrain the fold
normal and admit either no plane or a continuum): three half-plane swaps
(3I11), a half-line swap with a half-plane swap (I9+I11), and two half-line
swaps (2I9).  That leaves 47 valid operations.

Four operations worked out in closed form get dedicated solvers
(I5+I6, I5+I9, I6+I8+I11) or a deterministic multistart solver (3I6);
everything else runs through the generic lattice-plus-Gauss-Newton search
over fold-plane space.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from typing import Sequence

import numpy as np

from .constraints import (
    Constraint,
    FamilyParam,
    FoldSolution,
    IncidenceKind,
    SolutionFamily,
    payload_radius,
    residual,
    solve_I1,
    solve_I2,
    solve_I4,
    solve_I12,
    stacked_residual,
)
from .envelopes import family_I5
from .errors import IllPosed, InvalidOperation, ParseError
from .geometry import (
    TOL_INCIDENCE,
    Line3,
    Plane3,
    Point3,
    canonical_frame_point_line,
    canonical_frame_point_plane,
    planes_setwise_equal,
    points_equal,
    reflect_point,
)
from .numerics import (
    newton_multistart,
    params_to_planes,
    plane_from_params,
    real_roots_cubic,
    real_roots_quadratic,
    stacked_components_fn,
    stacked_residual_grid,
)

_CODIM_1 = (IncidenceKind.I3, IncidenceKind.I6, IncidenceKind.I8, IncidenceKind.I11)
_CODIM_2 = (IncidenceKind.I5, IncidenceKind.I7, IncidenceKind.I9, IncidenceKind.I10)
_CODIM_3 = (IncidenceKind.I1, IncidenceKind.I2, IncidenceKind.I4, IncidenceKind.I12)

_REJECTION_REASONS = {
    (9, 9): (
        "two half-line swaps each pin the fold normal to a line direction; "
        "the two requirements are contradictory or redundant, never a "
        "finite set of planes"
    ),
    (9, 11): (
        "a half-line swap pins the fold normal while the half-plane swap "
        "constrains it again; together they are contradictory or redundant"
    ),
    (11, 11, 11): (
        "perpendicularity to three planes is unsatisfiable for independent "
        "normals and redundant otherwise; never a finite set of planes"
    ),
}

_SPEC_TERM = re.compile(r"^(\d*)I(\d{1,2})$")


@dataclass(frozen=True, order=True)
class OperationSpec:
    """A multiset of incidence kinds, e.g. I5+I6 or 3I6."""

    counts: tuple[tuple[int, int], ...]  # ((kind index, multiplicity), ...)

    @classmethod
    def from_kinds(cls, kinds) -> "OperationSpec":
        tally: dict[int, int] = {}
        for k in kinds:
            idx = k.index if isinstance(k, IncidenceKind) else int(k)
            tally[idx] = tally.get(idx, 0) + 1
        return cls(tuple(sorted(tally.items())))

    @classmethod
    def from_constraints(cls, constraints: Sequence[Constraint]) -> "OperationSpec":
        return cls.from_kinds(c.kind for c in constraints)

    @classmethod
    def parse(cls, text: str) -> "OperationSpec":
        kinds: list[int] = []
        for term in text.replace(" ", "").split("+"):
            m = _SPEC_TERM.match(term)
            if not m:
                raise ParseError(
                    f"bad operation term {term!r}; expected forms like I5, 2I8, 3I6"
                )
            mult = int(m.group(1)) if m.group(1) else 1
            idx = int(m.group(2))
            if not 1 <= idx <= 12:
                raise ParseError(f"no incidence kind I{idx}")
            if mult < 1:
                raise ParseError(f"multiplicity must be positive in {term!r}")
            kinds.extend([idx] * mult)
        if not kinds:
            raise ParseError("empty operation spec")
        return cls.from_kinds(kinds)

    def __str__(self) -> str:
        return "+".join(
            f"{mult if mult > 1 else ''}I{idx}" for idx, mult in self.counts
        )

    @property
    def kinds(self) -> tuple[IncidenceKind, ...]:
        out = []
        for idx, mult in self.counts:
            out.extend([IncidenceKind(f"I{idx}")] * mult)
        return tuple(out)

    @property
    def key(self) -> tuple[int, ...]:
        return tuple(idx for idx, mult in self.counts for _ in range(mult))

    @property
    def total_codimension(self) -> int:
        return sum(k.codimension for k in self.kinds)

    def codim_signature(self) -> tuple[int, ...]:
        return tuple(sorted((k.codimension for k in self.kinds), reverse=True))

    def rejection_reason(self) -> str | None:
        return _REJECTION_REASONS.get(self.key)


def enumerate_operations() -> tuple[list[OperationSpec], list[tuple[OperationSpec, str]]]:
    """All 47 valid elementary operations plus the 3 rejected combinations.

    Classes: the four codimension-3 singles; codimension 1+2 pairs
    (16 minus I9+I11); codimension 2+2 pairs (10 minus 2I9);
    codimension 1+1+1 triples (20 minus 3I11).
    """
    candidates: list[OperationSpec] = []
    for k in _CODIM_3:
        candidates.append(OperationSpec.from_kinds([k]))
    for k1 in _CODIM_1:
        for k2 in _CODIM_2:
            candidates.append(OperationSpec.from_kinds([k1, k2]))
    for pair in combinations_with_replacement(_CODIM_2, 2):
        candidates.append(OperationSpec.from_kinds(pair))
    for triple in combinations_with_replacement(_CODIM_1, 3):
        candidates.append(OperationSpec.from_kinds(triple))
    valid: list[OperationSpec] = []
    rejected: list[tuple[OperationSpec, str]] = []
    for spec in candidates:
        reason = spec.rejection_reason()
        if reason is None:
            valid.append(spec)
        else:
            rejected.append((spec, reason))
    return valid, rejected


# ---------------------------------------------------------------------------
# Dedicated solvers for the worked operations
# ---------------------------------------------------------------------------


def _poly_pad(p: np.ndarray, length: int) -> np.ndarray:
    p = np.atleast_1d(np.asarray(p, dtype=float))
    out = np.zeros(length)
    out[length - len(p):] = p
    return out


def _i5_solution_family(p: Point3, m: Line3) -> SolutionFamily:
    fam = family_I5(p, m)
    return SolutionFamily(
        1, (FamilyParam("t", -10.0, 10.0),), lambda t: fam.plane(t)
    )


def _i5_plane(frame_inv, a: float, t: float) -> Plane3:
    return frame_inv.apply_plane(Plane3.from_coeffs(0.0, 2 * t, -4 * a, -(t * t)))


def solve_I5_I6(
    p: Point3, m: Line3, q: Point3, pi: Plane3, tol: float = TOL_INCIDENCE
) -> FoldSolution:
    """Fold placing p onto line m and q onto plane pi: zero to three planes.

    In the canonical frame of (p, m), candidate planes are the one-parameter
    tangent family of the parabolic cylinder; those reflections preserve the
    canonical x coordinate, so the image of q keeps x fixed and the q-onto-pi
    condition reduces to a linear relation plus a cubic.  A vanishing cubic
    means the constraints are dependent and the whole family solves the
    operation (returned as an infinite outcome).
    """
    frame, a = canonical_frame_point_line(p, m)
    inv = frame.inverse()
    qc = frame.apply_point(q).xyz
    pic = frame.apply_plane(pi)
    ca, cb, cc, cd = pic.coeffs()
    xq, yq, zq = qc
    e = ca * xq + cd
    if max(abs(cb), abs(cc)) <= 1e-12:
        # pi is a constant-x plane in the canonical frame; the family either
        # satisfies the point-onto-plane condition identically or never.
        if abs(e) <= 1e-10 * (1.0 + abs(xq)):
            return FoldSolution.infinite(_i5_solution_family(p, m))
        return FoldSolution.no_solution()
    if abs(cc) >= abs(cb):
        lam, mu = -cb / cc, -e / cc  # z' = lam y' + mu, cubic variable y'
        p_dy = np.array([1.0, -yq])
        p_dz = np.array([lam, mu - zq])
        p_ysq = np.array([1.0, 0.0, -yq * yq])
        p_zsq = np.polyadd(np.polymul([lam, mu], [lam, mu]), [-zq * zq])
        to_yz = lambda u: (u, lam * u + mu)
    else:
        lam, mu = -cc / cb, -e / cb  # y' = lam z' + mu, cubic variable z'
        p_dy = np.array([lam, mu - yq])
        p_dz = np.array([1.0, -zq])
        p_ysq = np.polyadd(np.polymul([lam, mu], [lam, mu]), [-yq * yq])
        p_zsq = np.array([1.0, 0.0, -zq * zq])
        to_yz = lambda u: (lam * u + mu, u)
    cubic = np.polyadd(
        2.0 * a * np.polymul(p_dy, p_dy),
        np.polymul(np.polyadd(p_ysq, p_zsq), p_dz),
    )
    cubic = _poly_pad(cubic, 4)
    coeff_scale = (1.0 + abs(yq) + abs(zq) + a + abs(lam) + abs(mu)) ** 3
    if np.max(np.abs(cubic)) <= 1e-10 * coeff_scale:
        # dependent constraints (e.g. q at the moved point and pi carrying m
        # orthogonally to their span): the whole family works
        return FoldSolution.infinite(_i5_solution_family(p, m))
    roots = real_roots_cubic(*cubic)
    cons = (Constraint.I5(p, m), Constraint.I6(q, pi))
    planes = []
    for u in roots.roots:
        yp, zp = to_yz(u)
        dz = zp - zq
        if abs(dz) <= 1e-12 * (1.0 + abs(zq)):
            continue  # a reflection never keeps z fixed here (q is off pi)
        t = -2.0 * a * (yp - yq) / dz
        cand = _i5_plane(inv, a, t)
        if all(residual(c, cand) < tol for c in cons):
            planes.append(cand)
    return FoldSolution.finite(planes)


def solve_I5_I9(
    p: Point3, m: Line3, n: Line3, tol: float = TOL_INCIDENCE
) -> FoldSolution:
    """Fold placing p onto m while swapping the halves of line n.

    The fold plane must be perpendicular to n, which pins its normal; the
    one-parameter family of (p, m) contains such a plane exactly when n is
    parallel to the plane spanned by p and m but not parallel to m, and then
    the solution is unique.
    """
    frame, a = canonical_frame_point_line(p, m)
    dn = frame.rotation @ n.direction
    if abs(dn[0]) > 1e-9 or abs(dn[2]) <= 1e-9:
        return FoldSolution.no_solution()
    t = -2.0 * a * dn[1] / dn[2]
    cand = _i5_plane(frame.inverse(), a, t)
    cons = (Constraint.I5(p, m), Constraint.I9(n))
    if all(residual(c, cand) < tol for c in cons):
        return FoldSolution.finite([cand])
    return FoldSolution.no_solution()


def solve_I6_I8_I11(
    p: Point3, pi: Plane3, q: Point3, tau: Plane3, tol: float = TOL_INCIDENCE
) -> FoldSolution:
    """Fold through q placing p onto pi and swapping the halves of plane tau.

    In the canonical frame of (p, pi) the candidate planes form the
    two-parameter tangent family of the paraboloid; perpendicularity to tau
    is linear in (s, t) and membership of q is quadratic, so there are at
    most two solutions.  A tau parallel to pi leaves the perpendicularity
    unsatisfiable.
    """
    frame, a = canonical_frame_point_plane(p, pi)
    inv = frame.inverse()
    qc = frame.apply_point(q).xyz
    tc = frame.apply_plane(tau)
    at, bt, ct, _ = tc.coeffs()
    xq, yq, zq = qc
    if max(abs(at), abs(bt)) <= 1e-12:
        return FoldSolution.no_solution()
    g = 2.0 * a * ct
    if abs(at) >= abs(bt):
        lin = np.array([-bt / at, g / at])  # s as a polynomial in t
        quad = np.polyadd(
            np.polyadd(2.0 * xq * lin, np.array([2.0 * yq, 0.0])),
            np.polyadd(-np.polymul(lin, lin), np.array([-1.0, 0.0, -4.0 * a * zq])),
        )
        to_st = lambda u: (float(np.polyval(lin, u)), u)
    else:
        lin = np.array([-at / bt, g / bt])  # t as a polynomial in s
        quad = np.polyadd(
            np.polyadd(2.0 * yq * lin, np.array([2.0 * xq, 0.0])),
            np.polyadd(-np.polymul(lin, lin), np.array([-1.0, 0.0, -4.0 * a * zq])),
        )
        to_st = lambda u: (u, float(np.polyval(lin, u)))
    quad = _poly_pad(quad, 3)
    roots = real_roots_quadratic(*quad)
    cons = (Constraint.I6(p, pi), Constraint.I8(q), Constraint.I11(tau))
    planes = []
    for u in roots.roots:
        s, t = to_st(u)
        cand = inv.apply_plane(
            Plane3.from_coeffs(2.0 * s, 2.0 * t, -4.0 * a, -(s * s + t * t))
        )
        if all(residual(c, cand) < tol for c in cons):
            planes.append(cand)
    return FoldSolution.finite(planes)


def solve_3I6(
    p: Point3,
    q: Point3,
    r: Point3,
    pi: Plane3,
    tau: Plane3,
    rho: Plane3,
    tol: float = 1e-8,
    seeds_per_axis: int = 27,
    seed_half_width: float = 10.0,
    newton_tol: float = 1e-10,
    cluster_tol: float = 1e-6,
) -> FoldSolution:
    """Fold placing p onto pi, q onto tau, and r onto rho.

    In the canonical frame of (p, pi) a candidate plane is determined by the
    landing spot (s, t) of the reflected p, so the remaining two conditions
    form a 2x2 system, rational in (s, t) with cubic numerators (algebraic
    solution bound 3 x 3 = 9).  Solved by damped Gauss-Newton from a
    deterministic seed lattice; results are clustered, re-verified against
    all three constraints, and hard-capped at the algebraic bound.
    """
    pairs = ((p, pi), (q, tau), (r, rho))
    for (p1, f1), (p2, f2) in combinations(pairs, 2):
        if points_equal(p1, p2, 1e-10) and planes_setwise_equal(f1, f2, 1e-10):
            raise IllPosed(
                "two of the point-onto-plane constraints coincide; the "
                "solution set is a continuum, not a finite operation"
            )
    frame, a = canonical_frame_point_plane(p, pi)
    inv = frame.inverse()
    qc = frame.apply_point(q).xyz
    rc = frame.apply_point(r).xyz
    tc = frame.apply_plane(tau)
    oc = frame.apply_plane(rho)
    nt, ot = tc.normal_vec, tc.offset
    nr, orr = oc.normal_vec, oc.offset

    def comps(st: np.ndarray) -> np.ndarray:
        s, t = st[:, 0], st[:, 1]
        normals = np.stack([2 * s, 2 * t, np.full_like(s, -4 * a)], axis=1)
        e = s * s + t * t
        den = np.einsum("ij,ij->i", normals, normals)
        wq = (normals @ qc - e) / den
        q_img = qc[None, :] - 2.0 * wq[:, None] * normals
        wr = (normals @ rc - e) / den
        r_img = rc[None, :] - 2.0 * wr[:, None] * normals
        return np.stack([q_img @ nt - ot, r_img @ nr - orr], axis=1)

    axis = np.linspace(-seed_half_width, seed_half_width, seeds_per_axis)
    seeds = np.stack(np.meshgrid(axis, axis, indexing="ij"), axis=-1).reshape(-1, 2)
    roots = newton_multistart(
        comps, seeds, tol=newton_tol, cluster_tol=cluster_tol, vectorized=True
    )
    cons = (Constraint.I6(p, pi), Constraint.I6(q, tau), Constraint.I6(r, rho))
    planes = []
    for st in roots:
        s, t = st
        cand = inv.apply_plane(
            Plane3.from_coeffs(2 * s, 2 * t, -4 * a, -(s * s + t * t))
        )
        if all(residual(c, cand) < tol for c in cons):
            planes.append(cand)
    sol = FoldSolution.finite(planes, possibly_incomplete=True)
    if sol.count > 9:
        raise IllPosed(
            f"{sol.count} distinct fold planes exceed the algebraic bound of 9; "
            "the configuration is degenerate"
        )
    return sol


@dataclass(frozen=True)
class SystemInstance3I6:
    """One solution of the triple point-onto-plane system, in the canonical
    frame, carrying the image points and the elimination scalars.

    ``residual_vector`` evaluates the defining relations directly: the two
    midpoint-on-plane identities, image-segment parallelism (scale ell),
    the normal proportionality (scale k), and the two plane memberships.
    """

    half_gap: float
    q: tuple[float, float, float]
    q_image: tuple[float, float, float]
    r: tuple[float, float, float]
    r_image: tuple[float, float, float]
    s: float
    t: float
    k: float
    ell: float
    tau_coeffs: tuple[float, float, float, float]
    rho_coeffs: tuple[float, float, float, float]

    @classmethod
    def from_plane(
        cls,
        p: Point3,
        q: Point3,
        r: Point3,
        pi: Plane3,
        tau: Plane3,
        rho: Plane3,
        plane: Plane3,
    ) -> "SystemInstance3I6":
        frame, a = canonical_frame_point_plane(p, pi)
        pc = frame.apply_plane(plane)
        # scale the plane equation so the z coefficient is -4a
        na = pc.normal_vec
        f = -4.0 * a / na[2]
        s, t = na[0] * f / 2.0, na[1] * f / 2.0
        delta = Plane3.from_coeffs(2 * s, 2 * t, -4 * a, -(s * s + t * t))
        qc = frame.apply_point(q)
        rc = frame.apply_point(r)
        q_img = reflect_point(delta, qc)
        r_img = reflect_point(delta, rc)
        dq = q_img.xyz - qc.xyz
        dr = r_img.xyz - rc.xyz
        i = int(np.argmax(np.abs(dr)))
        ell = float(dq[i] / dr[i]) if abs(dr[i]) > 1e-300 else math.inf
        k = float(-2.0 * a / dq[2]) if abs(dq[2]) > 1e-300 else math.inf
        return cls(
            a,
            tuple(qc.xyz),
            tuple(q_img.xyz),
            tuple(rc.xyz),
            tuple(r_img.xyz),
            s,
            t,
            k,
            ell,
            frame.apply_plane(tau).coeffs(),
            frame.apply_plane(rho).coeffs(),
        )

    def residual_vector(self) -> np.ndarray:
        a = self.half_gap
        qv, qi = np.array(self.q), np.array(self.q_image)
        rv, ri = np.array(self.r), np.array(self.r_image)

        def midpoint_relation(v: np.ndarray, vi: np.ndarray) -> float:
            d = v - vi
            return float(
                2.0 * a * (d[0] ** 2 + d[1] ** 2)
                + (v[0] ** 2 - vi[0] ** 2) * d[2]
                + (v[1] ** 2 - vi[1] ** 2) * d[2]
                + (v[2] ** 2 - vi[2] ** 2) * d[2]
            )

        prop_ell = (qi - qv) - self.ell * (ri - rv)
        prop_k = np.array([self.s, self.t, -2.0 * a]) - self.k * (qi - qv)
        at, bt, ct, dt = self.tau_coeffs
        ar, br, cr, dr = self.rho_coeffs
        members = np.array(
            [
                at * qi[0] + bt * qi[1] + ct * qi[2] + dt,
                ar * ri[0] + br * ri[1] + cr * ri[2] + dr,
            ]
        )
        return np.concatenate(
            [
                [midpoint_relation(qv, qi), midpoint_relation(rv, ri)],
                prop_ell,
                prop_k,
                members,
            ]
        )


# ---------------------------------------------------------------------------
# Generic solver and dispatch
# ---------------------------------------------------------------------------


def solve_generic(
    constraints: Sequence[Constraint],
    tol: float = 1e-8,
    lattice: tuple[int, int, int] = (14, 28, 18),
    window: float | None = None,
    refine_count: int = 320,
    newton_tol: float = 1e-10,
    max_iter: int = 80,
) -> FoldSolution:
    """Numeric solver for any valid operation: multistart Gauss-Newton over
    the (theta, phi, d) fold-plane parameters, seeded from a deterministic
    lattice.  The result is flagged possibly incomplete: a numeric search
    proves existence, never exhaustiveness.
    """
    cons = tuple(constraints)
    spec = OperationSpec.from_constraints(cons)
    reason = spec.rejection_reason()
    if reason is not None:
        raise InvalidOperation(f"invalid combination {spec}: {reason}")
    if spec.total_codimension < 3:
        raise InvalidOperation(
            f"{spec} has combined codimension {spec.total_codimension} < 3; "
            "it leaves free fold-plane parameters"
        )
    radius = payload_radius(cons)
    w = window if window is not None else 3.0 * radius
    nth, nph, nd = lattice
    thetas = (np.arange(nth) + 0.5) * math.pi / nth
    phis = np.arange(nph) * 2.0 * math.pi / nph
    offs = np.linspace(-w, w, nd)
    grid = np.stack(np.meshgrid(thetas, phis, offs, indexing="ij"), axis=-1)
    flat = grid.reshape(-1, 3)
    normals, offsets = params_to_planes(flat)
    vals = stacked_residual_grid(cons, normals, offsets)
    order = np.argsort(vals, kind="stable")
    starts = flat[order[: min(refine_count, len(order))]]
    roots = newton_multistart(
        stacked_components_fn(cons),
        starts,
        tol=newton_tol,
        max_iter=max_iter,
        cluster_tol=1e-7,
        vectorized=True,
    )
    planes = []
    for root in roots:
        plane = plane_from_params(*root)
        if stacked_residual(cons, plane) < tol:
            planes.append(plane)
    return FoldSolution.finite(planes, possibly_incomplete=True, provenance="generic")


def _only(constraints: Sequence[Constraint], kind: IncidenceKind) -> list[Constraint]:
    return [c for c in constraints if c.kind is kind]


def solve_operation(
    constraints: Sequence[Constraint],
    tol: float = TOL_INCIDENCE,
    **generic_options,
) -> FoldSolution:
    """Solve a fold operation given its constraint payloads.

    Routes the worked combinations to their dedicated solvers and everything
    else to the generic numeric search.  Raises InvalidOperation for the
    three rejected combinations and for under-constrained multisets.
    """
    cons = tuple(constraints)
    if not cons:
        raise InvalidOperation("no constraints given")
    spec = OperationSpec.from_constraints(cons)
    reason = spec.rejection_reason()
    if reason is not None:
        raise InvalidOperation(f"invalid combination {spec}: {reason}")
    if spec.total_codimension < 3:
        raise InvalidOperation(
            f"{spec} has combined codimension {spec.total_codimension} < 3; "
            "it leaves free fold-plane parameters"
        )
    key = spec.key
    if key == (1,):
        return solve_I1(*cons[0].objects, tol=tol)
    if key == (2,):
        return solve_I2(*cons[0].objects, tol=tol)
    if key == (4,):
        return solve_I4(*cons[0].objects, tol=tol)
    if key == (12,):
        return solve_I12(*cons[0].objects)
    if key == (5, 6):
        p, m = _only(cons, IncidenceKind.I5)[0].objects
        q, pi = _only(cons, IncidenceKind.I6)[0].objects
        return solve_I5_I6(p, m, q, pi, tol=tol)
    if key == (5, 9):
        p, m = _only(cons, IncidenceKind.I5)[0].objects
        (n,) = _only(cons, IncidenceKind.I9)[0].objects
        return solve_I5_I9(p, m, n, tol=tol)
    if key == (6, 8, 11):
        p, pi = _only(cons, IncidenceKind.I6)[0].objects
        (q,) = _only(cons, IncidenceKind.I8)[0].objects
        (tau,) = _only(cons, IncidenceKind.I11)[0].objects
        return solve_I6_I8_I11(p, pi, q, tau, tol=tol)
    if key == (6, 6, 6):
        i6s = _only(cons, IncidenceKind.I6)
        p, pi = i6s[0].objects
        q, tau = i6s[1].objects
        r, rho = i6s[2].objects
        return solve_3I6(p, q, r, pi, tau, rho, tol=max(tol, 1e-8))
    return solve_generic(cons, tol=max(tol, 1e-8), **generic_options)
