"""Triangulated meshes of envelope quadrics and Wavefront OBJ export.

Each quadric kind is meshed in its canonical frame (where it is a graph or
a pair of nappes) and mapped back to scene coordinates, so exported vertices
satisfy the quadric equation to machine precision.  Tangent fold planes are
exported as quads centered at their contact with the envelope.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .envelopes import PlaneFamily, Quadric
from .errors import NoEnvelope
from .geometry import perp_unit


def _grid_graph(extent: float, resolution: int, zfun) -> tuple[np.ndarray, list]:
    """Vertices and triangles of z = zfun(x, y) over a square grid."""
    xs = np.linspace(-extent, extent, resolution)
    ys = np.linspace(-extent, extent, resolution)
    xx, yy = np.meshgrid(xs, ys, indexing="ij")
    zz = zfun(xx, yy)
    verts = np.stack([xx.ravel(), yy.ravel(), zz.ravel()], axis=1)
    faces = []
    for i in range(resolution - 1):
        for j in range(resolution - 1):
            a = i * resolution + j
            b = a + 1
            c = a + resolution
            d = c + 1
            faces.append((a, c, b))
            faces.append((b, c, d))
    return verts, faces


def quadric_mesh_canonical(
    fam: PlaneFamily, extent: float = 4.0, resolution: int = 33
) -> tuple[np.ndarray, list]:
    """Canonical-frame mesh of the envelope quadric of a plane family."""
    kind = fam.incidence_kind
    a = fam.half_gap
    if kind == "I5":
        return _grid_graph(extent, resolution, lambda x, y: y * y / (4 * a))
    if kind == "I6":
        return _grid_graph(extent, resolution, lambda x, y: (x * x + y * y) / (4 * a))
    if kind == "I3":
        d = fam.shape_angle
        cd, sd = math.cos(d), math.sin(d)
        return _grid_graph(
            extent,
            resolution,
            lambda x, y: (x * x * cd * cd + 2 * x * y * sd * cd - y * y * cd * cd)
            / (4 * a),
        )
    if kind == "I7-parallel":
        return _grid_graph(extent, resolution, lambda x, y: x * x / (4 * a))
    if kind == "I7":
        # upper nappe of the cone, graphed over (x, u) in the rotated chart
        th = fam.shape_angle
        ct = math.cos(th)
        c2, s2 = math.cos(th / 2), math.sin(th / 2)
        xs = np.linspace(-extent, extent, resolution)
        us = np.linspace(-extent, extent, resolution)
        xx, uu = np.meshgrid(xs, us, indexing="ij")
        vv = np.sqrt(uu * uu + xx * xx / ct)
        yy = uu * c2 + vv * s2
        zz = -uu * s2 + vv * c2
        verts = np.stack([xx.ravel(), yy.ravel(), zz.ravel()], axis=1)
        faces = []
        for i in range(resolution - 1):
            for j in range(resolution - 1):
                p = i * resolution + j
                faces.append((p, p + resolution, p + 1))
                faces.append((p + 1, p + resolution, p + resolution + 1))
        return verts, faces
    raise NoEnvelope(f"{kind} has no envelope surface to mesh")


def tangent_plane_quad(
    fam: PlaneFamily, values: tuple[float, ...], extent: float = 4.0
) -> np.ndarray:
    """A quad (4 scene-coordinate corners) of one family plane, centered at
    its contact with the envelope."""
    plane = fam.plane(*values)
    center = fam.contact_point(*values).xyz
    n = plane.normal_vec
    u = perp_unit(n)
    v = np.cross(n, u)
    h = extent / 2.0
    return np.array(
        [
            center + h * (u + v),
            center + h * (v - u),
            center - h * (u + v),
            center + h * (u - v),
        ]
    )


def write_obj(path, objects: list[tuple[str, np.ndarray, list]]) -> None:
    """Write named (vertices, faces) groups to a Wavefront OBJ file.

    Faces hold 0-based local indices; OBJ indices are written 1-based and
    global across objects.
    """
    lines = []
    offset = 0
    for name, verts, faces in objects:
        lines.append(f"o {name}")
        for v in verts:
            lines.append(f"v {v[0]:.17g} {v[1]:.17g} {v[2]:.17g}")
        for f in faces:
            lines.append("f " + " ".join(str(i + 1 + offset) for i in f))
        offset += len(verts)
    Path(path).write_text("\n".join(lines) + "\n")


def export_envelope_obj(
    path,
    fam: PlaneFamily,
    quadric: Quadric,
    extent: float = 4.0,
    resolution: int = 33,
    tangent_count: int = 0,
) -> list[str]:
    """Write the envelope patch (triangulated) plus optional tangent-plane
    quads; returns the OBJ object names."""
    verts_c, faces = quadric_mesh_canonical(fam, extent, resolution)
    verts = fam.frame.inverse().apply_xyz(verts_c)
    objects = [("envelope", verts, faces)]
    if tangent_count > 0:
        n_free = len(fam.free_params)
        span = [np.linspace(p.low / 2.0, p.high / 2.0, tangent_count) for p in fam.free_params]
        for i in range(tangent_count):
            values = tuple(span[j][i] for j in range(n_free))
            quad = tangent_plane_quad(fam, values, extent)
            objects.append((f"fold_plane_{i + 1}", quad, [(0, 1, 2, 3)]))
    write_obj(path, objects)
    return [name for name, _, _ in objects]
