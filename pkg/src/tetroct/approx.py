"""Approximating triangulated objects by honeycomb cells."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .geometry import BOUNDARY, INSIDE, MeshLocator, point_in_mesh, rational_point
from .lattice import CellKey, cell_centroid, cell_vertices, cells_in_box, locate

log = logging.getLogger(__name__)

SNAP_DENOMINATOR = 2 ** 20
LARGE_MESH = 10 ** 6


class ApproxError(ValueError):
    pass


@dataclass
class InputMesh:
    triangles: list  # each a triple of float 3-tuples
    normals: list | None = None
    dropped_degenerate: int = 0

    @classmethod
    def from_triangles(cls, triangles: Sequence, normals=None) -> "InputMesh":
        kept, kept_normals, dropped = [], [], 0
        for k, t in enumerate(triangles):
            a, b, c = (tuple(float(x) for x in p) for p in t)
            u = [b[i] - a[i] for i in range(3)]
            v = [c[i] - a[i] for i in range(3)]
            n = (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])
            if n == (0.0, 0.0, 0.0):
                dropped += 1
                continue
            kept.append((a, b, c))
            if normals is not None:
                kept_normals.append(normals[k])
        if dropped:
            log.warning("dropped %d degenerate triangles", dropped)
        if not kept:
            raise ApproxError("mesh has no non-degenerate triangles")
        if len(kept) > LARGE_MESH:
            log.warning("mesh has %d triangles; consider simplifying it first", len(kept))
        return cls(kept, kept_normals if normals is not None else None, dropped)

    def __len__(self) -> int:
        return len(self.triangles)

    def is_closed(self) -> bool:
        edges: dict = {}
        for t in self.triangles:
            for e in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
                key = frozenset(e)
                edges[key] = edges.get(key, 0) + 1
        return all(v % 2 == 0 for v in edges.values())


@dataclass
class ApproxParams:
    scale: Fraction = Fraction(1)
    samples_per_triangle: int = 3
    mode: str = "shell"

    def __post_init__(self):
        self.scale = Fraction(self.scale)
        if self.scale <= 0:
            raise ApproxError("scale must be positive")
        if int(self.samples_per_triangle) != self.samples_per_triangle or self.samples_per_triangle < 1:
            raise ApproxError("samples_per_triangle must be an integer >= 1")
        if self.mode not in ("shell", "solid"):
            raise ApproxError(f"mode must be 'shell' or 'solid', got {self.mode!r}")


@dataclass
class Approximation:
    cells: frozenset
    mode: str
    params: ApproxParams
    note: str = ""
    stats: dict = field(default_factory=dict)


def sample_barycentric(tri: Sequence, s: int) -> list:
    """Points (i*A + j*B + k*C)/s with i + j + k = s, as exact rationals."""
    if s < 1:
        raise ApproxError("s must be >= 1")
    a, b, c = (rational_point(p) for p in tri)
    out = []
    for i in range(s, -1, -1):
        for j in range(s - i, -1, -1):
            k = s - i - j
            out.append(tuple((i * a[d] + j * b[d] + k * c[d]) / s for d in range(3)))
    return out


def _scaled_snapped(p, scale) -> tuple:
    return rational_point(tuple(Fraction(x) * scale for x in p), SNAP_DENOMINATOR)


def shell_approx(m: InputMesh, p: ApproxParams) -> Approximation:
    """All cells containing some snapped, scaled barycentric sample point."""
    if not len(m):
        raise ApproxError("empty mesh")
    cells = set()
    npoints = 0
    for tri in m.triangles:
        for q in sample_barycentric(tri, p.samples_per_triangle):
            cells |= locate(_scaled_snapped(q, p.scale))
            npoints += 1
    return Approximation(frozenset(cells), "shell", p,
                         "cells containing surface samples (boundary samples add all incident cells)",
                         {"samples": npoints, "cells": len(cells)})


def scaled_triangles(m: InputMesh, scale) -> list:
    return [tuple(_scaled_snapped(q, scale) for q in t) for t in m.triangles]


def solid_approx(m: InputMesh, p: ApproxParams, seed: int = 0) -> Approximation:
    """Cells whose vertices and centroid all lie in the closed scaled body."""
    if not len(m):
        raise ApproxError("empty mesh")
    if not m.is_closed():
        raise ApproxError("solid approximation needs a closed (watertight) mesh")
    tris = scaled_triangles(m, p.scale)
    locator = MeshLocator(tris, seed)
    pts = [q for t in tris for q in t]
    lo = [math.floor(min(q[k] for q in pts)) - 1 for k in range(3)]
    hi = [math.ceil(max(q[k] for q in pts)) + 1 for k in range(3)]
    cache: dict = {}

    def inside(q) -> bool:
        r = cache.get(q)
        if r is None:
            r = locator.classify(q)
            cache[q] = r
        return r in (INSIDE, BOUNDARY)

    cells = []
    candidates = cells_in_box(lo, hi)
    for c in candidates:
        if inside(cell_centroid(c)) and all(inside(v) for v in cell_vertices(c)):
            cells.append(c)
    return Approximation(frozenset(cells), "solid", p,
                         "containment tested at cell vertices and centroid only",
                         {"candidates": len(candidates), "cells": len(cells)})


def approximate(m: InputMesh, p: ApproxParams) -> Approximation:
    return shell_approx(m, p) if p.mode == "shell" else solid_approx(m, p)


# ------------------------------------------------------------ test meshes

def icosphere(subdivisions: int = 3, radius: float = 1.0) -> InputMesh:
    """Triangulated sphere by repeated subdivision of an icosahedron."""
    t = (1 + 5 ** 0.5) / 2
    verts = [(-1, t, 0), (1, t, 0), (-1, -t, 0), (1, -t, 0), (0, -1, t), (0, 1, t),
             (0, -1, -t), (0, 1, -t), (t, 0, -1), (t, 0, 1), (-t, 0, -1), (-t, 0, 1)]
    faces = [(0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11), (1, 5, 9), (5, 11, 4),
             (11, 10, 2), (10, 7, 6), (7, 1, 8), (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8),
             (3, 8, 9), (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1)]

    def unit(v):
        n = math.sqrt(sum(x * x for x in v))
        return tuple(x / n for x in v)

    verts = [unit(v) for v in verts]
    for _ in range(subdivisions):
        mids: dict = {}

        def mid(i, j):
            key = (min(i, j), max(i, j))
            if key not in mids:
                verts.append(unit(tuple((a + b) / 2 for a, b in zip(verts[i], verts[j]))))
                mids[key] = len(verts) - 1
            return mids[key]

        new = []
        for a, b, c in faces:
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            new += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new
    return InputMesh([tuple(tuple(radius * x for x in verts[i]) for i in f) for f in faces])


def box_mesh(lo: Sequence, hi: Sequence) -> InputMesh:
    """Axis-aligned box as 12 outward-oriented triangles."""
    x0, y0, z0 = lo
    x1, y1, z1 = hi
    v = [(x0, y0, z0), (x1, y0, z0), (x1, y1, z0), (x0, y1, z0),
         (x0, y0, z1), (x1, y0, z1), (x1, y1, z1), (x0, y1, z1)]
    quads = [(0, 3, 2, 1), (4, 5, 6, 7), (0, 1, 5, 4), (2, 3, 7, 6), (1, 2, 6, 5), (0, 4, 7, 3)]
    tris = []
    for a, b, c, d in quads:
        tris += [(v[a], v[b], v[c]), (v[a], v[c], v[d])]
    return InputMesh([tuple(tuple(float(x) for x in p) for p in t) for t in tris])


def cells_volume(cells) -> Fraction:
    return sum((Fraction(1, 3) if c.is_tet else Fraction(4, 3) for c in cells), Fraction(0))
