"""Exact rational geometry helpers shared by truncation, deformation and approximation."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

import numpy as np

INSIDE, OUTSIDE, BOUNDARY = "inside", "outside", "boundary"


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def rational_point(p, denominator: int | None = None) -> tuple:
    """Exact rational copy of ``p``; floats are snapped to ``denominator`` if given."""
    if denominator is None:
        return tuple(Fraction(x) for x in p)
    return tuple(Fraction(round(Fraction(x) * denominator), denominator) for x in p)


def point_in_triangle(q, tri) -> bool:
    """Closed containment of a point already known to be coplanar with ``tri``."""
    a, b, c = tri
    n = _cross(_sub(b, a), _sub(c, a))
    s1 = _dot(_cross(_sub(b, a), _sub(q, a)), n)
    s2 = _dot(_cross(_sub(c, b), _sub(q, b)), n)
    s3 = _dot(_cross(_sub(a, c), _sub(q, c)), n)
    return s1 >= 0 and s2 >= 0 and s3 >= 0


def _ray_hit(q, d, tri):
    """Classify the ray q + t d (t > 0) against ``tri``.

    Returns "hit", "miss", "degenerate" (touches an edge, vertex or runs in
    the plane) or "on" (q lies on the closed triangle)."""
    a, b, c = tri
    e1, e2 = _sub(b, a), _sub(c, a)
    n = _cross(e1, e2)
    if n == (0, 0, 0):
        return "miss"
    off = _dot(n, _sub(q, a))
    if off == 0 and point_in_triangle(q, tri):
        return "on"
    denom = _dot(n, d)
    if denom == 0:
        return "degenerate" if off == 0 else "miss"
    t = Fraction(-off) / denom
    if t <= 0:
        return "miss"
    p = tuple(qi + t * di for qi, di in zip(q, d))
    s1 = _dot(_cross(e1, _sub(p, a)), n)
    s2 = _dot(_cross(_sub(c, b), _sub(p, b)), n)
    s3 = _dot(_cross(_sub(a, c), _sub(p, c)), n)
    if s1 > 0 and s2 > 0 and s3 > 0:
        return "hit"
    if s1 < 0 or s2 < 0 or s3 < 0:
        return "miss"
    return "degenerate"


def point_in_mesh(q, triangles: Sequence, seed: int = 0, retries: int = 16) -> str:
    """Exact ray-parity classification of ``q`` against a closed triangle set.

    Coordinates may be ints, Fractions or floats (floats are used exactly).
    The ray direction is a random integer vector; rays meeting an edge or
    vertex are retried with a new direction."""
    q = rational_point(q)
    tris = [tuple(rational_point(p) for p in t) for t in triangles]
    rng = random.Random(seed)
    for _ in range(retries):
        d = tuple(rng.randint(-997, 997) for _ in range(3))
        if d == (0, 0, 0):
            continue
        hits = 0
        for tri in tris:
            r = _ray_hit(q, d, tri)
            if r == "on":
                return BOUNDARY
            if r == "degenerate":
                break
            if r == "hit":
                hits += 1
        else:
            return INSIDE if hits % 2 else OUTSIDE
    return BOUNDARY


class MeshLocator:
    """Batch point-in-mesh queries: a vectorized float ray test decides the
    clear cases, and points near any triangle feature fall back to the exact
    rational test."""

    def __init__(self, triangles: Sequence, seed: int = 0):
        self.triangles = [tuple(tuple(p) for p in t) for t in triangles]
        self.seed = seed
        arr = np.array([[[float(x) for x in p] for p in t] for t in self.triangles], dtype=float)
        self.a = arr[:, 0]
        self.e1 = arr[:, 1] - arr[:, 0]
        self.e2 = arr[:, 2] - arr[:, 0]
        scale = float(np.abs(arr).max()) if arr.size else 1.0
        self.eps = 1e-9 * max(scale, 1.0)
        rng = np.random.default_rng(seed)
        d = rng.normal(size=3)
        self.d = d / np.linalg.norm(d)
        self.lo = arr.min(axis=(0, 1)) if arr.size else np.zeros(3)
        self.hi = arr.max(axis=(0, 1)) if arr.size else np.zeros(3)

    def _float_classify(self, q: np.ndarray):
        d = self.d
        h = np.cross(d, self.e2)
        det = np.einsum("ij,ij->i", self.e1, h)
        s = q - self.a
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = 1.0 / det
            u = np.einsum("ij,ij->i", s, h) * inv
            qv = np.cross(s, self.e1)
            v = (qv @ d) * inv
            t = np.einsum("ij,ij->i", self.e2, qv) * inv
        tol = 1e-7
        near = (np.abs(det) < tol) | (np.abs(u) < tol) | (np.abs(v) < tol) | \
            (np.abs(u + v - 1) < tol) | (np.abs(t) < self.eps * 10)
        inside_tri = (u > 0) & (v > 0) & (u + v < 1) & (t > 0)
        relevant = (u > -tol) & (v > -tol) & (u + v < 1 + tol)
        if np.any(near & relevant & np.isfinite(t)):
            return None
        return INSIDE if int(np.count_nonzero(inside_tri)) % 2 else OUTSIDE

    def classify(self, q) -> str:
        qf = np.array([float(x) for x in q])
        if np.any(qf < self.lo - 1e-6) or np.any(qf > self.hi + 1e-6):
            return OUTSIDE
        r = self._float_classify(qf)
        if r is None:
            return point_in_mesh(q, self.triangles, self.seed)
        return r


def segment_crosses_triangle(p, q, tri) -> bool:
    """True if the open segment pq passes through the open triangle, with p
    and q strictly on opposite sides of its plane."""
    a, b, c = tri
    n = _cross(_sub(b, a), _sub(c, a))
    sp = _dot(n, _sub(p, a))
    sq = _dot(n, _sub(q, a))
    if sp == 0 or sq == 0 or (sp > 0) == (sq > 0):
        return False
    t = Fraction(sp) / (sp - sq)
    x = tuple(pi + t * (qi - pi) for pi, qi in zip(p, q))
    s1 = _dot(_cross(_sub(b, a), _sub(x, a)), n)
    s2 = _dot(_cross(_sub(c, b), _sub(x, b)), n)
    s3 = _dot(_cross(_sub(a, c), _sub(x, c)), n)
    return s1 > 0 and s2 > 0 and s3 > 0


def clip_polygon(poly: Sequence, normal, offset) -> list:
    """Sutherland-Hodgman: keep the part of a planar polygon with normal.x <= offset."""
    out = []
    m = len(poly)
    for k in range(m):
        cur, nxt = poly[k], poly[(k + 1) % m]
        fc = _dot(normal, cur) - offset
        fn = _dot(normal, nxt) - offset
        if fc <= 0:
            out.append(cur)
        if (fc < 0 < fn) or (fn < 0 < fc):
            t = Fraction(fc) / (fc - fn)
            out.append(tuple(ci + t * (ni - ci) for ci, ni in zip(cur, nxt)))
    # drop repeated points
    dedup = []
    for p in out:
        if not dedup or dedup[-1] != p:
            dedup.append(p)
    if len(dedup) > 1 and dedup[0] == dedup[-1]:
        dedup.pop()
    return dedup


def polygon_area_vector(poly: Sequence) -> tuple:
    """Twice the vector area (Newell normal) of a planar polygon."""
    total = (0, 0, 0)
    o = poly[0]
    for k in range(1, len(poly) - 1):
        c = _cross(_sub(poly[k], o), _sub(poly[k + 1], o))
        total = (total[0] + c[0], total[1] + c[1], total[2] + c[2])
    return total
