"""Truncating blocks and assemblies by a slab a <= x <= c, and re-validating
deformed assemblies."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .assembly import AssemblyModel, contact_faces, point_contacts
from .blocks import Block, TriangleMesh, boundary_triangles
from .geometry import (
    INSIDE, MeshLocator, clip_polygon, polygon_area_vector, segment_crosses_triangle,
)
from .lattice import CellKey, cell_halfspaces, cross, dot, locate, sub

X_AXIS = (1, 0, 0)


class TruncationError(ValueError):
    pass


@dataclass
class ConvexPiece:
    vertices: list  # rational 3-tuples
    faces: list  # vertex index cycles, counter-clockwise seen from outside
    planes: list  # (normal, offset) with the piece = {q : n.q <= offset}
    cell: CellKey | None = None

    def face_points(self):
        for f in self.faces:
            yield [self.vertices[k] for k in f]

    def volume(self) -> Fraction:
        """Cone decomposition from the vertex average."""
        o = tuple(sum(v[k] for v in self.vertices) / len(self.vertices) for k in range(3))
        total = Fraction(0)
        for poly in self.face_points():
            for k in range(1, len(poly) - 1):
                a, b, c = sub(poly[0], o), sub(poly[k], o), sub(poly[k + 1], o)
                total += dot(a, cross(b, c))
        return total / 6

    def contains(self, q) -> bool:
        return all(dot(n, q) <= b for n, b in self.planes)

    def euler_characteristic(self) -> int:
        edges = {frozenset((f[k], f[(k + 1) % len(f)])) for f in self.faces for k in range(len(f))}
        return len(self.vertices) - len(edges) + len(self.faces)


def _solve_planes(planes):
    (n1, b1), (n2, b2), (n3, b3) = planes
    det = dot(n1, cross(n2, n3))
    if det == 0:
        return None
    # Cramer's rule via cross products
    num = tuple(b1 * x + b2 * y + b3 * z for x, y, z in
                zip(cross(n2, n3), cross(n3, n1), cross(n1, n2)))
    return tuple(Fraction(v) / det for v in num)


def _order_face(points, normal):
    centre = tuple(sum(p[k] for p in points) / len(points) for k in range(3))
    # a basis of the face plane for angular sorting; float angles suffice to
    # order the distinct vertices of a small convex polygon
    axis = max(range(3), key=lambda k: abs(normal[k]))
    u, v = [k for k in range(3) if k != axis]
    ordered = sorted(points, key=lambda p: math.atan2(float(p[v] - centre[v]),
                                                      float(p[u] - centre[u])))
    if dot(polygon_area_vector(ordered), normal) < 0:
        ordered.reverse()
    return ordered


def clip_halfspaces(planes, cell: CellKey | None = None) -> ConvexPiece | None:
    """The convex polytope {q : n.q <= b} from its H-representation, or None
    if it has no interior."""
    planes = [(tuple(n), Fraction(b)) for n, b in planes]
    verts = set()
    for trip in itertools.combinations(planes, 3):
        p = _solve_planes(trip)
        if p is not None and all(dot(n, p) <= b for n, b in planes):
            verts.add(p)
    if len(verts) < 4:
        return None
    verts = sorted(verts)
    index = {p: k for k, p in enumerate(verts)}
    faces, used = [], []
    for n, b in planes:
        on = [p for p in verts if dot(n, p) == b]
        if len(on) < 3:
            continue
        ordered = _order_face(on, n)
        if polygon_area_vector(ordered) == (0, 0, 0):
            continue
        key = frozenset(on)
        if key in used:
            continue
        used.append(key)
        faces.append([index[p] for p in ordered])
    piece = ConvexPiece(verts, faces, planes, cell)
    if piece.volume() <= 0:
        return None
    return piece


def slab_planes(a, c) -> list:
    return [((-1, 0, 0), -Fraction(a)), ((1, 0, 0), Fraction(c))]


def clip_cell(cell: CellKey, a, c) -> ConvexPiece | None:
    return clip_halfspaces(cell_halfspaces(cell) + slab_planes(a, c), cell)


@dataclass
class PolyBlock:
    pieces: list
    source: Block
    slab: tuple

    def volume(self) -> Fraction:
        return sum((p.volume() for p in self.pieces), Fraction(0))

    def boundary_polygons(self) -> list:
        """Piece faces not shared by two pieces, as vertex lists."""
        count: dict = {}
        first: dict = {}
        for piece in self.pieces:
            for poly in piece.face_points():
                key = frozenset(poly)
                count[key] = count.get(key, 0) + 1
                first.setdefault(key, poly)
        return [first[k] for k in first if count[k] == 1]

    def boundary_mesh(self) -> TriangleMesh:
        tris = []
        for poly in self.boundary_polygons():
            for k in range(1, len(poly) - 1):
                tris.append((poly[0], poly[k], poly[k + 1]))
        verts = sorted({p for t in tris for p in t})
        index = {p: i for i, p in enumerate(verts)}
        return TriangleMesh(verts, [tuple(index[p] for p in t) for t in tris])

    def vertices(self) -> set:
        return {v for p in self.pieces for v in p.vertices}


def _check_slab(a, c):
    a, c = Fraction(a), Fraction(c)
    if not (0 <= a < c <= 2):
        raise TruncationError(f"slab must satisfy 0 <= a < c <= 2, got [{a}, {c}]")
    return a, c


def truncate_cells(cells, a, c) -> list:
    pieces = []
    for cell in sorted(cells):
        piece = clip_cell(cell, a, c)
        if piece is not None:
            pieces.append(piece)
    return pieces


def truncate_slab(b: Block, a=Fraction(1, 2), c=Fraction(3, 2)) -> PolyBlock:
    a, c = _check_slab(a, c)
    pieces = truncate_cells(b.cells, a, c)
    if not pieces:
        raise TruncationError(f"slab [{a}, {c}] misses the block entirely")
    return PolyBlock(pieces, b, (a, c))


def in_block_region(q, cells) -> bool:
    """Closed-region membership of a rational point in a union of cells."""
    return bool(locate(q) & set(cells))


@dataclass(frozen=True)
class ClippedContact:
    i: int
    j: int
    polygon: tuple
    normal: tuple

    @property
    def points(self) -> tuple:
        return self.polygon


@dataclass
class TruncatedAssembly:
    source: AssemblyModel
    blocks: list  # PolyBlocks, one per placement
    contacts: list  # ClippedContacts
    point_contacts: list = field(default_factory=list)
    slab: tuple = (Fraction(1, 2), Fraction(3, 2))

    def contact_pairs(self) -> set:
        return {(f.i, f.j) for f in self.contacts}

    def all_contacts(self) -> list:
        return list(self.contacts) + list(self.point_contacts)


def clip_contact(tri, a, c) -> list:
    poly = [tuple(Fraction(x) for x in p) for p in tri]
    for n, b in slab_planes(a, c):
        poly = clip_polygon(poly, n, b)
        if len(poly) < 3:
            return []
    if polygon_area_vector(poly) == (0, 0, 0):
        return []
    return poly


def truncate_assembly(asm: AssemblyModel, a=Fraction(1, 2), c=Fraction(3, 2)) -> TruncatedAssembly:
    a, c = _check_slab(a, c)
    blocks = []
    for i, p in enumerate(asm.placements):
        pieces = truncate_cells(asm.cells(i), a, c)
        if not pieces:
            raise TruncationError(f"slab [{a}, {c}] eliminates placement {i}")
        blocks.append(PolyBlock(pieces, Block(asm.cells(i), p.block.name, p.block.params), (a, c)))
    faces = contact_faces(asm)
    clipped = []
    for f in faces:
        poly = clip_contact(f.triangle, a, c)
        if poly:
            clipped.append(ClippedContact(f.i, f.j, tuple(poly), f.normal))
    # vertex and edge contacts strictly inside the slab keep their local geometry
    points = [pc for pc in point_contacts(asm, faces) if a < pc.point[0] < c]
    return TruncatedAssembly(asm, blocks, clipped, points, (a, c))


# -------------------------------------------------------------- deformation

@dataclass
class DeformationReport:
    valid: bool
    intersecting_pairs: list
    self_intersecting: list

    @property
    def status(self) -> str:
        return "assembly-valid" if self.valid else "intersecting"


class DeformationError(ValueError):
    pass


def _mesh_tris(mesh) -> list:
    if isinstance(mesh, TriangleMesh):
        return [tuple(mesh.vertices[k] for k in t) for t in mesh.triangles]
    return [tuple(tuple(p) for p in t) for t in mesh]


def _check_closed(tris, k):
    edges: dict = {}
    for t in tris:
        for e in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
            key = frozenset(e)
            edges[key] = edges.get(key, 0) + 1
    if any(v % 2 for v in edges.values()):
        raise DeformationError(f"mesh {k} is not closed")


def _bbox(tris):
    pts = [p for t in tris for p in t]
    return (tuple(min(p[k] for p in pts) for k in range(3)),
            tuple(max(p[k] for p in pts) for k in range(3)))


def _boxes_overlap(b1, b2) -> bool:
    return all(b1[0][k] <= b2[1][k] and b2[0][k] <= b1[1][k] for k in range(3))


def _probe_points(tris):
    pts = set()
    for t in tris:
        pts.update(t)
        pts.add(tuple(sum(p[k] for p in t) / 3 for k in range(3)))
        for p, q in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
            pts.add(tuple((p[k] + q[k]) / 2 for k in range(3)))
    return pts


def _surfaces_cross(t1, t2) -> bool:
    for tri in t2:
        for t in t1:
            for p, q in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
                if segment_crosses_triangle(p, q, tri):
                    return True
    return False


def _self_crossing(tris) -> bool:
    for t, s in itertools.combinations(tris, 2):
        if set(t) & set(s):
            continue
        for p, q in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
            if segment_crosses_triangle(p, q, s):
                return True
        for p, q in ((s[0], s[1]), (s[1], s[2]), (s[2], s[0])):
            if segment_crosses_triangle(p, q, t):
                return True
    return False


def deform_and_validate(meshes: Sequence, vertex_map: Callable | None = None,
                        check_self: bool = True) -> DeformationReport:
    """Apply ``vertex_map`` to every mesh vertex and report overlaps.

    Two blocks overlap if an edge of one passes properly through a triangle
    of the other, or if a vertex, edge midpoint or triangle centroid of one
    lies strictly inside the other.  Touching (shared faces, edges or
    vertices) is allowed."""
    tri_sets = []
    for k, m in enumerate(meshes):
        tris = _mesh_tris(m)
        _check_closed(tris, k)
        if vertex_map is not None:
            cache = {}
            def f(p):
                if p not in cache:
                    cache[p] = tuple(Fraction(x) for x in vertex_map(p))
                return cache[p]
            tris = [tuple(f(p) for p in t) for t in tris]
        else:
            tris = [tuple(tuple(Fraction(x) for x in p) for p in t) for t in tris]
        tri_sets.append(tris)
    boxes = [_bbox(t) for t in tri_sets]
    locators = [None] * len(tri_sets)
    probes = [None] * len(tri_sets)
    pairs = []
    for i, j in itertools.combinations(range(len(tri_sets)), 2):
        if not _boxes_overlap(boxes[i], boxes[j]):
            continue
        hit = _surfaces_cross(tri_sets[i], tri_sets[j]) or _surfaces_cross(tri_sets[j], tri_sets[i])
        if not hit:
            for src, dst in ((i, j), (j, i)):
                if locators[dst] is None:
                    locators[dst] = MeshLocator(tri_sets[dst])
                if probes[src] is None:
                    probes[src] = _probe_points(tri_sets[src])
                lo, hi = boxes[dst]
                if any(all(lo[k] < p[k] < hi[k] for k in range(3))
                       and locators[dst].classify(p) == INSIDE for p in probes[src]):
                    hit = True
                    break
        if hit:
            pairs.append((i, j))
    selfs = [k for k, t in enumerate(tri_sets) if check_self and _self_crossing(t)]
    return DeformationReport(not pairs and not selfs, pairs, selfs)


def assembly_meshes(asm: AssemblyModel) -> list:
    return [[t for t in boundary_triangles(asm.cells(i))] for i in range(len(asm))]
