"""Assemblies of placed blocks: validation, contacts, graphs and generators."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import networkx as nx

from .blocks import (
    D_VEC, Block, boundary_triangles, determinant, make_block, make_scaled, tiles, volume,
)
from .lattice import (
    IDENTITY, QUARTER_TURN_X, V1, CellKey, HoneycombIsometry, add, cell_vertices, face_normal,
    scale, transform_cells,
)


class AssemblyError(ValueError):
    pass


class OverlapError(AssemblyError):
    def __init__(self, i, j, cell):
        self.pair = (i, j)
        self.cell = cell
        super().__init__(f"placements {i} and {j} overlap in {cell!r}")


@dataclass(frozen=True)
class Placement:
    block: Block
    isometry: HoneycombIsometry = HoneycombIsometry()
    is_frame: bool = False

    @property
    def cells(self) -> frozenset:
        return transform_cells(self.isometry, self.block.cells)


@dataclass(frozen=True)
class ContactFace:
    i: int
    j: int
    triangle: tuple
    normal: tuple  # outward normal of block i, i.e. pointing into block j

    @property
    def points(self) -> tuple:
        return self.triangle


@dataclass(frozen=True)
class PointContact:
    """Blocks i and j touching at a vertex or along an edge through ``point``
    where the set of separating plane normals is the single ray ``normal``."""

    i: int
    j: int
    point: tuple
    normal: tuple

    @property
    def points(self) -> tuple:
        return (self.point,)


@dataclass
class AssemblyModel:
    placements: list
    grid: list | None = None  # optional (row, col) per placement
    _cells: list = field(default_factory=list, repr=False)

    @property
    def frame(self) -> list[int]:
        return [i for i, p in enumerate(self.placements) if p.is_frame]

    @property
    def free(self) -> list[int]:
        return [i for i, p in enumerate(self.placements) if not p.is_frame]

    def cells(self, i: int) -> frozenset:
        return self._cells[i]

    def with_frame(self, frame: Iterable[int]) -> "AssemblyModel":
        frame = set(frame)
        ps = [Placement(p.block, p.isometry, i in frame) for i, p in enumerate(self.placements)]
        return AssemblyModel(ps, self.grid, list(self._cells))

    def transformed(self, iso: HoneycombIsometry) -> "AssemblyModel":
        ps = [Placement(p.block, iso.compose(p.isometry), p.is_frame) for p in self.placements]
        return make_assembly(ps, self.grid)

    def __len__(self) -> int:
        return len(self.placements)


def make_assembly(placements: Sequence[Placement], grid=None) -> AssemblyModel:
    placements = list(placements)
    owner: dict[CellKey, int] = {}
    cell_sets = []
    for i, p in enumerate(placements):
        cs = p.cells
        cell_sets.append(cs)
        for c in sorted(cs):
            if c in owner:
                raise OverlapError(owner[c], i, c)
            owner[c] = i
    return AssemblyModel(placements, grid, cell_sets)


def contact_faces(a: AssemblyModel) -> list[ContactFace]:
    """Shared boundary triangles, found by hashing vertex triples."""
    table: dict[frozenset, list] = {}
    for i in range(len(a)):
        for tri in boundary_triangles(a.cells(i)):
            table.setdefault(frozenset(tri), []).append((i, tri))
    out = []
    for key, owners in table.items():
        if len(owners) < 2:
            continue
        for (i, ti), (j, tj) in itertools.combinations(sorted(owners), 2):
            out.append(ContactFace(i, j, ti, face_normal(ti)))
    out.sort(key=lambda f: (f.i, f.j, sorted(f.triangle)))
    return out


def _primitive(v) -> tuple:
    g = 0
    for x in v:
        g = math.gcd(g, x)
    return tuple(x // g for x in v) if g else tuple(v)


def _local_cone(cells, p, boundary_normals):
    """Edge directions of the cells at p, or None if the block is not
    locally convex at p (some incident boundary plane fails to support it)."""
    gens = set()
    for c in cells:
        vs = cell_vertices(c)
        if p not in vs:
            continue
        for q in vs:
            d = tuple(a - b for a, b in zip(q, p))
            # unit edges are (+-1, +-1, 0) up to order; this skips the
            # antipodal octahedron vertex
            if sorted(map(abs, d)) == [0, 1, 1]:
                gens.add(d)
    for n in boundary_normals:
        if any(sum(a * b for a, b in zip(n, d)) > 0 for d in gens):
            return None
    return gens


def separating_ray(gens_i, gens_j):
    """The unique normal n (up to scale) with n.d <= 0 on the cone of block i
    and n.d >= 0 on the cone of block j, or None if it is not unique."""
    cons = [tuple(-x for x in d) for d in gens_i] + list(gens_j)  # all need n.c >= 0
    rays = set()
    for a_, b_ in itertools.combinations(cons, 2):
        r = _primitive((a_[1] * b_[2] - a_[2] * b_[1], a_[2] * b_[0] - a_[0] * b_[2],
                        a_[0] * b_[1] - a_[1] * b_[0]))
        if r == (0, 0, 0):
            continue
        for cand in (r, tuple(-x for x in r)):
            if all(sum(x * y for x, y in zip(cand, c)) >= 0 for c in cons):
                rays.add(cand)
        if len(rays) > 1:
            return None
    return next(iter(rays)) if len(rays) == 1 else None


def point_contacts(a: "AssemblyModel", faces=None) -> list[PointContact]:
    """Vertex and edge contacts between blocks that do not lie on a shared
    contact triangle, kept only where both blocks are locally convex and
    the separating normal is unique (so non-penetration is linear)."""
    if faces is None:
        faces = contact_faces(a)
    on_face = {}
    for f in faces:
        for p in f.triangle:
            on_face.setdefault((f.i, f.j), set()).add(p)
    at_vertex: dict = {}
    bnormals: dict = {}
    for i in range(len(a)):
        for tri in boundary_triangles(a.cells(i)):
            n = face_normal(tri)
            for p in tri:
                at_vertex.setdefault(p, set()).add(i)
                bnormals.setdefault((i, p), []).append(n)
    out = []
    for p in sorted(at_vertex):
        blocks = sorted(at_vertex[p])
        if len(blocks) < 2:
            continue
        cones = {}
        for i in blocks:
            cones[i] = _local_cone(a.cells(i), p, bnormals[(i, p)])
        for i, j in itertools.combinations(blocks, 2):
            if p in on_face.get((i, j), ()):
                continue
            if cones[i] is None or cones[j] is None:
                continue
            n = separating_ray(cones[i], cones[j])
            if n is not None:
                out.append(PointContact(i, j, p, n))
    return out


@dataclass
class AssemblyGraph:
    nodes: list
    edges: set

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.nodes)
        g.add_edges_from(tuple(e) for e in self.edges)
        return g


def assembly_graph(a: AssemblyModel, contacts=None) -> AssemblyGraph:
    if contacts is None:
        contacts = contact_faces(a)
    edges = {(min(f.i, f.j), max(f.i, f.j)) for f in contacts}
    return AssemblyGraph(list(range(len(a))), edges)


def assembly_vertices(a: AssemblyModel) -> set:
    return {v for i in range(len(a)) for c in a.cells(i) for v in cell_vertices(c)}


# -------------------------------------------------------------- grid rules

def plane_vector(s: int, t: int) -> tuple:
    """s*v1 + t*(v2 - v3), an integer vector in the plane x = 0."""
    return add(scale(s, V1), scale(t, D_VEC))


@dataclass(frozen=True)
class GridRule:
    """Placement (i, j) sits at i*u + j*w; when ``alternate`` is set, cells
    with odd i + j use that isometry (before the translation) instead of
    the identity."""

    u: tuple
    w: tuple
    alternate: HoneycombIsometry | None = None

    def isometry(self, i: int, j: int) -> HoneycombIsometry:
        t = add(scale(i, self.u), scale(j, self.w))
        base = self.alternate if (self.alternate is not None and (i + j) % 2) else HoneycombIsometry()
        return HoneycombIsometry(IDENTITY, t).compose(base)

    @property
    def area(self) -> int:
        """Fundamental-domain area in units of the (v1, v2 - v3) cell."""
        return abs(_plane_det(self.u, self.w))


def _plane_coords(v) -> tuple:
    # inverse of plane_vector, for vectors with x == 0
    _, y, z = v
    return ((y + z) // 2, (z - y) // 2)


def _plane_det(u, w) -> int:
    if u[0] == 0 and w[0] == 0 and (u[1] + u[2]) % 2 == 0 and (w[1] + w[2]) % 2 == 0:
        (a, b), (c, d) = _plane_coords(u), _plane_coords(w)
        return a * d - b * c
    # generic plane: squared area of the parallelogram, integer root when exact
    cx = (u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0])
    return math.isqrt(sum(c * c for c in cx))


def grid_placements(block: Block, rule: GridRule, rows: int, cols: int,
                    frame="perimeter") -> tuple[list, list]:
    """Row-major placements; ``frame`` is "perimeter", "none", or a
    collection of placement indices and/or (row, col) pairs."""
    chosen = set()
    if frame not in ("perimeter", "none", None):
        for f in frame:
            chosen.add(f if isinstance(f, int) else tuple(f))
    placements, grid = [], []
    for i in range(rows):
        for j in range(cols):
            if frame == "perimeter":
                is_frame = i in (0, rows - 1) or j in (0, cols - 1)
            elif frame in (None, "none"):
                is_frame = False
            else:
                is_frame = (i, j) in chosen or i * cols + j in chosen
            placements.append(Placement(block, rule.isometry(i, j), is_frame))
            grid.append((i, j))
    return placements, grid


def _window_ok(block: Block, rule: GridRule, size: int, require_grid: bool) -> bool:
    try:
        asm = make_assembly(*grid_placements(block, rule, size, size, frame="none"))
    except OverlapError:
        return False
    g = assembly_graph(asm)
    if require_grid:
        expected = nx.grid_2d_graph(size, size)
        index = {rc: k for k, rc in enumerate(asm.grid)}
        want = {tuple(sorted((index[a], index[b]))) for a, b in expected.edges}
        return g.edges == want
    touched = {k for e in g.edges for k in e}
    return len(touched) == len(asm)


def _lattice_disjoint(cells: frozenset, u, w, reach: int) -> bool:
    for i in range(-reach, reach + 1):
        for j in range(-reach, reach + 1):
            if (i, j) == (0, 0):
                continue
            t = add(scale(i, u), scale(j, w))
            if cells & transform_cells(HoneycombIsometry(IDENTITY, t), cells):
                return False
    return True


def _hnf(a, b, c, d):
    """Hermite normal form of the row lattice spanned by (a, b), (c, d)."""
    # column-style reduction on 2x2 integer matrices
    rows = [[a, b], [c, d]]
    # make first column (a, c) gcd
    while rows[1][0] != 0:
        q = rows[0][0] // rows[1][0]
        rows[0] = [rows[0][0] - q * rows[1][0], rows[0][1] - q * rows[1][1]]
        rows[0], rows[1] = rows[1], rows[0]
    if rows[0][0] < 0:
        rows[0] = [-x for x in rows[0]]
    if rows[1][1] < 0:
        rows[1] = [-x for x in rows[1]]
    if rows[1][1]:
        rows[0][1] %= rows[1][1]
    return (rows[0][0], rows[0][1], rows[1][1])


def _gauss_reduce(u, w):
    """Lagrange-Gauss reduction of a planar lattice basis (integer vectors)."""
    n = lambda v: sum(x * x for x in v)
    if n(u) > n(w):
        u, w = w, u
    while True:
        q = round(sum(a * b for a, b in zip(u, w)) / n(u))
        w = tuple(b - q * a for a, b in zip(u, w))
        if n(w) >= n(u):
            return u, w
        u, w = w, u


def _canonical(v):
    return v if next(x for x in v if x) > 0 else scale(-1, v)


def search_grid_translations(block: Block, bound: int = 3, plane=None) -> list[tuple]:
    """Translation pairs (u, w) whose grid of translates is disjoint and in
    which every block touches some other block, ordered by area.

    Each translation lattice is reported once, by its reduced basis.
    ``plane`` is a pair of lattice vectors spanning the translation plane;
    it defaults to (v1, v2 - v3), the plane x = 0.
    """
    if bound > 6:
        raise AssemblyError("search bound is limited to 6")
    p1, p2 = plane or (V1, D_VEC)
    cells = block.cells
    seen = set()
    found = []
    coords = range(-bound, bound + 1)
    vecs = [(a, b) for a in coords for b in coords if (a, b) != (0, 0)]
    for (a, b), (c, d) in itertools.combinations(vecs, 2):
        det = a * d - b * c
        if det == 0:
            continue
        key = _hnf(a, b, c, d)
        if key in seen:
            continue
        seen.add(key)
        h0, h1, h2 = key
        u = add(scale(h0, p1), scale(h1, p2))
        w = scale(h2, p2)
        u, w = _gauss_reduce(u, w)
        u, w = _canonical(u), _canonical(w)
        if not _lattice_disjoint(cells, u, w, 2):
            continue
        if not _window_ok(block, GridRule(u, w), 3, require_grid=False):
            continue
        found.append((abs(det), u, w))
    found.sort()
    return [(u, w) for _, u, w in found]


def complete_tiling_basis(block: Block, u, w, bound: int = 2,
                          region=((0, 0, 0), (6, 6, 6))) -> tuple | None:
    """Extend a planar grid basis (u, w) to a space-filling lattice basis.

    Candidates t are lattice vectors with entries in [-bound, bound] and
    |det(u, w, t)| equal to the block volume (the only way translates can
    tile); the first one, in order of length, whose translates cover
    ``region`` exactly once is returned.
    """
    target = volume(block)
    if target.denominator != 1:
        return None
    rng = range(-bound, bound + 1)
    cands = [t for t in itertools.product(rng, repeat=3)
             if sum(t) % 2 == 0 and abs(determinant((u, w, t))) == target]
    cands.sort(key=lambda t: (sum(x * x for x in t), t))
    for t in cands:
        if tiles(block, (u, w, t), region):
            return (tuple(u), tuple(w), t)
    return None


def search_checkerboard_rules(block: Block, bound: int = 3,
                              alternate_rotation=QUARTER_TURN_X, window: int = 4) -> list[GridRule]:
    """Checkerboard grids alternating ``block`` with a rotated copy such that
    the contact graph is the square grid graph, ordered by area."""
    cells = block.cells
    rot = HoneycombIsometry(alternate_rotation)
    turned = transform_cells(rot, cells)
    tri_a = {frozenset(t) for t in boundary_triangles(cells)}
    coords = range(-2 * bound, 2 * bound + 1)
    touching = []
    for s, t in itertools.product(coords, coords):
        o = plane_vector(s, t)
        moved = transform_cells(HoneycombIsometry(IDENTITY, o), turned)
        if moved & cells:
            continue
        if tri_a & {frozenset(x) for x in boundary_triangles(moved)}:
            touching.append((s, t))
    rules = {}
    pairs = [(p, q) for p in touching for q in touching
             if (p[0] + q[0]) % 2 == 0 and (p[1] + q[1]) % 2 == 0 and p != q]
    for (o1, o2), (o3, o4) in itertools.product(pairs, pairs):
        if (o1[0] + o2[0], o1[1] + o2[1]) != (o3[0] + o4[0], o3[1] + o4[1]):
            continue
        off = ((o1[0] + o2[0]) // 2, (o1[1] + o2[1]) // 2)
        uu = ((o1[0] - o2[0]) // 2, (o1[1] - o2[1]) // 2)
        ww = ((o3[0] - o4[0]) // 2, (o3[1] - o4[1]) // 2)
        if uu[0] * ww[1] - uu[1] * ww[0] == 0:
            continue
        if max(map(abs, uu + ww)) > bound:
            continue
        alt = HoneycombIsometry(IDENTITY, plane_vector(*off)).compose(rot)
        rule = GridRule(plane_vector(*uu), plane_vector(*ww), alt)
        key = (uu, ww, off)
        if key not in rules:
            rules[key] = rule
    good = [r for r in rules.values() if _window_ok(block, r, window, require_grid=True)]
    good.sort(key=lambda r: (r.area, r.u, r.w, r.alternate.translation))
    return good


# ------------------------------------------------------- standard assemblies

KINDS = ("kitten_strip", "kitten_plane", "cushion_grid", "shuriken_grid",
         "tetra_interlocking", "octa_interlocking")


def cushion_rule(n: int) -> GridRule:
    """Checkerboard of n-cushions (n odd) and quarter-turned n-cushions.

    With h = (n + 1) / 2 the rule is u = h*v1, w = h*(v2 - v3) and the turned
    copy shifted by h*v1 - h*(v2 - v3).  It is the scaled n = 1 rule; for
    n = 1 and n = 3 it is among the rules found by
    ``search_checkerboard_rules``, and it is the smallest-area one whose
    framed grids pass the interlocking check (the area-3 rules for n = 3
    admit escape motions).  Even n admits no checkerboard whose contact
    graph is the square grid.
    """
    if n % 2 == 0:
        raise AssemblyError("cushion grids with square contact graph need odd n")
    h = (n + 1) // 2
    alt = HoneycombIsometry(IDENTITY, plane_vector(h, -h)).compose(
        HoneycombIsometry(QUARTER_TURN_X))
    return GridRule(plane_vector(h, 0), plane_vector(0, h), alt)


def tetra_rule() -> GridRule:
    """Checkerboard of doubled tetrahedra and quarter-turned copies."""
    alt = HoneycombIsometry(IDENTITY, plane_vector(1, -1)).compose(
        HoneycombIsometry(QUARTER_TURN_X))
    return GridRule(plane_vector(-1, 0), plane_vector(0, 1), alt)


# translations for the kitten plane: the strip direction v1 and the
# minimal-area completion v2 - v3 (first hit of search_grid_translations)
KITTEN_PLANE = (V1, D_VEC)
# lattice of the plane x + y + z = 0 used for the octahedra interlocking
OCTA_PLANE = ((1, -1, 0), (0, 1, -1))
# hexagonal layer: each doubled octahedron meets six neighbours
OCTA_TRANSLATIONS = ((2, -1, -1), (1, 1, -2))


def shuriken_rule(m: int, n: int) -> GridRule:
    return GridRule(scale(n + 1, V1), scale(m + 1, D_VEC))


def _dims(*vals):
    for v in vals:
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise AssemblyError(f"grid dimensions must be positive integers, got {v!r}")


def generate_paper_assembly(kind: str, *params, frame="perimeter") -> AssemblyModel:
    if kind == "kitten_strip":
        (k,) = params
        _dims(k)
        kit = make_block("kitten")
        ps = []
        for i in range(k):
            if frame == "perimeter":
                is_frame = i in (0, k - 1)
            elif frame in (None, "none"):
                is_frame = False
            else:
                is_frame = i in set(frame)
            ps.append(Placement(kit, HoneycombIsometry(IDENTITY, scale(i, V1)), is_frame))
        return make_assembly(ps, [(0, i) for i in range(k)])
    if kind == "kitten_plane":
        r, c = params
        _dims(r, c)
        return make_assembly(*grid_placements(make_block("kitten"), GridRule(*KITTEN_PLANE),
                                              r, c, frame))
    if kind == "cushion_grid":
        n, r, c = params
        _dims(n, r, c)
        return make_assembly(*grid_placements(make_block("cushion", n), cushion_rule(n),
                                              r, c, frame))
    if kind == "shuriken_grid":
        m, n, r, c = params
        _dims(m, n, r, c)
        return make_assembly(*grid_placements(make_block("shuriken", m, n),
                                              shuriken_rule(m, n), r, c, frame))
    if kind == "tetra_interlocking":
        r, c = params
        _dims(r, c)
        return make_assembly(*grid_placements(make_scaled("tetra", 2), tetra_rule(), r, c, frame))
    if kind == "octa_interlocking":
        r, c = params
        _dims(r, c)
        return make_assembly(*grid_placements(make_scaled("octa", 2),
                                              GridRule(*OCTA_TRANSLATIONS), r, c, frame))
    raise AssemblyError(f"unknown assembly kind {kind!r}; expected one of {KINDS}")
