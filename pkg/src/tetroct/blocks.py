"""Blocks assembled from honeycomb cells and the analysis of their surfaces."""
from __future__ import annotations

import itertools
from collections import Counter, defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .lattice import (
    IDENTITY, QUARTER_TURN_X, V1, V2, V3, CellKey, HoneycombIsometry, OctCell, TetCell,
    add, apply_isometry, cell_centroid, cell_faces, cell_vertices, cell_volume, cells_in_box,
    cross, dot, neighbors, point_group, scale, sub, transform_cells,
)

FAMILIES = ("kitten", "ufo", "cushion", "shuriken")
D_VEC = sub(V2, V3)  # v2 - v3 = (0, -1, 1), the second in-plane direction


class BlockError(ValueError):
    pass


@dataclass(frozen=True)
class Block:
    cells: frozenset
    name: str = "block"
    params: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "cells", frozenset(self.cells))

    @property
    def num_tets(self) -> int:
        return sum(1 for c in self.cells if c.is_tet)

    @property
    def num_octs(self) -> int:
        return sum(1 for c in self.cells if not c.is_tet)

    def sorted_cells(self) -> list[CellKey]:
        return sorted(self.cells)

    def vertices(self) -> set:
        return {v for c in self.cells for v in cell_vertices(c)}

    def transformed(self, iso: HoneycombIsometry) -> "Block":
        return Block(transform_cells(iso, self.cells), self.name, self.params)

    def label(self) -> str:
        if not self.params:
            return self.name
        return f"{self.name}({','.join(str(p) for p in self.params)})"


# -------------------------------------------------------------- constructors

def translate_cells(cells: Iterable[CellKey], v) -> frozenset:
    return transform_cells(HoneycombIsometry(IDENTITY, tuple(v)), cells)


def kitten_cells() -> frozenset:
    return frozenset({TetCell(0, 0, 0), TetCell(1, 0, 0), OctCell(1, 1, 1)})


def ufo_cells() -> frozenset:
    return frozenset({OctCell(1, 1, 1), TetCell(0, 0, 0), TetCell(1, 0, 0),
                      TetCell(0, 0, 1), TetCell(1, 0, 1)})


def cushion_cells(n: int) -> frozenset:
    cells = set()
    for k in range(n + 1):
        cells.add(TetCell(0, k, k))
        cells.add(TetCell(1, k, k))
    for k in range(n):
        cells.add(OctCell(1, k + 1, k + 1))
    return frozenset(cells)


def shuriken_arms(m: int, n: int) -> list[frozenset]:
    """The four cushion arms of the (m, n)-shuriken.

    Two arms of length n run along v1 and two of length m along v2 - v3;
    they are arranged as a pinwheel whose arms all touch the lattice point
    (1, 1, 2) - (0, 0, 0) shifted as the lengths grow.
    """
    along = cushion_cells(n)
    across = transform_cells(HoneycombIsometry(QUARTER_TURN_X), cushion_cells(m))
    return [
        along,
        translate_cells(along, add(V1, scale(m, D_VEC))),
        translate_cells(across, V1),
        translate_cells(across, (0, n + 2, n)),
    ]


def shuriken_cells(m: int, n: int) -> frozenset:
    out = set()
    for arm in shuriken_arms(m, n):
        out |= arm
    return frozenset(out)


def _positive_int(v, what) -> int:
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise BlockError(f"{what} must be a positive integer, got {v!r}")
    return v


def make_block(family: str, *params) -> Block:
    if family == "kitten":
        if params:
            raise BlockError("kitten takes no parameters")
        return Block(kitten_cells(), "kitten")
    if family == "ufo":
        if params:
            raise BlockError("ufo takes no parameters")
        return Block(ufo_cells(), "ufo")
    if family == "cushion":
        if len(params) != 1:
            raise BlockError("cushion takes one parameter n")
        n = _positive_int(params[0], "n")
        return Block(cushion_cells(n), "cushion", (n,))
    if family == "shuriken":
        if len(params) != 2:
            raise BlockError("shuriken takes two parameters m, n")
        m = _positive_int(params[0], "m")
        n = _positive_int(params[1], "n")
        return Block(shuriken_cells(m, n), "shuriken", (m, n))
    raise BlockError(f"unknown block family {family!r}; expected one of {FAMILIES}")


def scaled_solid_halfspaces(platonic: str, k: int) -> list[tuple]:
    """Half-spaces (n, b), n.q <= b, of k*T1 or k*O."""
    if platonic == "tetra":
        verts = [(0, 0, 0), scale(k, V1), scale(k, V2), scale(k, V3)]
    elif platonic == "octa":
        c = (k, k, k)
        return [((sx, sy, sz), dot((sx, sy, sz), c) + k)
                for sx, sy, sz in itertools.product((1, -1), repeat=3)]
    else:
        raise BlockError(f"unknown solid {platonic!r}; expected 'tetra' or 'octa'")
    out = []
    for omit in range(4):
        tri = [v for i, v in enumerate(verts) if i != omit]
        n = cross(sub(tri[1], tri[0]), sub(tri[2], tri[0]))
        b = dot(n, tri[0])
        if dot(n, verts[omit]) > b:
            n, b = scale(-1, n), -b
        out.append((n, b))
    return out


def make_scaled(platonic: str, k: int) -> Block:
    """The edge-k*sqrt(2) tetrahedron k*T1 or octahedron k*O as a cell set."""
    k = _positive_int(k, "k")
    hs = scaled_solid_halfspaces(platonic, k)
    lo = (-1, -1, -1)
    hi = (2 * k + 1,) * 3
    cells = [c for c in cells_in_box(lo, hi)
             if all(dot(n, v) <= b for v in cell_vertices(c) for n, b in hs)]
    block = Block(frozenset(cells), platonic, (k,))
    base = Fraction(1, 3) if platonic == "tetra" else Fraction(4, 3)
    if volume(block) != k ** 3 * base:
        raise AssertionError("cell census of scaled solid violates the volume identity")
    return block


# ------------------------------------------------------------------ surfaces

@dataclass
class TriangleMesh:
    vertices: list
    triangles: list

    def triangle_points(self):
        for t in self.triangles:
            yield tuple(self.vertices[i] for i in t)

    def __len__(self) -> int:
        return len(self.triangles)


def mesh_from_triangles(tris: Iterable[Sequence]) -> TriangleMesh:
    tris = [tuple(tuple(p) for p in t) for t in tris]
    verts = sorted({p for t in tris for p in t})
    index = {p: i for i, p in enumerate(verts)}
    return TriangleMesh(verts, [tuple(index[p] for p in t) for t in tris])


def boundary_triangles(cells: Iterable[CellKey]) -> list[tuple]:
    seen: dict = {}
    count: Counter = Counter()
    for c in sorted(cells):
        for tri in cell_faces(c):
            key = frozenset(tri)
            count[key] += 1
            seen.setdefault(key, tri)
    return [seen[k] for k in seen if count[k] == 1]


def boundary_surface(b) -> TriangleMesh:
    cells = b.cells if isinstance(b, Block) else b
    return mesh_from_triangles(boundary_triangles(cells))


@dataclass
class SurfaceStats:
    num_vertices: int
    num_edges: int
    num_faces: int
    euler_characteristic: int
    is_closed: bool
    is_manifold: bool
    is_orientable: bool | None = None
    num_components: int = 1
    genus: int | None = None
    non_manifold_vertices: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "num_vertices": self.num_vertices,
            "num_edges": self.num_edges,
            "num_faces": self.num_faces,
            "euler_characteristic": self.euler_characteristic,
            "is_closed": self.is_closed,
            "is_manifold": self.is_manifold,
            "is_orientable": self.is_orientable,
            "num_components": self.num_components,
            "genus": self.genus,
        }


def _edge_map(tris) -> dict:
    edges = defaultdict(list)
    for fi, t in enumerate(tris):
        for k in range(3):
            a, b = t[k], t[(k + 1) % 3]
            edges[frozenset((a, b))].append(fi)
    return edges


def _link_is_cycle(v, tris_at_v) -> bool:
    adj = defaultdict(set)
    for t in tris_at_v:
        a, b = [x for x in t if x != v]
        adj[a].add(b)
        adj[b].add(a)
    if any(len(s) != 2 for s in adj.values()):
        return False
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(adj)


def _components(num_vertices, tris) -> int:
    parent = list(range(num_vertices))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    used = set()
    for t in tris:
        used.update(t)
        for k in (1, 2):
            ra, rb = find(t[0]), find(t[k])
            if ra != rb:
                parent[ra] = rb
    return len({find(v) for v in used})


def _orientable(tris, edges) -> bool:
    """Try to orient every triangle coherently by propagation across edges."""
    flip = [None] * len(tris)

    def directed(fi, a, b):
        t = tris[fi]
        for k in range(3):
            if t[k] == a and t[(k + 1) % 3] == b:
                return True
        return False

    for start in range(len(tris)):
        if flip[start] is not None:
            continue
        flip[start] = False
        queue = deque([start])
        while queue:
            fi = queue.popleft()
            t = tris[fi]
            for k in range(3):
                a, b = t[k], t[(k + 1) % 3]
                if flip[fi]:
                    a, b = b, a
                for fj in edges[frozenset((a, b))]:
                    if fj == fi:
                        continue
                    # neighbour must traverse the edge b -> a
                    want_flip = directed(fj, a, b)
                    if flip[fj] is None:
                        flip[fj] = want_flip
                        queue.append(fj)
                    elif flip[fj] != want_flip:
                        return False
    return True


def surface_stats(mesh: TriangleMesh) -> SurfaceStats:
    tris = [tuple(t) for t in mesh.triangles]
    edges = _edge_map(tris)
    used = {v for t in tris for v in t}
    V, E, F = len(used), len(edges), len(tris)
    chi = V - E + F
    closed = all(len(fs) == 2 for fs in edges.values())
    at_vertex = defaultdict(list)
    for t in tris:
        for v in t:
            at_vertex[v].append(t)
    bad = sorted(mesh.vertices[v] for v in used if not _link_is_cycle(v, at_vertex[v]))
    manifold = closed and not bad
    comps = _components(len(mesh.vertices), tris)
    orientable = _orientable(tris, edges) if manifold else None
    genus = None
    if manifold and orientable:
        genus = (2 * comps - chi) // 2
    return SurfaceStats(V, E, F, chi, closed, manifold, orientable, comps, genus, bad)


def mesh_volume(mesh: TriangleMesh) -> Fraction:
    """Signed volume by the divergence theorem (exact for rational vertices)."""
    total = Fraction(0)
    for a, b, c in mesh.triangle_points():
        total += Fraction(dot(a, cross(b, c)))
    return total / 6


def volume(b) -> Fraction:
    cells = b.cells if isinstance(b, Block) else b
    return sum((cell_volume(c) for c in cells), Fraction(0))


def centroid(b) -> tuple:
    cells = b.cells if isinstance(b, Block) else b
    vol = volume(cells)
    acc = [Fraction(0)] * 3
    for c in cells:
        w = cell_volume(c)
        for i, x in enumerate(cell_centroid(c)):
            acc[i] += w * x
    return tuple(a / vol for a in acc)


# ----------------------------------------------------------------- symmetry

def _min_of_kind(cells, kind):
    ks = [c for c in cells if c.kind == kind]
    return min(ks) if ks else None


def find_isometries(source, target, rotations=None) -> list[HoneycombIsometry]:
    """All honeycomb isometries (R, t) with R.source + t == target."""
    source = frozenset(source)
    target = frozenset(target)
    if len(source) != len(target):
        return []
    kind = "oct" if any(not c.is_tet for c in target) else "tet"
    tmin = _min_of_kind(target, kind)
    out = []
    for g in rotations or point_group():
        image = transform_cells(g, source)
        imin = _min_of_kind(image, kind)
        if imin is None:
            continue
        t = sub(tmin.coords, imin.coords)
        if sum(t) % 2:
            continue
        iso = HoneycombIsometry(g.rotation, t)
        if transform_cells(iso, source) == target:
            out.append(iso)
    return out


def symmetry_group(b) -> list[HoneycombIsometry]:
    cells = b.cells if isinstance(b, Block) else frozenset(b)
    return find_isometries(cells, cells)


class AutomorphismSizeError(ValueError):
    pass


def mesh_automorphisms(mesh: TriangleMesh, max_vertices: int = 64) -> list[tuple]:
    """Every vertex permutation preserving the edge and face sets.

    Plain backtracking: vertices are visited in BFS order, candidates must
    match degree and adjacency to the already-mapped vertices.
    """
    used = sorted({v for t in mesh.triangles for v in t})
    if len(used) > max_vertices:
        raise AutomorphismSizeError(
            f"mesh has {len(used)} vertices; automorphism search is limited to {max_vertices}")
    idx = {v: i for i, v in enumerate(used)}
    n = len(used)
    faces = {frozenset(idx[v] for v in t) for t in mesh.triangles}
    adj = [set() for _ in range(n)]
    for f in faces:
        for a, b in itertools.combinations(f, 2):
            adj[a].add(b)
            adj[b].add(a)
    deg = [len(a) for a in adj]
    # BFS order starting at a vertex of the rarest degree
    freq = Counter(deg)
    start = min(range(n), key=lambda v: (freq[deg[v]], -deg[v], v))
    order, seen = [], set()
    for root in [start] + list(range(n)):
        if root in seen:
            continue
        seen.add(root)
        queue = deque([root])
        while queue:
            u = queue.popleft()
            order.append(u)
            for w in sorted(adj[u]):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    result = []
    image = [-1] * n
    taken = [False] * n

    def extend(pos):
        if pos == n:
            if all(frozenset(image[v] for v in f) in faces for f in faces):
                perm = [0] * n
                for v in range(n):
                    perm[v] = image[v]
                result.append(tuple(used[perm[i]] for i in range(n)))
            return
        u = order[pos]
        mapped_nb = [w for w in adj[u] if image[w] >= 0]
        if mapped_nb:
            cands = adj[image[mapped_nb[0]]]
        else:
            cands = range(n)
        for c in sorted(cands):
            if taken[c] or deg[c] != deg[u]:
                continue
            ok = True
            for w in order[:pos]:
                if (w in adj[u]) != (image[w] in adj[c]):
                    ok = False
                    break
            if not ok:
                continue
            image[u] = c
            taken[c] = True
            extend(pos + 1)
            image[u] = -1
            taken[c] = False

    extend(0)
    # express as maps on the original vertex indices
    return [tuple(p) for p in result]


def _compose(p, q):
    return tuple(p[i] for i in q)


def generators_of(perms: list[tuple]) -> list[tuple]:
    """A small generating set, chosen greedily from the given group elements."""
    if not perms:
        return []
    ident = tuple(sorted(perms[0]))
    pos = {v: i for i, v in enumerate(ident)}
    as_idx = [tuple(pos[v] for v in p) for p in perms]
    gens: list = []
    closure = {tuple(range(len(ident)))}
    for p in as_idx:
        if p in closure:
            continue
        gens.append(p)
        frontier = list(closure)
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = _compose(g, x)
                    if y not in closure:
                        closure.add(y)
                        new.append(y)
            frontier = new
    return [tuple(ident[i] for i in g) for g in gens]


def automorphism_group_order(mesh: TriangleMesh, max_vertices: int = 64) -> tuple[int, list]:
    autos = mesh_automorphisms(mesh, max_vertices)
    return len(autos), generators_of(autos)


# --------------------------------------------------------------- validation

@dataclass
class ValidationReport:
    ok: bool
    errors: list
    notes: list


def validate_block(cells: Sequence[CellKey]) -> ValidationReport:
    cells = list(cells)
    errors, notes = [], []
    dup = [c for c, k in Counter(cells).items() if k > 1]
    if dup:
        errors.append(f"duplicate cells: {sorted(dup)}")
    unique = set(cells)
    if not unique:
        errors.append("empty cell set")
    else:
        start = min(unique)
        seen = {start}
        stack = [start]
        while stack:
            for nb in neighbors(stack.pop()):
                if nb in unique and nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        if len(seen) != len(unique):
            errors.append(f"cells are not face-connected ({len(seen)} of {len(unique)} reachable)")
    notes.append("R1/R2 hold automatically: all cells are honeycomb cells")
    return ValidationReport(not errors, errors, notes)


def _solve3(basis, v):
    """Coefficients of v in the given basis, as Fractions (None if singular)."""
    m = [[Fraction(basis[j][i]) for j in range(3)] + [Fraction(v[i])] for i in range(3)]
    for col in range(3):
        piv = next((r for r in range(col, 3) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        for r in range(3):
            if r != col and m[r][col] != 0:
                f = m[r][col] / m[col][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return [m[i][3] / m[i][i] for i in range(3)]


def determinant(basis) -> int:
    a, b, c = basis
    return dot(a, cross(b, c))


def tiles(b, basis, region) -> bool:
    """Whether translates of b by the lattice spanned by basis cover the
    cells of the integer box ``region = (lo, hi)`` exactly once each."""
    cells = b.cells if isinstance(b, Block) else frozenset(b)
    if determinant(basis) == 0:
        raise BlockError("basis vectors are linearly dependent")
    lo, hi = region
    for c in cells_in_box(lo, hi):
        hits = 0
        for d in cells:
            if d.kind != c.kind:
                continue
            coeffs = _solve3(basis, sub(c.coords, d.coords))
            if all(x.denominator == 1 for x in coeffs):
                t = sub(c.coords, d.coords)
                if sum(t) % 2 == 0:
                    hits += 1
        if hits != 1:
            return False
    return True
