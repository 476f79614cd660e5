"""Exact arithmetic on the face-centred cubic lattice and its honeycomb.

Coordinates are ambient integer triples.  A point belongs to the lattice
when its coordinate sum is even; edges of honeycomb cells have length
sqrt(2) in these units.

Cells are keyed as follows:

* ``TetCell(anchor)`` -- the regular tetrahedron spanned by the four
  even-parity corners of the unit cube ``[anchor, anchor + 1]^3``;
* ``OctCell(center)`` -- the regular octahedron ``{q : |q - center|_1 <= 1}``
  around an odd-parity integer point.

Every unit cube contains exactly one tetrahedron and a sixth of each of
the four octahedra centred at its odd corners, which is why the two cell
kinds tile space.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

Vec = Tuple[int, int, int]
Number = Union[int, Fraction]
RationalPoint = Tuple[Number, Number, Number]

V1: Vec = (0, 1, 1)
V2: Vec = (1, 0, 1)
V3: Vec = (1, 1, 0)


class LatticeError(ValueError):
    """Raised for points or vectors that are not in the FCC lattice."""


def add(a: Sequence, b: Sequence) -> tuple:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def sub(a: Sequence, b: Sequence) -> tuple:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def scale(k, a: Sequence) -> tuple:
    return (k * a[0], k * a[1], k * a[2])


def dot(a: Sequence, b: Sequence):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross(a: Sequence, b: Sequence) -> tuple:
    return (a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0])


def is_lattice_point(p: Sequence) -> bool:
    return all(isinstance(c, int) for c in p) and sum(p) % 2 == 0


def check_lattice_point(p: Sequence) -> Vec:
    p = tuple(p)
    if len(p) != 3 or not is_lattice_point(p):
        raise LatticeError(f"{p} is not an FCC lattice point (coordinate sum must be even)")
    return p


def to_basis(p: Sequence) -> Vec:
    """Coefficients (a, b, c) with p = a*v1 + b*v2 + c*v3."""
    x, y, z = check_lattice_point(p)
    s = (x + y + z) // 2
    return (s - x, s - y, s - z)


def from_basis(coeffs: Sequence[int]) -> Vec:
    a, b, c = coeffs
    return (b + c, a + c, a + b)


# --------------------------------------------------------------------- cells

@dataclass(frozen=True, order=True)
class CellKey:
    """Common base for the two cell kinds; ordering is (kind, coordinates)."""

    kind: str
    x: int
    y: int
    z: int

    @property
    def coords(self) -> Vec:
        return (self.x, self.y, self.z)

    @property
    def is_tet(self) -> bool:
        return self.kind == "tet"

    def __repr__(self) -> str:
        name = "TetCell" if self.kind == "tet" else "OctCell"
        return f"{name}({self.x}, {self.y}, {self.z})"


def TetCell(x, y=None, z=None) -> CellKey:
    if y is None:
        x, y, z = x
    return CellKey("tet", int(x), int(y), int(z))


def OctCell(x, y=None, z=None) -> CellKey:
    if y is None:
        x, y, z = x
    if (x + y + z) % 2 == 0:
        raise LatticeError(f"octahedron centre {(x, y, z)} must have odd coordinate sum")
    return CellKey("oct", int(x), int(y), int(z))


_CUBE_CORNERS = list(itertools.product((0, 1), repeat=3))
_UNIT = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def tet_class(c: CellKey) -> int:
    """1 for the class of T1 (even anchor sum), 2 for the point-reflected class."""
    return 1 if sum(c.coords) % 2 == 0 else 2


def cell_vertices(c: CellKey) -> list[Vec]:
    if c.is_tet:
        a = c.coords
        return sorted(add(a, k) for k in _CUBE_CORNERS if (sum(a) + sum(k)) % 2 == 0)
    p = c.coords
    out = []
    for e in _UNIT:
        out.append(add(p, e))
        out.append(sub(p, e))
    return sorted(out)


def cell_centroid(c: CellKey) -> tuple:
    if c.is_tet:
        h = Fraction(1, 2)
        return (c.x + h, c.y + h, c.z + h)
    return (Fraction(c.x), Fraction(c.y), Fraction(c.z))


def cell_volume(c: CellKey) -> Fraction:
    return Fraction(1, 3) if c.is_tet else Fraction(4, 3)


def _orient_outward(tri, inside) -> tuple:
    a, b, c = tri
    n = cross(sub(b, a), sub(c, a))
    if dot(n, sub(a, inside)) < 0:
        return (a, c, b)
    return (a, b, c)


def cell_faces(c: CellKey) -> list[tuple]:
    """Outward-oriented triangles (counter-clockwise seen from outside)."""
    verts = cell_vertices(c)
    centre = cell_centroid(c)
    if c.is_tet:
        tris = itertools.combinations(verts, 3)
    else:
        p = c.coords
        tris = []
        for signs in itertools.product((1, -1), repeat=3):
            tris.append(tuple(add(p, scale(s, e)) for s, e in zip(signs, _UNIT)))
    return [_orient_outward(t, centre) for t in tris]


def face_normal(tri) -> Vec:
    a, b, c = tri
    return cross(sub(b, a), sub(c, a))


def cell_halfspaces(c: CellKey) -> list[tuple]:
    """(normal, offset) pairs with the cell equal to {q : n.q <= offset for all}."""
    out = []
    for tri in cell_faces(c):
        n = face_normal(tri)
        out.append((n, dot(n, tri[0])))
    return out


def cell_neighbor(c: CellKey, face) -> CellKey:
    """The other honeycomb cell sharing ``face`` with ``c``."""
    fset = frozenset(tuple(v) for v in face)
    verts = cell_vertices(c)
    if len(fset) != 3 or not fset <= set(verts):
        raise LatticeError(f"{sorted(fset)} is not a face of {c!r}")
    if c.is_tet:
        omitted = [v for v in verts if v not in fset]
        if len(omitted) != 1:
            raise LatticeError(f"{sorted(fset)} is not a face of {c!r}")
        w = omitted[0]
        a = c.coords
        # corner of the cube antipodal to the omitted vertex
        antipode = tuple(2 * a[i] + 1 - w[i] for i in range(3))
        return OctCell(antipode)
    p = c.coords
    signs = []
    for v in sorted(fset):
        d = sub(v, p)
        signs.append(d)
    s = [0, 0, 0]
    for d in signs:
        for i in range(3):
            if d[i]:
                if s[i]:
                    raise LatticeError(f"{sorted(fset)} is not a face of {c!r}")
                s[i] = d[i]
    if 0 in s:
        raise LatticeError(f"{sorted(fset)} is not a face of {c!r}")
    return TetCell(tuple(p[i] + (s[i] - 1) // 2 for i in range(3)))


def neighbors(c: CellKey) -> list[CellKey]:
    return [cell_neighbor(c, f) for f in cell_faces(c)]


# ------------------------------------------------------------ point location

def _common_denominator(q: Sequence) -> tuple[tuple[int, int, int], int]:
    fs = [Fraction(v) for v in q]
    d = math.lcm(*(f.denominator for f in fs))
    return tuple(int(f * d) for f in fs), d


def locate(q: Sequence) -> set[CellKey]:
    """All cells whose closed region contains the rational point ``q``."""
    (X, Y, Z), D = _common_denominator(q)
    P = (X, Y, Z)
    lo = [v // D for v in P]          # floor
    hi = [-((-v) // D) for v in P]    # ceil
    found = set()
    for p in itertools.product(*(range(lo[i] - 1, hi[i] + 2) for i in range(3))):
        if sum(p) % 2 and sum(abs(P[i] - D * p[i]) for i in range(3)) <= D:
            found.add(OctCell(p))
    for a in itertools.product(*({lo[i], hi[i] - 1} if hi[i] > lo[i] else {lo[i], lo[i] - 1}
                                 for i in range(3))):
        if not all(D * a[i] <= P[i] <= D * (a[i] + 1) for i in range(3)):
            continue
        inside = True
        for k in _CUBE_CORNERS:
            corner = add(a, k)
            if sum(corner) % 2 and sum(abs(P[i] - D * corner[i]) for i in range(3)) < D:
                inside = False
                break
        if inside:
            found.add(TetCell(a))
    return found


def cells_in_box(lo: Sequence[int], hi: Sequence[int]) -> list[CellKey]:
    """Every cell whose vertices all lie in the integer box [lo, hi]."""
    out = []
    for a in itertools.product(*(range(lo[i], hi[i]) for i in range(3))):
        out.append(TetCell(a))
    for p in itertools.product(*(range(lo[i] + 1, hi[i]) for i in range(3))):
        if sum(p) % 2:
            out.append(OctCell(p))
    return out


# ----------------------------------------------------------------- isometries

Matrix = Tuple[Vec, Vec, Vec]
IDENTITY: Matrix = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3))
                 for i in range(3))


def matvec(m: Matrix, v: Sequence) -> tuple:
    return tuple(m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2] for i in range(3))


def transpose(m: Matrix) -> Matrix:
    return tuple(tuple(m[j][i] for j in range(3)) for i in range(3))


def is_signed_permutation(m) -> bool:
    try:
        rows = [tuple(int(x) for x in r) for r in m]
    except (TypeError, ValueError):
        return False
    if len(rows) != 3 or any(len(r) != 3 for r in rows):
        return False
    cols = set()
    for r in rows:
        nz = [j for j in range(3) if r[j] != 0]
        if len(nz) != 1 or abs(r[nz[0]]) != 1:
            return False
        cols.add(nz[0])
    return len(cols) == 3


@dataclass(frozen=True, order=True)
class HoneycombIsometry:
    """p -> rotation @ p + translation, mapping honeycomb cells onto cells."""

    rotation: Matrix = IDENTITY
    translation: Vec = (0, 0, 0)

    def __post_init__(self):
        if not is_signed_permutation(self.rotation):
            raise LatticeError(f"rotation {self.rotation} is not a signed permutation matrix")
        rot = tuple(tuple(int(x) for x in r) for r in self.rotation)
        object.__setattr__(self, "rotation", rot)
        object.__setattr__(self, "translation", check_lattice_point(self.translation))

    def __call__(self, p: Sequence) -> tuple:
        return add(matvec(self.rotation, p), self.translation)

    def compose(self, other: "HoneycombIsometry") -> "HoneycombIsometry":
        """self after other."""
        return HoneycombIsometry(matmul(self.rotation, other.rotation),
                                 self(other.translation))

    def inverse(self) -> "HoneycombIsometry":
        rt = transpose(self.rotation)
        return HoneycombIsometry(rt, scale(-1, matvec(rt, self.translation)))

    @property
    def determinant(self) -> int:
        m = self.rotation
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def translation(v: Sequence[int]) -> HoneycombIsometry:
    return HoneycombIsometry(IDENTITY, tuple(v))


def point_group() -> list[HoneycombIsometry]:
    """The 48 signed permutation matrices, as isometries fixing the origin."""
    out = []
    for perm in itertools.permutations(range(3)):
        for signs in itertools.product((1, -1), repeat=3):
            rows = []
            for i in range(3):
                r = [0, 0, 0]
                r[perm[i]] = signs[i]
                rows.append(tuple(r))
            out.append(HoneycombIsometry(tuple(rows)))
    out.sort()
    return out


# 90 degree turn about the x-axis, (x, y, z) -> (x, -z, y); maps v1 to v2 - v3.
QUARTER_TURN_X: Matrix = ((1, 0, 0), (0, 0, -1), (0, 1, 0))


def apply_isometry(iso: HoneycombIsometry, c: CellKey) -> CellKey:
    if c.is_tet:
        r = matvec(iso.rotation, c.coords)
        signs = matvec(iso.rotation, (1, 1, 1))
        anchor = tuple(r[i] + min(0, signs[i]) + iso.translation[i] for i in range(3))
        return TetCell(anchor)
    return OctCell(iso(c.coords))


def transform_cells(iso: HoneycombIsometry, cells: Iterable[CellKey]) -> frozenset:
    return frozenset(apply_isometry(iso, c) for c in cells)


# ---------------------------------------------------- named representatives

def paper_tet(name: str) -> CellKey:
    """The four listed tetrahedra T1..T4.

    T4 is the translate v2 + T1 and T3 is the translate (v1 - v3) + T2, so
    only two translation classes exist; the four names are kept for
    cross-referencing explicit decompositions.
    """
    table = {
        "T1": TetCell(0, 0, 0),
        "T2": TetCell(1, 0, 0),
        "T3": TetCell(0, 0, 1),
        "T4": TetCell(1, 0, 1),
    }
    try:
        return table[name]
    except KeyError:
        raise ValueError(f"unknown tetrahedron name {name!r}") from None


STANDARD_OCT = OctCell(1, 1, 1)
