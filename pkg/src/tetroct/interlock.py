"""First-order interlocking certificates for assemblies.

Every free block gets a velocity v and an angular velocity w about its
centroid c.  For each contact triangle between blocks i and j with normal n
(pointing from i into j) and each triangle vertex p, the separation speed

    (v_j + w_j x (p - c_j) - v_i - w_i x (p - c_i)) . n

must be nonnegative.  Frame blocks do not move.  The assembly is
(infinitesimally) interlocked iff the only admissible motion is zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .assembly import AssemblyModel, contact_faces, point_contacts
from .blocks import centroid
from .lattice import cross, dot, sub
from .lp import exact_rank, integer_rows, lp_maximize

AXES = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


class InterlockError(ValueError):
    pass


@dataclass(frozen=True)
class MotionVariable:
    placement: int
    reference: tuple  # rational centroid about which w acts
    offset: int  # index of v_x in the variable vector; v then w, 6 entries


@dataclass
class ConstraintSystem:
    variables: list
    rows: list  # sparse integer rows ((index, coeff), ...)
    sources: list  # (i, j, vertex) for each row
    contacts: int = 0

    @property
    def num_vars(self) -> int:
        return 6 * len(self.variables)

    def evaluate(self, x: Sequence) -> list:
        return [sum(c * x[k] for k, c in row) for row in self.rows]

    def feasible(self, x: Sequence) -> bool:
        return all(v >= 0 for v in self.evaluate(x))


@dataclass
class Motion:
    """Per-block linear and angular velocity."""
    velocities: dict  # placement -> (v, w), each a tuple of Fractions

    def vector(self, system: ConstraintSystem) -> list:
        x = [Fraction(0)] * system.num_vars
        for var in system.variables:
            v, w = self.velocities.get(var.placement, ((0,) * 3, (0,) * 3))
            x[var.offset:var.offset + 6] = [Fraction(t) for t in (*v, *w)]
        return x


@dataclass
class InterlockVerdict:
    interlocked: bool
    witness: Motion | None = None
    method: str = "cone"
    optima: list = field(default_factory=list)  # (label, Fraction)
    num_rows: int = 0
    num_vars: int = 0
    note: str = "infinitesimal (first-order) certificate"


def _motion_from_vector(system: ConstraintSystem, x) -> Motion:
    vel = {}
    for var in system.variables:
        vals = tuple(Fraction(t) for t in x[var.offset:var.offset + 6])
        vel[var.placement] = (vals[:3], vals[3:])
    return Motion(vel)


def motion_constraints(a: AssemblyModel, contacts=None, allow_empty: bool = False,
                       vertex_contacts: bool = True) -> ConstraintSystem:
    """Non-penetration rows for every contact polygon vertex.

    ``contacts`` defaults to the shared triangles of the assembly; clipped
    polygons (any object with ``i``, ``j``, ``normal`` and ``points``) are
    accepted as well.  With ``vertex_contacts`` the blocks touching only at
    vertices or edges contribute one row per contact point when that row is
    a valid linearization (see ``point_contacts``)."""
    free = a.free
    if not free and not allow_empty:
        raise InterlockError("assembly has no free blocks")
    variables = []
    index = {}
    for k, i in enumerate(free):
        ref = centroid(a.cells(i))
        variables.append(MotionVariable(i, ref, 6 * k))
        index[i] = variables[-1]
    if contacts is None:
        contacts = contact_faces(a)
        if vertex_contacts:
            contacts = contacts + point_contacts(a, contacts)
    raw, sources = [], []
    ncontacts = 0
    for f in contacts:
        vi, vj = index.get(f.i), index.get(f.j)
        if vi is None and vj is None:
            continue
        ncontacts += 1
        n = f.normal
        for p in f.points:
            row = {}
            for var, sign in ((vj, 1), (vi, -1)):
                if var is None:
                    continue
                r = sub(p, var.reference)
                rn = cross(r, n)  # w . (r x n) == (w x r) . n
                for k in range(3):
                    row[var.offset + k] = row.get(var.offset + k, 0) + sign * n[k]
                    row[var.offset + 3 + k] = row.get(var.offset + 3 + k, 0) + sign * rn[k]
            raw.append(tuple(sorted(row.items())))
            sources.append((f.i, f.j, tuple(p)))
    rows = integer_rows(raw)
    # integer_rows drops all-zero rows; keep sources aligned
    kept = [s for r, s in zip(raw, sources) if any(v for _, v in r)]
    return ConstraintSystem(variables, rows, kept, ncontacts)


def _scaled_witness(system: ConstraintSystem, x) -> list:
    big = max(abs(Fraction(v)) for v in x)
    return [Fraction(v) / big for v in x]


def _translation_witness(system: ConstraintSystem):
    """All free blocks translating together along a coordinate axis."""
    for axis in AXES:
        for sgn in (1, -1):
            x = [Fraction(0)] * system.num_vars
            for var in system.variables:
                for k in range(3):
                    x[var.offset + k] = Fraction(sgn * axis[k])
            if system.feasible(x):
                return x
    return None


def check_interlocking(a: AssemblyModel, method: str = "cone", contacts=None,
                       system: ConstraintSystem | None = None,
                       vertex_contacts: bool = True) -> InterlockVerdict:
    """Decide whether the admissible first-order motion cone is {0}.

    ``method="cone"`` solves one LP maximizing the sum of all rows over the
    unit box followed by an exact kernel test; ``method="per-variable"``
    maximizes and minimizes every variable separately (12 LPs per free
    block).  Both decide the same property exactly.
    """
    if system is None:
        system = motion_constraints(a, contacts, vertex_contacts=vertex_contacts)
    n = system.num_vars
    verdict = InterlockVerdict(False, None, method, [], len(system.rows), n)

    def finish(x):
        x = _scaled_witness(system, x)
        if not system.feasible(x) or not any(x):
            raise InterlockError("internal error: witness failed exact verification")
        verdict.witness = _motion_from_vector(system, x)
        return verdict

    if method == "cone":
        x = _translation_witness(system)
        if x is not None:
            verdict.optima.append(("translation", Fraction(1)))
            return finish(x)
        total = [0] * n
        for row in system.rows:
            for k, v in row:
                total[k] += v
        res = lp_maximize(total, system.rows, n)
        verdict.optima.append(("sum_of_rows", res.optimum))
        if res.optimum > 0:
            return finish(res.x)
        rank, kernel = exact_rank(system.rows, n)
        verdict.optima.append(("rank_deficiency", Fraction(n - rank)))
        if kernel is not None:
            return finish(kernel)
        verdict.interlocked = True
        return verdict
    if method == "per-variable":
        for k in range(n):
            for sgn in (1, -1):
                obj = [0] * n
                obj[k] = sgn
                res = lp_maximize(obj, system.rows, n)
                verdict.optima.append((f"{'max' if sgn > 0 else 'min'} x{k}", res.optimum))
                if res.optimum > 0:
                    return finish(res.x)
        verdict.interlocked = True
        return verdict
    raise InterlockError(f"unknown method {method!r}")
