"""The twelve acceptance criteria, each timed against its budget.

Every test records one PASS/FAIL line (shown in the terminal summary and
echoed to stdout) and then asserts, so a failing criterion also fails the run.
"""
import math
import random
import time
from contextlib import contextmanager
from fractions import Fraction

import networkx as nx

from conftest import ACCEPTANCE_LINES
from oracles import brute_locate, incidence_isomorphic, signed_volume
from tetroct.approx import ApproxParams, cells_volume, icosphere, shell_approx, solid_approx
from tetroct.assembly import (
    KITTEN_PLANE, assembly_graph, complete_tiling_basis, contact_faces, generate_paper_assembly,
    make_assembly, Placement,
)
from tetroct.blocks import (
    D_VEC, automorphism_group_order, boundary_surface, determinant, find_isometries, make_block,
    make_scaled, mesh_volume, surface_stats, symmetry_group, tiles, volume,
)
from tetroct.interlock import check_interlocking, motion_constraints
from tetroct.lattice import (
    IDENTITY, STANDARD_OCT, V1, HoneycombIsometry, add, apply_isometry, cell_centroid,
    cells_in_box, locate, paper_tet, point_group, scale, transform_cells,
)
from tetroct.modify import truncate_assembly, truncate_slab

KITTEN_VERTICES = [(0, 1, 1), (1, 0, 1), (1, 1, 0), (1, 2, 1), (1, 1, 2), (2, 1, 1),
                   (0, 0, 0), (2, 0, 0)]
KITTEN_FACES = [[1, 2, 5], [1, 2, 7], [1, 3, 4], [1, 3, 7], [1, 4, 5], [2, 3, 7],
                [2, 3, 8], [2, 5, 6], [2, 6, 8], [3, 4, 6], [3, 6, 8], [4, 5, 6]]


@contextmanager
def criterion(number, title, budget):
    """Time the body, record a PASS/FAIL line, then fail the test if needed."""
    detail = {"note": ""}
    start = time.perf_counter()
    ok, error = True, None
    try:
        yield detail
    except AssertionError as e:
        ok, error = False, e
    elapsed = time.perf_counter() - start
    within = elapsed < budget
    status = "PASS" if ok and within else "FAIL"
    note = f" ({detail['note']})" if detail["note"] else ""
    why = "" if ok else f" [{error}]"
    slow = "" if within else " [over budget]"
    line = f"criterion {number:2d} {status}: {title} in {elapsed:.2f}s / {budget}s{note}{why}{slow}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    if error is not None:
        raise error
    assert within, f"criterion {number} took {elapsed:.2f}s, budget {budget}s"


# --------------------------------------------------------------------- 1

def test_criterion_01_kitten_fidelity():
    with criterion(1, "kitten vertices, faces, chi and group orders", 1):
        b = make_block("kitten")
        mesh = boundary_surface(b)
        assert sorted(mesh.vertices) == sorted(KITTEN_VERTICES)
        assert incidence_isomorphic([tuple(t) for t in mesh.triangles], KITTEN_FACES)
        assert surface_stats(mesh).euler_characteristic == 2
        assert len(symmetry_group(b)) == 4
        assert automorphism_group_order(mesh)[0] == 4


# --------------------------------------------------------------------- 2

def shuriken_one_one():
    """The 20-cell (1,1)-shuriken decomposition, with T3/T4 offsets (a, 2 - t)."""
    def shift(cell, a, t):
        return apply_isometry(HoneycombIsometry(IDENTITY, add(scale(a, V1), scale(t, D_VEC))), cell)
    cells = []
    for name in ("T1", "T2"):
        cells += [shift(paper_tet(name), a, t) for a, t in ((0, 0), (1, 0), (1, 1), (2, 1))]
    for name in ("T3", "T4"):
        cells += [shift(paper_tet(name), a, 2 - t) for a, t in ((0, 1), (0, 2), (1, 2), (1, 3))]
    cells += [shift(STANDARD_OCT, a, t) for a, t in ((0, 0), (1, 0), (0, 1), (1, 1))]
    return cells


def test_criterion_02_family_counts():
    with criterion(2, "cushion and shuriken cell counts, shuriken(1,1) decomposition", 1) as d:
        for n in range(1, 9):
            b = make_block("cushion", n)
            assert (b.num_tets, b.num_octs) == (2 * (n + 1), n)
        for m in range(1, 6):
            for n in range(1, 6):
                b = make_block("shuriken", m, n)
                assert (b.num_tets, b.num_octs) == (4 * (m + n + 2), 2 * (m + n)), (m, n)
        listed = shuriken_one_one()
        assert len(set(listed)) == 20
        assert find_isometries(frozenset(listed), make_block("shuriken", 1, 1).cells)
        d["note"] = "decomposition read with the corrected T3/T4 offsets"


# --------------------------------------------------------------------- 3

def test_criterion_03_shuriken_tori():
    with criterion(3, "shuriken(m,n) surfaces are manifold tori for 2<=m,n<=4", 5):
        for m in range(2, 5):
            for n in range(2, 5):
                s = surface_stats(boundary_surface(make_block("shuriken", m, n)))
                assert s.euler_characteristic == 0, (m, n)
                assert s.is_manifold and s.is_closed and s.is_orientable, (m, n)
                assert s.genus == 1, (m, n)


# --------------------------------------------------------------------- 4

def all_blocks():
    yield make_block("kitten")
    yield make_block("ufo")
    for n in range(1, 9):
        yield make_block("cushion", n)
    for m in range(1, 6):
        for n in range(1, 6):
            yield make_block("shuriken", m, n)
    for k in (1, 2, 3):
        yield make_scaled("tetra", k)
        yield make_scaled("octa", k)


def test_criterion_04_volume_oracle():
    with criterion(4, "cell volume equals divergence-theorem volume", 5) as d:
        count = 0
        for b in all_blocks():
            mesh = boundary_surface(b)
            assert volume(b) == mesh_volume(mesh), b.label()
            count += 1
        slabs = ((Fraction(1, 2), Fraction(3, 2)), (Fraction(1, 4), Fraction(7, 4)), (0, 1))
        for b in (make_block("kitten"), make_block("ufo"), make_block("cushion", 3),
                  make_scaled("tetra", 2), make_block("shuriken", 2, 2)):
            for a, c in slabs:
                pb = truncate_slab(b, a, c)
                assert pb.volume() == mesh_volume(pb.boundary_mesh()), (b.label(), a, c)
                count += 1
        for pb in truncate_assembly(generate_paper_assembly("tetra_interlocking", 3, 3)).blocks:
            mesh = pb.boundary_mesh()
            assert pb.volume() == mesh_volume(mesh) == signed_volume(mesh.triangle_points())
            count += 1
        d["note"] = f"{count} blocks"


# --------------------------------------------------------------------- 5

def test_criterion_05_point_location():
    rng = random.Random(5)

    def coord():
        den = rng.choice((1, 2, 3, 4, 6, 8, 12, 1000))
        return Fraction(rng.randint(-6 * den, 6 * den), den)

    with criterion(5, "locate agrees with half-space oracle on 10,000 points", 30) as d:
        interior = 0
        for _ in range(10_000):
            q = (coord(), coord(), coord())
            expected, inside = brute_locate(q)
            got = locate(q)
            assert {(c.kind, c.x, c.y, c.z) for c in got} == expected, q
            if inside:
                assert len(got) == 1, q
                interior += 1
        d["note"] = f"{interior} interior points"


# --------------------------------------------------------------------- 6

def test_criterion_06_scaled_solids():
    with criterion(6, "doubled tetrahedron and octahedron decompositions", 1):
        t = make_scaled("tetra", 2)
        o = make_scaled("octa", 2)
        assert (t.num_tets, t.num_octs) == (4, 1)
        assert (o.num_tets, o.num_octs) == (8, 6)
        assert volume(t) == 8 * Fraction(1, 3) and volume(o) == 8 * Fraction(4, 3)


# --------------------------------------------------------------------- 7

FRAMED = [("cushion_grid", (1, 5, 5)), ("cushion_grid", (3, 5, 5)),
          ("shuriken_grid", (1, 1, 4, 4)), ("tetra_interlocking", (5, 5))]


def assert_exact_witness(a, verdict):
    system = motion_constraints(a)
    x = verdict.witness.vector(system)
    assert any(x)
    assert system.feasible(x)


def test_criterion_07_interlocking_verdicts():
    with criterion(7, "framed grids interlock, frameless grids and a lone block move", 60) as d:
        worst = 0.0
        for kind, params in FRAMED:
            t0 = time.perf_counter()
            v = check_interlocking(generate_paper_assembly(kind, *params))
            assert v.interlocked, (kind, params)
            a = generate_paper_assembly(kind, *params, frame="none")
            v = check_interlocking(a)
            assert not v.interlocked, (kind, params, "none")
            assert_exact_witness(a, v)
            worst = max(worst, time.perf_counter() - t0)
        lone = make_assembly([Placement(make_block("cushion", 1), HoneycombIsometry(), False)])
        v = check_interlocking(lone)
        assert not v.interlocked
        assert_exact_witness(lone, v)
        assert worst < 60
        d["note"] = f"slowest framed+frameless pair {worst:.1f}s"


# --------------------------------------------------------------------- 8

def test_criterion_08_truncation():
    with criterion(8, "truncated tetra grid keeps contacts, interlocks, stays inside", 60):
        a = generate_paper_assembly("tetra_interlocking", 5, 5)
        t = truncate_assembly(a, Fraction(1, 2), Fraction(3, 2))
        assert t.contact_pairs() == {(f.i, f.j) for f in contact_faces(a)}
        assert check_interlocking(a, contacts=t.all_contacts()).interlocked
        for i, pb in enumerate(t.blocks):
            source = {(c.kind, c.x, c.y, c.z) for c in a.cells(i)}
            for piece in pb.pieces:
                # every vertex of a clipped piece lies in a source cell
                for v in piece.vertices:
                    assert brute_locate(v)[0] & source
            assert pb.volume() == Fraction(11, 6)


# --------------------------------------------------------------------- 9

def test_criterion_09_assembly_graphs():
    with criterion(9, "strip paths, cushion grids, shuriken graphs", 5):
        for k in range(2, 9):
            g = assembly_graph(generate_paper_assembly("kitten_strip", k)).to_networkx()
            assert nx.is_tree(g) and nx.is_isomorphic(g, nx.path_graph(k))
        for n in (1, 3):
            for r, c in ((3, 3), (4, 5)):
                g = assembly_graph(generate_paper_assembly("cushion_grid", n, r, c)).to_networkx()
                assert nx.is_isomorphic(g, nx.grid_2d_graph(r, c)), (n, r, c)
        for dims in ((3, 3), (4, 4)):
            g1 = assembly_graph(generate_paper_assembly("shuriken_grid", 1, 1, *dims))
            g2 = assembly_graph(generate_paper_assembly("shuriken_grid", 2, 2, *dims))
            assert nx.is_isomorphic(g1.to_networkx(), g2.to_networkx())


# -------------------------------------------------------------------- 10

def test_criterion_10_kitten_tiles_space():
    with criterion(10, "kitten tiles a 6^3 region by lattice translations", 10) as d:
        k = make_block("kitten")
        basis = complete_tiling_basis(k, *KITTEN_PLANE)
        assert basis is not None
        assert abs(determinant(basis)) == volume(k) == 2
        assert tiles(k, basis, ((0, 0, 0), (6, 6, 6)))
        d["note"] = f"basis {basis}"


# -------------------------------------------------------------------- 11

def test_criterion_11_approximation():
    with criterion(11, "sphere volume ratios increase, shell hugs the surface", 120) as d:
        ratios = []
        for r in (2, 4, 6, 8):
            cells = solid_approx(icosphere(3, r), ApproxParams(mode="solid")).cells
            ratios.append(float(cells_volume(cells)) / (4 / 3 * math.pi * r ** 3))
        assert all(a < b for a, b in zip(ratios, ratios[1:])), ratios
        shell = shell_approx(icosphere(3, 4), ApproxParams(samples_per_triangle=3)).cells
        assert shell
        worst = max(abs(math.sqrt(sum(float(x) ** 2 for x in cell_centroid(c))) - 4)
                    for c in shell)
        assert worst <= 2
        d["note"] = "ratios " + ", ".join(f"{x:.3f}" for x in ratios) + f"; shell offset {worst:.2f}"


# -------------------------------------------------------------------- 12

SYMMETRY_CASES = [("cushion_grid", (1, 3, 3), "perimeter"), ("cushion_grid", (1, 3, 3), "none"),
                  ("kitten_strip", (4,), "perimeter"), ("tetra_interlocking", (3, 3), "perimeter"),
                  ("shuriken_grid", (1, 1, 3, 3), "perimeter")]


def test_criterion_12_honeycomb_symmetry():
    with criterion(12, "point group fixes the census, isometries keep verdicts", 60):
        # 3x3x3 conventional (side-2) cubic cells centred at the origin
        census = frozenset(cells_in_box((-3, -3, -3), (3, 3, 3)))
        group = point_group()
        assert len(group) == 48
        for g in group:
            assert transform_cells(g, census) == census
        rng = random.Random(12)
        for _ in range(5):
            t = [rng.randint(-9, 9) for _ in range(3)]
            t[2] += sum(t) % 2
            f = HoneycombIsometry(rng.choice(group).rotation, tuple(t))
            for kind, params, frame in SYMMETRY_CASES:
                a = generate_paper_assembly(kind, *params, frame=frame)
                b = a.transformed(f)
                assert check_interlocking(b).interlocked == check_interlocking(a).interlocked
                assert nx.is_isomorphic(assembly_graph(b).to_networkx(),
                                        assembly_graph(a).to_networkx())
