from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_locate, clipped_volume_scipy, signed_volume
from tetroct.assembly import contact_faces, generate_paper_assembly
from tetroct.blocks import boundary_surface, make_block, make_scaled, mesh_volume, surface_stats
from tetroct.interlock import check_interlocking
from tetroct.lattice import OctCell, TetCell, cell_vertices
from tetroct.modify import (
    DeformationError, TruncationError, assembly_meshes, clip_cell, clip_contact,
    deform_and_validate, truncate_assembly, truncate_slab,
)

H = Fraction(1, 2)
slab_ends = st.fractions(min_value=0, max_value=2, max_denominator=8)


def inside_source(q, cells):
    keys = {(c.kind, c.x, c.y, c.z) for c in cells}
    return bool(brute_locate(q)[0] & keys)


def test_abeille_block_volume():
    b = make_scaled("tetra", 2)
    pb = truncate_slab(b, H, Fraction(3, 2))
    mesh = pb.boundary_mesh()
    assert pb.volume() == mesh_volume(mesh) == signed_volume(mesh.triangle_points())
    assert pb.volume() == Fraction(11, 6)
    assert pb.volume() < Fraction(8, 3)
    s = surface_stats(mesh)
    assert s.is_closed and s.euler_characteristic == 2


def test_abeille_volume_matches_scipy_hull():
    pytest.importorskip("scipy")
    verts = [(0, 0, 0), (0, 2, 2), (2, 0, 2), (2, 2, 0)]
    ref = clipped_volume_scipy(verts, [((-1, 0, 0), -0.5), ((1, 0, 0), 1.5)])
    assert abs(ref - 11 / 6) < 1e-9


def test_identity_slab_keeps_kitten():
    pb = truncate_slab(make_block("kitten"), 0, 2)
    assert pb.volume() == 2
    assert len(pb.pieces) == 3


def test_partial_slab_kitten():
    k = make_block("kitten")
    pb = truncate_slab(k, Fraction(1, 4), Fraction(7, 4))
    assert 0 < pb.volume() < 2
    assert pb.volume() == Fraction(15, 8)
    for v in pb.vertices():
        assert inside_source(v, k.cells)


@settings(max_examples=40, deadline=None)
@given(slab_ends, slab_ends, st.sampled_from([TetCell(0, 0, 0), TetCell(1, 0, 0),
                                               OctCell(1, 1, 1), TetCell(1, 2, 3)]))
def test_cell_clipping_matches_scipy(a, c, cell):
    pytest.importorskip("scipy")
    if a >= c:
        a, c = c, a
    if a == c:
        return
    piece = clip_cell(cell, a, c)
    xs = [v[0] for v in cell_vertices(cell)]
    if piece is None:
        assert max(xs) <= a or min(xs) >= c
        return
    ref = clipped_volume_scipy(cell_vertices(cell), [((-1, 0, 0), -a), ((1, 0, 0), c)]) \
        if min(xs) < a or max(xs) > c else None
    if ref is not None and min(c, max(xs)) - max(a, min(xs)) > Fraction(1, 16):
        assert abs(float(piece.volume()) - ref) < 1e-9
    assert piece.euler_characteristic() == 2
    assert all(a <= v[0] <= c for v in piece.vertices)


def test_slab_validation():
    b = make_block("kitten")
    for a, c in ((1, 1), (-1, 1), (0, 3), (Fraction(3, 2), H)):
        with pytest.raises(TruncationError):
            truncate_slab(b, a, c)


def test_clip_contact_polygon():
    tri = ((0, 0, 0), (2, 0, 0), (0, 2, 0))
    poly = clip_contact(tri, H, Fraction(3, 2))
    assert all(H <= p[0] <= Fraction(3, 2) for p in poly)
    assert clip_contact(((0, 0, 0), (0, 1, 1), (0, 2, 0)), H, 1) == []


def test_truncated_tetra_assembly_keeps_pairs_and_interlocks():
    asm = generate_paper_assembly("tetra_interlocking", 4, 4)
    t = truncate_assembly(asm)
    assert t.contact_pairs() == {(f.i, f.j) for f in contact_faces(asm)}
    assert check_interlocking(asm, contacts=t.all_contacts()).interlocked


def test_truncated_blocks_lie_inside_their_sources():
    asm = generate_paper_assembly("tetra_interlocking", 2, 3)
    t = truncate_assembly(asm)
    for i, pb in enumerate(t.blocks):
        for v in pb.vertices():
            assert inside_source(v, asm.cells(i))


def test_truncated_cushion_grid_interlocks():
    asm = generate_paper_assembly("cushion_grid", 1, 3, 3)
    t = truncate_assembly(asm, Fraction(1, 4), Fraction(7, 4))
    assert check_interlocking(asm, contacts=t.all_contacts()).interlocked


# ------------------------------------------------------------- deformation

def small_grid_meshes():
    return assembly_meshes(generate_paper_assembly("cushion_grid", 1, 2, 2))


def test_identity_deformation_is_valid():
    report = deform_and_validate(small_grid_meshes())
    assert report.valid and report.status == "assembly-valid"


def test_uniform_scaling_stays_valid():
    report = deform_and_validate(small_grid_meshes(), lambda p: tuple(2 * x for x in p))
    assert report.valid


def test_shifting_one_block_is_detected():
    meshes = small_grid_meshes()
    shift = Fraction(1, 10)
    moved = [tuple(tuple((p[0] + shift, p[1], p[2])) for p in t) for t in meshes[0]]
    report = deform_and_validate([moved] + meshes[1:])
    assert not report.valid and report.status == "intersecting"
    assert report.intersecting_pairs and all(0 in p for p in report.intersecting_pairs)


def test_nested_blocks_are_detected():
    outer = boundary_surface(make_scaled("octa", 2))
    inner = boundary_surface(make_block("ufo"))
    # the ufo sits strictly inside the doubled octahedron after a shift
    inner_tris = [tuple(tuple(Fraction(x) + d for x, d in zip(p, (1, 1, 1))) for p in t)
                  for t in inner.triangle_points()]
    report = deform_and_validate([outer, inner_tris], check_self=False)
    assert not report.valid


def test_open_mesh_is_rejected():
    tris = list(boundary_surface(make_block("kitten")).triangle_points())[:-1]
    with pytest.raises(DeformationError):
        deform_and_validate([tris])


def test_truncated_blocks_export_closed_meshes():
    asm = generate_paper_assembly("tetra_interlocking", 2, 2)
    t = truncate_assembly(asm)
    for pb in t.blocks:
        assert surface_stats(pb.boundary_mesh()).is_closed
    assert deform_and_validate([pb.boundary_mesh() for pb in t.blocks]).valid
