import networkx as nx
import pytest

from tetroct.assembly import (
    KITTEN_PLANE, OCTA_PLANE, AssemblyError, GridRule, OverlapError, Placement,
    assembly_graph, assembly_vertices, complete_tiling_basis, contact_faces, cushion_rule,
    generate_paper_assembly, grid_placements, make_assembly, plane_vector, point_contacts,
    search_checkerboard_rules, search_grid_translations, separating_ray, shuriken_rule,
    tetra_rule,
)
from tetroct.blocks import D_VEC, determinant, make_block, make_scaled, volume
from tetroct.lattice import IDENTITY, V1, HoneycombIsometry, cell_vertices, point_group


def translated(block, v, frame=False):
    return Placement(block, HoneycombIsometry(IDENTITY, v), frame)


def grid_graph_iso(a, r, c):
    return nx.is_isomorphic(assembly_graph(a).to_networkx(), nx.grid_2d_graph(r, c))


def test_plane_vector_spans_x0_plane():
    assert plane_vector(1, 0) == V1
    assert plane_vector(0, 1) == D_VEC
    assert plane_vector(2, -3)[0] == 0


def test_overlap_reports_pair_and_cell():
    k = make_block("kitten")
    with pytest.raises(OverlapError) as e:
        make_assembly([translated(k, (0, 0, 0)), translated(k, (2, 0, 0)),
                       translated(k, (0, 0, 0))])
    assert e.value.pair == (0, 2)
    assert "0 and 2" in str(e.value)


def test_kitten_pair_contacts():
    k = make_block("kitten")
    a = make_assembly([translated(k, (0, 0, 0)), translated(k, V1)])
    faces = contact_faces(a)
    assert faces and all((f.i, f.j) == (0, 1) for f in faces)
    for f in faces:
        # normal points from block i into block j
        assert sum(f.normal[t] * V1[t] for t in range(3)) > 0
    assert assembly_graph(a).edges == {(0, 1)}


def test_far_apart_blocks_do_not_touch():
    k = make_block("kitten")
    a = make_assembly([translated(k, (0, 0, 0)), translated(k, (0, 10, 10))])
    assert contact_faces(a) == [] and point_contacts(a) == []


def test_separating_ray_unique_for_half_space_cone():
    half = [(1, 0, 0), (-1, 0, 0), (0, 0, 1), (0, 0, -1), (0, 1, 0)]
    assert separating_ray(half, [(0, -1, 0)]) == (0, -1, 0)


def test_separating_ray_ambiguous_for_opposite_tetrahedra():
    cone = [(0, 1, 1), (1, 0, 1), (1, 1, 0)]
    assert separating_ray(cone, [tuple(-x for x in d) for d in cone]) is None


def test_point_contacts_in_tetra_checkerboard():
    a = generate_paper_assembly("tetra_interlocking", 3, 3)
    faces = contact_faces(a)
    pcs = point_contacts(a, faces)
    assert pcs
    on_face = {(f.i, f.j, p) for f in faces for p in f.triangle}
    for pc in pcs:
        assert any(pc.normal)
        for k in (pc.i, pc.j):
            assert pc.point in {v for c in a.cells(k) for v in cell_vertices(c)}
        assert (pc.i, pc.j, pc.point) not in on_face


@pytest.mark.parametrize("k", range(2, 9))
def test_kitten_strip_graph_is_path(k):
    a = generate_paper_assembly("kitten_strip", k)
    g = assembly_graph(a).to_networkx()
    assert nx.is_isomorphic(g, nx.path_graph(k))
    assert nx.is_tree(g)
    assert a.frame == [0, k - 1]


@pytest.mark.parametrize("n", [1, 3])
@pytest.mark.parametrize("rc", [(3, 3), (4, 5)])
def test_cushion_grid_graph_is_grid(n, rc):
    a = generate_paper_assembly("cushion_grid", n, *rc)
    assert grid_graph_iso(a, *rc)


def test_shuriken_grid_graphs_isomorphic_across_sizes():
    g1 = assembly_graph(generate_paper_assembly("shuriken_grid", 1, 1, 3, 3)).to_networkx()
    g2 = assembly_graph(generate_paper_assembly("shuriken_grid", 2, 2, 3, 3)).to_networkx()
    assert nx.is_isomorphic(g1, g2)


def test_tetra_checkerboard_is_grid():
    assert grid_graph_iso(generate_paper_assembly("tetra_interlocking", 4, 4), 4, 4)


def test_octa_layer_is_hexagonal():
    a = generate_paper_assembly("octa_interlocking", 3, 3)
    degrees = sorted(d for _, d in assembly_graph(a).to_networkx().degree())
    assert degrees[-1] == 6  # the centre block meets six neighbours


def test_perimeter_frame():
    a = generate_paper_assembly("cushion_grid", 1, 4, 5)
    assert len(a.frame) == 2 * 4 + 2 * 5 - 4
    assert generate_paper_assembly("cushion_grid", 1, 4, 5, frame="none").frame == []
    assert generate_paper_assembly("cushion_grid", 1, 2, 2, frame=[3]).frame == [3]
    assert generate_paper_assembly("cushion_grid", 1, 2, 2, frame=[(1, 0)]).frame == [2]


def test_with_frame_and_transform_keep_structure():
    a = generate_paper_assembly("cushion_grid", 1, 3, 3)
    b = a.with_frame([4])
    assert b.frame == [4] and len(b) == 9
    f = HoneycombIsometry(point_group()[17].rotation, (2, 2, 0))
    moved = a.transformed(f)
    assert nx.is_isomorphic(assembly_graph(moved).to_networkx(),
                            assembly_graph(a).to_networkx())
    assert {f(v) for v in assembly_vertices(a)} == assembly_vertices(moved)


@pytest.mark.parametrize("kind,params", [("kitten_strip", (0,)), ("cushion_grid", (1, 0, 2)),
                                         ("cushion_grid", (2, 3, 3)), ("nope", (1,))])
def test_generator_rejects_bad_parameters(kind, params):
    with pytest.raises(AssemblyError):
        generate_paper_assembly(kind, *params)


# ------------------------------------------------------------------ search

def test_kitten_translation_search_finds_strip_plane():
    found = search_grid_translations(make_block("kitten"), bound=2)
    assert found[0] == ((0, 1, 1), (0, 1, -1))


def test_octa_translation_search():
    found = search_grid_translations(make_scaled("octa", 2), bound=2, plane=OCTA_PLANE)
    assert ((1, 1, -2), (2, -1, -1)) in found


def test_cushion_translation_search_is_empty():
    # pure translates of the cushion never share faces inside the slab;
    # cushion grids alternate orientations instead
    assert search_grid_translations(make_block("cushion", 1), bound=3) == []
    assert search_grid_translations(make_scaled("tetra", 2), bound=3) == []


def test_search_bound_guard():
    with pytest.raises(AssemblyError):
        search_grid_translations(make_block("kitten"), bound=7)


def test_checkerboard_search_contains_frozen_rules():
    rules = search_checkerboard_rules(make_block("cushion", 1), bound=2)
    assert len(rules) == 8
    r = cushion_rule(1)
    assert any((x.u, x.w, x.alternate) == (r.u, r.w, r.alternate) for x in rules)
    assert search_checkerboard_rules(make_block("cushion", 2), bound=3) == []


def test_checkerboard_search_for_doubled_tetrahedron():
    rules = search_checkerboard_rules(make_scaled("tetra", 2), bound=2)
    r = tetra_rule()
    assert any((x.area, x.alternate) == (r.area, r.alternate) for x in rules)


@pytest.mark.parametrize("n", [1, 3, 5, 7])
def test_cushion_rule_gives_square_grid(n):
    block = make_block("cushion", n)
    a = make_assembly(*grid_placements(block, cushion_rule(n), 3, 3, "none"))
    assert grid_graph_iso(a, 3, 3)


def test_cushion_rule_rejects_even_n():
    with pytest.raises(AssemblyError):
        cushion_rule(4)


def test_grid_rule_isometries_alternate():
    r = cushion_rule(1)
    assert r.isometry(0, 0) == HoneycombIsometry()
    assert r.isometry(0, 1).rotation != IDENTITY
    assert r.isometry(1, 1).rotation == IDENTITY
    assert GridRule(*KITTEN_PLANE).area == 1
    assert shuriken_rule(1, 1).u == (0, 2, 2)


def test_kitten_basis_completion():
    k = make_block("kitten")
    basis = complete_tiling_basis(k, *KITTEN_PLANE)
    assert basis is not None
    assert abs(determinant(basis)) == volume(k) == 2
    # the cushion has non-integral volume 8/3 and cannot tile by translations
    assert complete_tiling_basis(make_block("cushion", 1), *KITTEN_PLANE) is None
