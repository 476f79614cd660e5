import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import census_in_box
from tetroct.approx import (
    ApproxError, ApproxParams, InputMesh, approximate, box_mesh, cells_volume, icosphere,
    sample_barycentric, shell_approx, solid_approx,
)
from tetroct.geometry import BOUNDARY, INSIDE, OUTSIDE, MeshLocator, point_in_mesh
from tetroct.lattice import cell_centroid, cell_vertices


def test_barycentric_sample_count_and_membership():
    tri = ((0.0, 0.0, 0.0), (3.0, 0.0, 0.0), (0.0, 3.0, 0.0))
    for s in range(1, 6):
        pts = sample_barycentric(tri, s)
        assert len(pts) == (s + 1) * (s + 2) // 2
        assert all(p[2] == 0 and p[0] >= 0 and p[1] >= 0 and p[0] + p[1] <= 3 for p in pts)
    with pytest.raises(ApproxError):
        sample_barycentric(tri, 0)


def test_params_validation():
    for kwargs in ({"scale": 0}, {"samples_per_triangle": 0}, {"mode": "voxel"},
                   {"samples_per_triangle": 1.5}):
        with pytest.raises(ApproxError):
            ApproxParams(**kwargs)


def test_degenerate_triangles_are_dropped():
    tris = list(box_mesh((0, 0, 0), (1, 1, 1)).triangles)
    tris.append(((0.0, 0.0, 0.0), (1.0, 1.0, 1.0), (2.0, 2.0, 2.0)))
    m = InputMesh.from_triangles(tris)
    assert len(m) == 12 and m.dropped_degenerate == 1
    with pytest.raises(ApproxError):
        InputMesh.from_triangles([((0, 0, 0), (0, 0, 0), (1, 1, 1))])


def test_solid_needs_closed_mesh():
    m = InputMesh(list(box_mesh((0, 0, 0), (2, 2, 2)).triangles)[:-1])
    with pytest.raises(ApproxError):
        solid_approx(m, ApproxParams(mode="solid"))


def test_solid_cube_equals_box_census():
    m = box_mesh((0, 0, 0), (4, 4, 4))
    got = approximate(m, ApproxParams(1, mode="solid")).cells
    assert {(c.kind, c.x, c.y, c.z) for c in got} == census_in_box((0, 0, 0), (4, 4, 4))
    assert len(got) == 78


def test_scale_is_applied_before_location():
    m = box_mesh((0, 0, 0), (1, 1, 1))
    got = approximate(m, ApproxParams(Fraction(4), mode="solid")).cells
    assert len(got) == 78


def test_sphere_volume_ratios_increase():
    ratios = []
    for r in (2, 4):
        cells = solid_approx(icosphere(2, r), ApproxParams(mode="solid")).cells
        for c in cells:
            assert all(sum(x * x for x in v) <= r * r + 1e-9 for v in cell_vertices(c))
        ratios.append(float(cells_volume(cells)) / (4 / 3 * math.pi * r ** 3))
    assert 0 < ratios[0] < ratios[1] < 1


def test_shell_cells_hug_surface():
    r = 3
    res = shell_approx(icosphere(1, r), ApproxParams(samples_per_triangle=2))
    assert res.cells
    for c in res.cells:
        d = math.sqrt(sum(float(x) ** 2 for x in cell_centroid(c)))
        assert abs(d - r) <= 2


def test_shell_covers_every_sample():
    m = icosphere(0, 2.5)
    res = shell_approx(m, ApproxParams(samples_per_triangle=3))
    assert res.stats["samples"] == len(m) * 10


@settings(max_examples=60, deadline=None)
@given(st.tuples(*[st.fractions(min_value=-1, max_value=3, max_denominator=4)] * 3))
def test_point_in_box_mesh(q):
    tris = box_mesh((0, 0, 0), (2, 2, 2)).triangles
    inside = all(0 < x < 2 for x in q)
    outside = any(x < 0 or x > 2 for x in q)
    expected = INSIDE if inside else OUTSIDE if outside else BOUNDARY
    assert point_in_mesh(q, tris) == expected
    assert MeshLocator(tris).classify(q) == expected
