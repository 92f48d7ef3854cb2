import numpy as np
import pytest

from decdarcy import build_complex, dual_measures, is_delaunay
from decdarcy.complex import _signed_volumes
from decdarcy.meshio import (
    MeshFormatError, generate_hexagon, generate_staggered, generate_structured, read_node_ele,
    refine_4to1, write_cell_csv, write_face_csv, write_node_ele, write_vtk,
)

from conftest import DATA, fixture_files, square_mesh


def test_zero_and_one_based_files_agree():
    v0, t0, r0 = read_node_ele(*fixture_files("two_tri_base0"))
    v1, t1, r1 = read_node_ele(*fixture_files("two_tri_base1"))
    assert np.array_equal(v0, v1) and np.array_equal(t0, t1)
    assert r0.tolist() == r1.tolist() == [1.0, 2.0]
    assert t0.min() == 0


def test_minimal_triangle_files(tmp_path):
    (tmp_path / "t.node").write_text("# one triangle\n3 2 0 0\n0 0 0\n1 1 0\n2 0 1\n")
    (tmp_path / "t.ele").write_text("1 3 0\n0 0 1 2\n")
    v, t, r = read_node_ele(tmp_path / "t.node", tmp_path / "t.ele")
    assert r is None
    cx = build_complex(v, t)
    assert cx.num_simplices(1) == 3


@pytest.mark.parametrize("node,ele,match", [
    ("x y\n", "1 3 0\n0 0 1 2\n", "header"),
    ("3 2 0 0\n0 0 0\n1 1 0\n2 0 1\n", "1 3 0\n0 0 1 3\n", "range"),
    ("3 2 0 0\n1 0 0\n2 1 0\n3 0 1\n", "1 3 0\n1 0 1 2\n", "range"),
    ("3 2 0 0\n0 0 0\n2 1 0\n3 0 1\n", "1 3 0\n0 0 1 2\n", "contiguous"),
    ("4 2 0 0\n0 0 0\n1 1 0\n2 0 1\n", "1 3 0\n0 0 1 2\n", "declares"),
])
def test_malformed_files(tmp_path, node, ele, match):
    (tmp_path / "m.node").write_text(node)
    (tmp_path / "m.ele").write_text(ele)
    with pytest.raises(MeshFormatError, match=match):
        read_node_ele(tmp_path / "m.node", tmp_path / "m.ele")


def test_write_read_lossless(tmp_path):
    v, t = generate_structured([0, 0], [1, 1], [3, 3], perturb=0.3, seed=5)
    v = v * np.pi
    write_node_ele(tmp_path / "mesh.v1", v, t, regions=np.arange(len(t)), base=1)
    v2, t2, r2 = read_node_ele(tmp_path / "mesh.v1.node", tmp_path / "mesh.v1.ele")
    assert np.array_equal(v, v2) and np.array_equal(t, t2)
    assert r2.tolist() == list(range(len(t)))


def test_structured_counts():
    v, t = generate_structured([0, 0], [1, 1], [2, 2])
    assert len(v) == 9 and len(t) == 8
    v, t = generate_structured([0, 0], [1, 1], [1, 1])
    assert len(t) == 2
    cx = build_complex(v, t)
    assert len(cx.interior_faces()) == 1


def test_kuhn_cube_positively_oriented():
    v, t = generate_structured([0, 0, 0], [1, 1, 1], [1, 1, 1])
    assert len(t) == 6
    vols = _signed_volumes(v[t])
    assert np.all(vols > 0) and np.allclose(vols, 1 / 6)


@pytest.mark.parametrize("perturb", [0.0, 0.2])
def test_generated_meshes_are_delaunay(perturb):
    v, t = generate_structured([0, 0], [2, 1], [6, 4], perturb=perturb, seed=2)
    rep = is_delaunay(dual_measures(build_complex(v, t)))
    assert rep.ok
    assert (len(rep.borderline) > 0) == (perturb == 0.0)


def test_generator_errors():
    with pytest.raises(ValueError):
        generate_structured([0, 0], [1, 1], [0, 2])
    with pytest.raises(ValueError):
        generate_structured([0], [1], [2])


def test_staggered_interfaces_well_centered():
    cx = build_complex(*generate_staggered([0, 0], [1, 1], [8, 8]))
    m = dual_measures(cx)
    assert is_delaunay(m).ok
    edges = cx.vertices[cx.simplices[1]]
    on_mid = np.flatnonzero(np.all(np.isclose(edges[:, :, 0], 0.5), axis=1))
    assert len(on_mid) == 8
    assert np.all(m.side_portion[on_mid] > 0)
    assert m.cell_volume.sum() == pytest.approx(1.0)


def test_hexagon():
    v, t = generate_hexagon(2.0)
    cx = build_complex(v, t)
    m = dual_measures(cx)
    assert cx.num_simplices(2) == 6
    assert m.cell_volume.sum() == pytest.approx(3 * np.sqrt(3) / 2 * 4)
    assert np.allclose(m.side_portion[cx.interior_faces()], m.side_portion[cx.interior_faces()][0, 0])


def test_refine_counts_and_areas(tri):
    v, t = refine_4to1(tri)
    assert len(v) == 6 and len(t) == 4
    child = build_complex(v, t)
    assert np.allclose(dual_measures(child).cell_volume, 0.125)
    sq = square_mesh(2, perturb=0.2)
    v, t = refine_4to1(sq)
    fine = build_complex(v, t)
    assert fine.num_simplices(2) == 32 and len(v) == 9 + 16
    assert dual_measures(fine).cell_volume.sum() == pytest.approx(1.0, rel=1e-14)
    assert is_delaunay(dual_measures(build_complex(*refine_4to1(square_mesh(2))))).ok
    cube = build_complex(*generate_structured([0, 0, 0], [1, 1, 1], [1, 1, 1]))
    with pytest.raises(ValueError):
        refine_4to1(cube)


def test_vtk_golden(tmp_path, tri):
    out = tmp_path / "tri.vtk"
    write_vtk(tri, out, cell_data={"pressure": [1.0], "velocity": [[1.0, 0.0]]},
              title="single triangle")
    text = out.read_text()
    assert text == (DATA / "single_triangle.vtk").read_text()
    lines = text.splitlines()
    assert lines[lines.index("CELL_TYPES 1") + 1] == "5"
    assert lines[-1] == "1 0 0"


def test_vtk_tetra_and_point_data(tmp_path):
    cx = build_complex(*generate_structured([0, 0, 0], [1, 1, 1], [1, 1, 1]))
    out = tmp_path / "cube.vtk"
    write_vtk(cx, out, cell_data={"p": np.arange(6.0)}, point_data={"id": np.arange(8.0)})
    text = out.read_text()
    assert "CELL_TYPES 6\n" + "10\n" * 6 in text
    assert "POINT_DATA 8" in text and "CELL_DATA 6" in text


def test_csv_outputs(tmp_path, square2):
    import csv
    cx, m = square2
    write_cell_csv(tmp_path / "cells.csv", m.cell_center, np.arange(8.0), np.ones((8, 2)))
    write_face_csv(tmp_path / "faces.csv", cx, np.zeros(16))
    rows = list(csv.reader(open(tmp_path / "cells.csv")))
    assert rows[0] == ["cell", "cx", "cy", "pressure", "vx", "vy"] and len(rows) == 9
    faces = list(csv.reader(open(tmp_path / "faces.csv")))
    assert faces[0] == ["face", "v0", "v1", "boundary", "flux"] and len(faces) == 17
    assert sum(int(r[3]) for r in faces[1:]) == 8
