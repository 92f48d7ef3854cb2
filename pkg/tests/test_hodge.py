import numpy as np
import pytest

from decdarcy import build_complex, dual_measures, hetero_hodge_inverse, hodge_matrix, inverse_hodge_with_sign
from decdarcy.hodge import DegenerateHodgeError, InterfaceError, weighted_permeability
from decdarcy.meshio import generate_structured

from conftest import SQ3, equilateral_pair, square_mesh


def test_equilateral_hodge_and_inverse():
    cx = build_complex([[0, 0], [1, 0], [0.5, SQ3 / 2]], [[0, 1, 2]])
    m = dual_measures(cx)
    m1 = hodge_matrix(m, 1)
    assert np.allclose(m1.diag, 1 / (2 * SQ3))
    inv = inverse_hodge_with_sign(m1, 2)
    assert np.allclose(inv.diag, -2 * SQ3)
    assert np.allclose(m1.diag * inv.diag, -1)


def test_hodge_extremes(square2):
    cx, m = square2
    assert np.allclose(hodge_matrix(m, 0).diag, m.dual_volume[0])
    assert np.allclose(hodge_matrix(m, 2).diag, 1 / m.cell_volume)


def test_star_star_sign():
    cx = build_complex(*generate_structured([0, 0, 0], [1, 1, 1], [1, 1, 1], perturb=0.0))
    m = dual_measures(cx)
    for k in range(4):
        op = hodge_matrix(m, k)
        if np.any(op.diag == 0):
            continue
        inv = inverse_hodge_with_sign(op, 3)
        assert np.allclose(op.diag * inv.diag, (-1) ** (k * (3 - k)))


def test_inverse_reports_zero_entries(square2):
    cx, m = square2
    with pytest.raises(DegenerateHodgeError) as info:
        inverse_hodge_with_sign(hodge_matrix(m, 1), 2)
    assert len(info.value.indices) == 4


def test_strict_delaunay_positive():
    cx = square_mesh(5, perturb=0.15, seed=1)
    m = dual_measures(cx)
    assert np.all(hodge_matrix(m, 1).diag[cx.interior_faces()] > 0)


def test_hetero_reduces_to_uniform():
    cx = square_mesh(5, perturb=0.15, seed=2)
    m = dual_measures(cx)
    k = 3.7
    hetero = hetero_hodge_inverse(m, np.full(cx.num_simplices(2), k)).diag
    plain = 1 / hodge_matrix(m, 1).diag
    assert np.allclose(hetero, k * plain, rtol=1e-14, atol=0)


def test_hetero_equilateral_pair():
    cx = equilateral_pair()
    m = dual_measures(cx)
    face = cx.interior_faces()[0]
    cof = cx.face_cofaces[face]
    kappa = np.empty(2)
    kappa[cof] = [1.0, 5.0]
    diag = hetero_hodge_inverse(m, kappa).diag
    assert diag[face] == pytest.approx(3 * SQ3, rel=1e-12)
    # symmetric portions give the arithmetic mean
    kappa[cof] = [1.0, 3.0]
    assert weighted_permeability(m, kappa)[face] == pytest.approx(2.0)


def test_hetero_monotone_between_values():
    cx = equilateral_pair()
    m = dual_measures(cx)
    face = cx.interior_faces()[0]
    base = 1 / hodge_matrix(m, 1).diag[face]
    entry = hetero_hodge_inverse(m, [2.0, 7.0]).diag[face]
    assert 2.0 * base < entry < 7.0 * base


def test_boundary_faces_one_sided():
    cx = equilateral_pair()
    m = dual_measures(cx)
    kappa = np.array([2.0, 9.0])
    kw = weighted_permeability(m, kappa)
    for f in cx.boundary_faces():
        assert kw[f] == kappa[cx.face_cofaces[f, 0]]


def test_hetero_errors():
    cx = equilateral_pair()
    m = dual_measures(cx)
    with pytest.raises(ValueError):
        hetero_hodge_inverse(m, [1.0, 0.0])
    right = build_complex([[0, 0], [1, 0], [1, 1], [0, 1]], [[0, 1, 2], [0, 2, 3]])
    with pytest.raises(InterfaceError):
        hetero_hodge_inverse(dual_measures(right), [1.0, 2.0])
