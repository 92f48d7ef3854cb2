import numpy as np
import pytest

from decdarcy import (
    DarcyProblem, FormValue, build_complex, de_rham_flux, dual_measures, flux_error_norm,
    pressure_error_norm, solve_darcy, velocity_at_points, velocity_from_flux_form,
    whitney_flux_at_point,
)
from decdarcy.darcy import _face_normals
from decdarcy.meshio import generate_structured, read_node_ele
from decdarcy.quadrature import simplex_rule
from decdarcy.whitney import monomial_integral, whitney_mass_matrices

from conftest import fixture_files, square_mesh

TET = build_complex([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0.2, 0.3, 1.1]], [[0, 1, 2, 3]])
TRI = build_complex([[0, 0], [1.2, 0.1], [0.3, 0.9]], [[0, 1, 2]])


def _face_integral(cx, cochain, face):
    """Integral of the interpolated flux form over an (n-1)-face of cell 0."""
    n = cx.n
    pts = cx.vertices[cx.simplices[n - 1][face]]
    normal = _face_normals(pts[None])[0]
    bary, w = simplex_rule(n - 1, 4)
    total = 0.0
    for b, wq in zip(bary, w):
        x = b @ pts
        v = velocity_from_flux_form(whitney_flux_at_point(cx, cochain, 0, x), n)
        total += wq * v @ normal
    return total


@pytest.mark.parametrize("cx", [TRI, TET], ids=["triangle", "tetrahedron"])
def test_whitney_reproduces_face_values(cx):
    nf = cx.num_simplices(cx.n - 1)
    for face in range(nf):
        c = np.zeros(nf)
        c[face] = 1.0
        got = [_face_integral(cx, c, t) for t in range(nf)]
        assert np.allclose(got, np.eye(nf)[face], atol=1e-13)


@pytest.mark.parametrize("cx", [TRI, TET], ids=["triangle", "tetrahedron"])
def test_round_trip_random_cochain(cx):
    c = np.random.default_rng(0).normal(size=cx.num_simplices(cx.n - 1))
    got = [_face_integral(cx, c, t) for t in range(len(c))]
    assert np.allclose(got, c, atol=1e-13)


def test_zero_cochain_zero_form(square2):
    cx, _ = square2
    val = whitney_flux_at_point(cx, np.zeros(16), 3, cx.vertices[cx.simplices[2][3]].mean(axis=0))
    assert val.coeffs == (0.0, 0.0)


def test_patch_solution_velocity_at_barycenters(square2):
    cx, m = square2
    sol = solve_darcy(DarcyProblem.from_fields(cx, m, velocity=[1.0, 0.0]))
    assert np.allclose(velocity_at_points(cx, sol.flux), [1.0, 0.0], atol=1e-12)
    form = whitney_flux_at_point(cx, sol.flux, 0, cx.vertices[cx.simplices[2][0]].mean(axis=0))
    # (b, -a) = (1, 0): the form is dy
    assert np.allclose(form.coeffs, (0.0, 1.0), atol=1e-12)


def test_velocity_from_form_examples():
    assert velocity_from_flux_form(FormValue(1, (1.0, 0.0)), 2).tolist() == [0.0, -1.0]
    assert velocity_from_flux_form(FormValue(1, (0.0, 1.0)), 2).tolist() == [1.0, 0.0]
    assert velocity_from_flux_form(FormValue(2, (1.0, 0.0, 0.0)), 3).tolist() == [1.0, 0.0, 0.0]
    with pytest.raises(ValueError):
        velocity_from_flux_form(FormValue(2, (1.0, 0.0, 0.0)), 2)


def test_point_outside_cell(square2):
    cx, _ = square2
    with pytest.raises(ValueError, match="outside"):
        whitney_flux_at_point(cx, np.zeros(16), 0, [5.0, 5.0])


def test_constant_fields_are_reproduced():
    v, t, _ = read_node_ele(*fixture_files("random_delaunay"))
    cx = build_complex(v, t)
    vel = np.array([0.3, -1.7])
    rng = np.random.default_rng(1)
    bary = rng.dirichlet(np.ones(3), size=cx.num_simplices(2))
    assert np.allclose(velocity_at_points(cx, de_rham_flux(cx, vel), bary), vel, atol=1e-12)
    cube = build_complex(*generate_structured([0, 0, 0], [1, 1, 1], [2, 2, 2], perturb=0.1))
    v3 = np.array([0.5, 2.0, -1.0])
    assert np.allclose(velocity_at_points(cube, de_rham_flux(cube, v3)), v3, atol=1e-12)


def test_monomial_integral_matches_quadrature():
    bary, w = simplex_rule(2, 6)
    for alpha in [(0, 0, 0), (1, 0, 0), (2, 1, 0), (1, 1, 1), (3, 0, 2)]:
        quad = np.sum(w * np.prod(bary ** np.array(alpha), axis=1))
        assert monomial_integral(alpha, 1.0, 2) == pytest.approx(quad, rel=1e-13)
    assert monomial_integral((1, 0, 0, 0), 6.0, 3) == pytest.approx(6.0 / 4)


def test_mass_matrices_symmetric_positive():
    cx = square_mesh(2, perturb=0.2)
    G = whitney_mass_matrices(cx, dual_measures(cx))
    assert np.allclose(G, np.transpose(G, (0, 2, 1)))
    assert np.all(np.linalg.eigvalsh(G) > 0)


def test_flux_error_norm_basics():
    cx = square_mesh(4, perturb=0.2)
    m = dual_measures(cx)
    vel = lambda x: np.stack([np.sin(x[:, 1]), x[:, 0] ** 2], axis=1)
    exact = de_rham_flux(cx, vel)
    assert flux_error_norm(cx, m, exact, vel) == pytest.approx(0.0, abs=1e-14)
    assert flux_error_norm(cx, m, np.zeros_like(exact), exact) == pytest.approx(1.0)
    noisy = exact.copy()
    noisy[cx.boundary_faces()] += 1.0
    assert flux_error_norm(cx, m, noisy, exact) == 0.0
    noisy[cx.interior_faces()[0]] += 1e-3
    assert flux_error_norm(cx, m, noisy, exact) > 0


def test_pressure_error_norm_basics(square2):
    cx, m = square2
    p = lambda x: x[:, 0] + 2 * x[:, 1]
    vals = p(m.cell_center)
    assert pressure_error_norm(m, vals, p) == 0.0
    assert pressure_error_norm(m, vals + 3.0, p) == pytest.approx(0.0, abs=1e-15)
    assert pressure_error_norm(m, vals + 3.0, p, align=False) > 1
