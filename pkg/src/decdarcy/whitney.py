"""Whitney interpolation of flux cochains, velocity recovery and error norms."""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from .complex import SimplicialComplex
from .darcy import de_rham_flux
from .geometry import DualMeasures


@dataclass(frozen=True)
class FormValue:
    """Coefficients of a form in the coordinate basis.

    n=2, degree 1: ``(a, b)`` for ``a dx + b dy``.
    n=3, degree 2: ``(a, b, c)`` for ``a dy^dz + b dz^dx + c dx^dy``.
    """

    degree: int
    coeffs: tuple

    def __post_init__(self):
        n = len(self.coeffs) if self.degree != 1 else None
        if self.degree == 1 and len(self.coeffs) not in (2, 3):
            raise ValueError("1-form needs 2 or 3 coefficients")
        if self.degree == 2 and n != 3:
            raise ValueError("2-form in R^3 needs 3 coefficients")


def barycentric_gradients(points: np.ndarray) -> np.ndarray:
    """Gradients of the barycentric coordinates of n-simplices ``(m, n+1, n)``.

    Returns ``(m, n+1, n)``; row i is the gradient of the coordinate of vertex i.
    """
    e = points[:, 1:, :] - points[:, :1, :]
    inv = np.linalg.inv(e)  # columns are grad mu_1..mu_n
    g = np.transpose(inv, (0, 2, 1))
    g0 = -g.sum(axis=1, keepdims=True)
    return np.concatenate([g0, g], axis=1)


def barycentric_coordinates(points: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Barycentric coordinates of ``x`` (m, n) in simplices ``(m, n+1, n)``."""
    e = points[:, 1:, :] - points[:, :1, :]
    rel = x - points[:, 0, :]
    lam = np.linalg.solve(np.transpose(e, (0, 2, 1)), rel[..., None])[..., 0]
    return np.concatenate([1 - lam.sum(axis=1, keepdims=True), lam], axis=1)


def _face_coefficients(grads: np.ndarray) -> np.ndarray:
    """Vector proxies of the Whitney forms of each cell face as linear forms in mu.

    Returns ``C`` with shape ``(m, n+1 faces, n+1 vertices, n)`` such that
    the proxy of the Whitney form of local face ``a`` is
    ``sum_v mu_v * C[:, a, v, :]``.  Local face ``a`` omits vertex ``a``;
    faces are oriented by increasing local (= global sorted) vertex order.
    """
    m, np1, n = grads.shape
    C = np.zeros((m, np1, np1, n))
    for a in range(np1):
        verts = [v for v in range(np1) if v != a]
        if n == 2:
            i, j = verts
            C[:, a, i] = grads[:, j]
            C[:, a, j] = -grads[:, i]
        elif n == 3:
            i, j, k = verts
            C[:, a, i] = 2 * np.cross(grads[:, j], grads[:, k])
            C[:, a, j] = -2 * np.cross(grads[:, i], grads[:, k])
            C[:, a, k] = 2 * np.cross(grads[:, i], grads[:, j])
        else:
            raise ValueError("only n = 2, 3 supported")
    return C


def _cell_data(cx: SimplicialComplex, cells=None):
    n = cx.n
    if cx.embedding_dim != n:
        raise ValueError("Whitney interpolation needs a flat embedding")
    cells = np.arange(cx.num_simplices(n)) if cells is None else np.atleast_1d(cells)
    pts = cx.vertices[cx.simplices[n][cells]]
    faces = cx.cell_faces()[cells]
    return cells, pts, faces


def interpolate_flux(cx: SimplicialComplex, flux, cells=None, bary=None) -> np.ndarray:
    """Whitney-interpolated flux form coefficients at points of each cell.

    ``bary`` gives barycentric coordinates ``(m, n+1)`` of one sample point
    per cell (default: barycenters).  Returns ``(m, n)`` coefficient rows.
    """
    cells, pts, faces = _cell_data(cx, cells)
    n = cx.n
    if bary is None:
        bary = np.full((len(cells), n + 1), 1.0 / (n + 1))
    C = _face_coefficients(barycentric_gradients(pts))
    vals = np.asarray(flux, dtype=float)[faces]  # (m, n+1)
    return np.einsum("ma,mv,mavk->mk", vals, bary, C)


def whitney_flux_at_point(cx: SimplicialComplex, flux, cell: int, point, tol: float = 1e-10) -> FormValue:
    """Value of the Whitney-interpolated flux form at ``point`` inside ``cell``."""
    cells, pts, _ = _cell_data(cx, cell)
    lam = barycentric_coordinates(pts, np.asarray(point, dtype=float)[None])
    if np.any(lam < -tol):
        raise ValueError(f"point {point} lies outside cell {cell}")
    coeffs = interpolate_flux(cx, flux, cells, lam)[0]
    return FormValue(cx.n - 1, tuple(float(c) for c in coeffs))


def velocity_from_flux_form(value: FormValue, n: int) -> np.ndarray:
    """Velocity vector of a flux form: ``(b, -a)`` in 2D, ``(a, b, c)`` in 3D."""
    if value.degree != n - 1:
        raise ValueError(f"flux form must have degree {n - 1}, got {value.degree}")
    c = np.asarray(value.coeffs, dtype=float)
    if n == 2:
        return np.array([c[1], -c[0]])
    if n == 3:
        return c.copy()
    raise ValueError("only n = 2, 3 supported")


def velocity_at_points(cx: SimplicialComplex, flux, bary=None) -> np.ndarray:
    """Velocity in every cell at the given barycentric points (default barycenters)."""
    coeffs = interpolate_flux(cx, flux, None, bary)
    if cx.n == 2:
        return np.stack([coeffs[:, 1], -coeffs[:, 0]], axis=1)
    return coeffs


def monomial_integral(alpha, volume: float, n: int) -> float:
    """Exact integral of ``prod mu_i**alpha_i`` over an n-simplex of given volume."""
    num = factorial(n)
    for a in alpha:
        num *= factorial(a)
    return volume * num / factorial(n + sum(alpha))


def whitney_mass_matrices(cx: SimplicialComplex, measures: DualMeasures) -> np.ndarray:
    """Per-cell ``(n+1) x (n+1)`` matrices of ``int W_a . W_b`` over the cell.

    Integrals of products of barycentric coordinates are evaluated in closed
    form.
    """
    _, pts, _ = _cell_data(cx)
    n = cx.n
    C = _face_coefficients(barycentric_gradients(pts))
    mu2 = np.array([
        [monomial_integral([(u == v) + (u == w) for u in range(n + 1)], 1.0, n)
         for w in range(n + 1)]
        for v in range(n + 1)
    ])
    G = np.einsum("mavk,mbwk,vw->mab", C, C, mu2)
    return G * measures.cell_volume[:, None, None]


def _lumped_square_norm(cx, measures, values):
    """sum over cells and faces of ``value^2 * int |W_face|^2``."""
    faces = cx.cell_faces()
    diag = np.einsum("maa->ma", whitney_mass_matrices(cx, measures))
    return float(np.sum(np.asarray(values)[faces] ** 2 * diag))


def flux_error_norm(cx: SimplicialComplex, measures: DualMeasures, flux, exact) -> float:
    """Relative flux error measured on interior faces.

    ``exact`` is either a velocity field (callable or constant vector, whose
    face fluxes are computed by quadrature) or an array of exact face fluxes.
    The squared face errors are spread over each cell with the Whitney
    basis forms (``sum_i e_i^2 |W_i|^2``) and integrated exactly; the square
    root is divided by the same quantity for the exact flux.
    """
    nfaces = cx.num_simplices(cx.n - 1)
    if callable(exact) or np.shape(exact) != (nfaces,):
        exact = de_rham_flux(cx, exact)
    exact = np.asarray(exact, dtype=float)
    inner = np.zeros(cx.num_simplices(cx.n - 1), dtype=bool)
    inner[cx.interior_faces()] = True
    err = np.where(inner, np.asarray(flux, dtype=float) - exact, 0.0)
    ref = np.where(inner, exact, 0.0)
    denom = _lumped_square_norm(cx, measures, ref)
    if denom == 0:
        raise ZeroDivisionError("exact interior flux is identically zero")
    return float(np.sqrt(_lumped_square_norm(cx, measures, err) / denom))


def pressure_error_norm(measures: DualMeasures, pressure, exact_p, align: bool = True,
                        locations=None) -> float:
    """Area-weighted relative 2-norm of the pressure error at the pressure points.

    With ``align`` the computed pressure is shifted by the weighted mean of
    the difference first (pressure is only defined up to a constant).
    """
    w = measures.cell_volume
    x = measures.cell_center if locations is None else np.asarray(locations)
    pe = np.asarray(exact_p(x), dtype=float) if callable(exact_p) else np.asarray(exact_p, dtype=float)
    diff = np.asarray(pressure, dtype=float) - pe
    if align:
        diff = diff - np.sum(w * diff) / np.sum(w)
    return float(np.sqrt(np.sum(w * diff**2) / np.sum(w * pe**2)))


