"""Darcy flow in flux/pressure form on a simplicial complex.

Unknowns are the flux ``f`` on primal (n-1)-simplices and the pressure
``p`` on dual 0-cells (one value per n-simplex, at its circumcenter).  The
assembled system is

    [ -mu M^kappa_{n-1}   D_{n-1}^T ] [f]   [ 0        ]
    [  D_{n-1}            0         ] [p] = [ phi omega ]

with ``M^kappa_{n-1}`` the diagonal Hodge star weighted by the inverse
face permeability.  Boundary fluxes are known and one pressure is pinned.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .complex import SimplicialComplex
from .geometry import DualMeasures
from .hodge import hodge_matrix, weighted_permeability
from .linalg import (
    DENSE_LIMIT, SaddleSystem, SolveStats, direct_solve, schur_solve, sparse_direct_solve,
)
from .quadrature import integrate

QUAD_DEGREE = 10


class ConsistencyError(ValueError):
    """Source and boundary flux violate the discrete divergence theorem."""


def _face_normals(points: np.ndarray) -> np.ndarray:
    """Oriented area normals of (n-1)-simplices ``(m, n, n)`` in R^n.

    The normal ``N`` satisfies ``v . N = (*v^flat)(sigma)`` for constant v,
    i.e. ``det[v, e_1, ..., e_{n-1}] / (n-1)!``.
    """
    n = points.shape[2]
    e = points[:, 1:, :] - points[:, :1, :]
    if n == 2:
        t = e[:, 0, :]
        return np.stack([t[:, 1], -t[:, 0]], axis=1)
    if n == 3:
        return 0.5 * np.cross(e[:, 0, :], e[:, 1, :])
    raise ValueError("only n = 2, 3 supported")


def _as_field(velocity, n):
    if callable(velocity):
        return velocity
    vec = np.asarray(velocity, dtype=float)
    if vec.shape != (n,):
        raise ValueError(f"constant velocity must have {n} components")
    return lambda x: np.broadcast_to(vec, x.shape)


def de_rham_flux(cx: SimplicialComplex, velocity, faces=None, degree: int = QUAD_DEGREE) -> np.ndarray:
    """Integrals of ``*v^flat`` over (n-1)-simplices in their sorted orientation."""
    n = cx.n
    if cx.embedding_dim != n:
        raise ValueError("flux discretization needs a flat embedding")
    fn = _as_field(velocity, n)
    idx = np.arange(cx.num_simplices(n - 1)) if faces is None else np.asarray(faces)
    pts = cx.vertices[cx.simplices[n - 1][idx]]
    normals = _face_normals(pts)
    mean_v = integrate(fn, pts, np.ones(len(idx)), degree)
    return np.einsum("mk,mk->m", mean_v, normals)


def discretize_boundary_flux(cx: SimplicialComplex, velocity=None, face_values=None,
                             degree: int = QUAD_DEGREE) -> np.ndarray:
    """Boundary cochain ``psi gamma`` on ``cx.boundary_faces()`` (in that order).

    Either a velocity (callable or constant vector) is integrated over each
    boundary face, or explicit ``face_values`` ``{face_index: value}`` are
    given (missing boundary faces are 0).
    """
    bfaces = cx.boundary_faces()
    if (velocity is None) == (face_values is None):
        raise ValueError("give exactly one of velocity or face_values")
    if velocity is not None:
        return de_rham_flux(cx, velocity, bfaces, degree)
    out = np.zeros(len(bfaces))
    pos = {int(f): i for i, f in enumerate(bfaces)}
    for face, value in dict(face_values).items():
        if int(face) not in pos:
            raise ValueError(f"face {face} is not a boundary face")
        out[pos[int(face)]] = value
    return out


def discretize_source(cx: SimplicialComplex, measures: DualMeasures, phi,
                      degree: int = QUAD_DEGREE) -> np.ndarray:
    """Primal n-cochain of the cell integrals of ``phi`` (callable, scalar, or None)."""
    n = cx.n
    m = cx.num_simplices(n)
    if phi is None:
        return np.zeros(m)
    if not callable(phi):
        return float(phi) * measures.cell_volume.copy()
    pts = cx.vertices[cx.simplices[n]]
    # positively oriented cells: the orientation sign is +1 for the mesh orientation
    return integrate(phi, pts, measures.cell_volume, degree)


def outward_sign(cx: SimplicialComplex) -> np.ndarray:
    """Incidence sign of each boundary face in its single coface."""
    d = cx.exterior_derivative_matrix(cx.n - 1).tocsc()
    b = cx.boundary_faces()
    cof = cx.face_cofaces[b, 0]
    return np.asarray(d[cof, b]).ravel()


@dataclass(eq=False)
class DarcyProblem:
    complex: SimplicialComplex
    measures: DualMeasures
    mu: float
    kappa: np.ndarray
    source: np.ndarray
    boundary_flux: np.ndarray
    pin: tuple = (0, 0.0)
    consistency_tol: float = 1e-10

    def __post_init__(self):
        cx = self.complex
        n = cx.n
        ncell = cx.num_simplices(n)
        self.kappa = np.broadcast_to(np.asarray(self.kappa, dtype=float), (ncell,)).copy()
        self.source = np.asarray(self.source, dtype=float)
        self.boundary_flux = np.asarray(self.boundary_flux, dtype=float)
        if not self.mu > 0:
            raise ValueError("viscosity must be positive")
        if np.any(~(self.kappa > 0)):
            raise ValueError("permeability must be positive")
        if self.source.shape != (ncell,):
            raise ValueError("source needs one value per n-simplex")
        if self.boundary_flux.shape != (len(cx.boundary_faces()),):
            raise ValueError("boundary_flux needs one value per boundary face")
        cell, _ = self.pin
        if not 0 <= int(cell) < ncell:
            raise ValueError(f"pinned cell {cell} out of range")
        self.pin = (int(cell), float(self.pin[1]))
        if cx.cell_components() != 1:
            raise ValueError("mesh must have a single connected component")
        net = self.source.sum() - (outward_sign(cx) * self.boundary_flux).sum()
        scale = np.abs(self.source).sum() + np.abs(self.boundary_flux).sum()
        if abs(net) > self.consistency_tol * max(scale, 1e-300):
            raise ConsistencyError(
                f"sum of source ({self.source.sum():.6e}) differs from net outward "
                f"boundary flux by {net:.3e}"
            )

    @classmethod
    def from_fields(cls, cx, measures, *, velocity, phi=None, kappa=1.0, mu=1.0,
                    pin=(0, 0.0), degree: int = QUAD_DEGREE, **kw):
        """Discretize the boundary flux from ``velocity`` and the source from ``phi``."""
        return cls(
            cx, measures, mu, kappa,
            discretize_source(cx, measures, phi, degree),
            discretize_boundary_flux(cx, velocity, degree=degree),
            pin, **kw,
        )


@dataclass
class DarcySolution:
    flux: np.ndarray
    pressure: np.ndarray
    stats: SolveStats = field(default=None, repr=False)


def assemble_saddle_system(problem: DarcyProblem) -> SaddleSystem:
    """Full block system over all faces and cells, before boundary elimination."""
    cx = problem.complex
    n = cx.n
    M = hodge_matrix(problem.measures, n - 1).diag
    kw = weighted_permeability(problem.measures, problem.kappa)
    A = -problem.mu * M / kw
    B = cx.exterior_derivative_matrix(n - 1).astype(float)
    return SaddleSystem(A, B, np.zeros(len(A)), problem.source.copy())


@dataclass
class Recovery:
    """Bookkeeping to rebuild full flux/pressure vectors after elimination."""

    num_faces: int
    num_cells: int
    free_faces: np.ndarray
    known_faces: np.ndarray
    known_values: np.ndarray
    free_cells: np.ndarray
    pin: tuple

    def expand(self, f_free, p_free):
        f = np.zeros(self.num_faces)
        f[self.known_faces] = self.known_values
        f[self.free_faces] = f_free
        p = np.zeros(self.num_cells)
        p[self.free_cells] = p_free
        p[self.pin[0]] = self.pin[1]
        return f, p


def eliminate_knowns(system: SaddleSystem, known_faces, known_values, pin):
    """Move known fluxes and the pinned pressure to the right-hand side.

    Their columns (times the known values) are subtracted from the rhs and
    the matching rows and columns are dropped, so the reduced matrix keeps
    the ``[A B^T; B 0]`` form.
    """
    nc, nf = system.B.shape
    known_faces = np.asarray(known_faces, dtype=np.int64)
    known_values = np.asarray(known_values, dtype=float)
    if known_faces.shape != known_values.shape:
        raise ValueError("known faces and values differ in length")
    if len(np.unique(known_faces)) != len(known_faces):
        raise ValueError("duplicate known flux indices")
    if len(known_faces) and (known_faces.min() < 0 or known_faces.max() >= nf):
        raise ValueError("known flux index out of range")
    cell, value = int(pin[0]), float(pin[1])
    if not 0 <= cell < nc:
        raise ValueError("pinned cell out of range")

    free_f = np.setdiff1d(np.arange(nf), known_faces)
    free_c = np.setdiff1d(np.arange(nc), [cell])
    Bc = system.B.tocsc()
    rhs_bottom = system.rhs_bottom - Bc[:, known_faces] @ known_values
    rhs_top = system.rhs_top - value * system.B.getrow(cell).toarray().ravel()
    B_red = system.B[free_c][:, free_f]
    reduced = SaddleSystem(
        system.A_diag[free_f], B_red, rhs_top[free_f], rhs_bottom[free_c]
    )
    return reduced, Recovery(nf, nc, free_f, known_faces, known_values, free_c, (cell, value))


def solve_saddle(system: SaddleSystem, solver: str = "auto", rel_tol: float = 1e-12,
                 max_iter: int | None = None):
    if solver == "auto":
        if np.all(system.A_diag < 0):
            solver = "schur"
        else:
            solver = "direct" if system.dim <= DENSE_LIMIT else "sparse"
    if solver == "sparse":
        return sparse_direct_solve(system)
    if solver == "schur":
        return schur_solve(system, rel_tol=rel_tol, max_iter=max_iter)
    if solver == "direct":
        return direct_solve(system)
    raise ValueError(f"unknown solver {solver!r}")


def solve_darcy(problem: DarcyProblem, solver: str = "auto", rel_tol: float = 1e-12,
                max_iter: int | None = None) -> DarcySolution:
    """Solve for flux and pressure.

    ``solver="auto"`` uses the Schur complement unless some dual edge has
    zero length (then ``A`` is singular and the dense direct path is used).
    """
    full = assemble_saddle_system(problem)
    reduced, rec = eliminate_knowns(
        full, problem.complex.boundary_faces(), problem.boundary_flux, problem.pin
    )
    f, p, stats = solve_saddle(reduced, solver, rel_tol, max_iter)
    flux, pressure = rec.expand(f, p)
    return DarcySolution(flux, pressure, stats)


def mass_balance_residual(solution: DarcySolution, problem: DarcyProblem):
    """Per-cell ``D_{n-1} f - phi omega`` and its max norm."""
    d = problem.complex.exterior_derivative_matrix(problem.complex.n - 1)
    res = d @ solution.flux - problem.source
    return res, float(np.max(np.abs(res))) if len(res) else 0.0


__all__ = [
    "ConsistencyError", "DarcyProblem", "DarcySolution", "DENSE_LIMIT", "Recovery",
    "assemble_saddle_system", "de_rham_flux", "discretize_boundary_flux",
    "discretize_source", "eliminate_knowns", "mass_balance_residual", "outward_sign",
    "solve_darcy", "solve_saddle",
]
