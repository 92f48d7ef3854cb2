"""Verification runs: patch tests, the circumcenter/barycenter comparison and convergence."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .complex import SimplicialComplex, build_complex
from .darcy import DarcyProblem, de_rham_flux, mass_balance_residual, solve_darcy
from .geometry import dual_measures
from .meshio import refine_4to1
from .whitney import flux_error_norm, pressure_error_norm


@dataclass
class PatchReport:
    pressure_error: float
    flux_error: float
    mass_balance: float
    seconds: float
    method: str
    solution: object = field(default=None, repr=False)

    def passed(self, tol: float) -> bool:
        return self.pressure_error < tol and self.flux_error < tol


def patch_test(cx: SimplicialComplex, velocity, *, kappa: float = 1.0, mu: float = 1.0,
               pin=(0, 0.0), solver: str = "auto", rel_tol: float = 1e-12,
               center: str = "circumcenter") -> PatchReport:
    """Solve with constant boundary velocity and no source; compare to the affine solution.

    The pressure error is the largest deviation from ``-(mu/kappa) v.x``
    (shifted to agree at the pinned cell) relative to the largest exact
    value; the flux error is the largest interior-face deviation relative
    to the largest exact face flux.
    """
    t0 = time.perf_counter()
    v = np.asarray(velocity, dtype=float)
    measures = dual_measures(cx, center=center)
    problem = DarcyProblem.from_fields(cx, measures, velocity=v, kappa=kappa, mu=mu, pin=pin)
    sol = solve_darcy(problem, solver=solver, rel_tol=rel_tol)
    seconds = time.perf_counter() - t0

    exact_p = -(mu / kappa) * measures.cell_center @ v
    exact_p += problem.pin[1] - exact_p[problem.pin[0]]
    p_scale = np.abs(exact_p).max()
    p_err = np.abs(sol.pressure - exact_p).max() / (p_scale if p_scale > 0 else 1.0)

    exact_f = de_rham_flux(cx, v)
    inner = cx.interior_faces()
    f_scale = np.abs(exact_f).max()
    f_err = (np.abs(sol.flux[inner] - exact_f[inner]).max() if len(inner) else 0.0) / (
        f_scale if f_scale > 0 else 1.0)
    _, mb = mass_balance_residual(sol, problem)
    return PatchReport(float(p_err), float(f_err), mb, seconds, sol.stats.method, sol)


@dataclass
class ConvergenceResult:
    h: np.ndarray
    flux_error: np.ndarray
    pressure_error: np.ndarray
    triangles: list
    seconds: float
    flux_slope: float
    pressure_slope: float

    @property
    def monotone(self) -> bool:
        return bool(np.all(np.diff(self.flux_error) < 0) and np.all(np.diff(self.pressure_error) < 0))


def loglog_slope(h, err) -> float:
    """Least-squares slope of ``log(err)`` against ``log(h)``."""
    return float(np.polyfit(np.log(h), np.log(err), 1)[0])


def convergence_study(cx: SimplicialComplex, case, levels: int = 4, *, kappa: float = 1.0,
                      mu: float = 1.0, solver: str = "auto", rel_tol: float = 1e-12,
                      log=None) -> ConvergenceResult:
    """Solve ``case`` on ``cx`` and ``levels - 1`` successive 4:1 refinements."""
    if cx.n != 2:
        raise ValueError("convergence studies are two-dimensional")
    vel = lambda x: case.velocity(x, kappa, mu)
    src = None if case.source is None else (lambda x: case.source(x, kappa, mu))
    pre = lambda x: case.pressure(x, kappa, mu)
    t0 = time.perf_counter()
    hs, fe, pe, tris = [], [], [], []
    for level in range(levels):
        if level:
            cx = build_complex(*refine_4to1(cx))
        m = dual_measures(cx)
        problem = DarcyProblem.from_fields(cx, m, velocity=vel, phi=src, kappa=kappa, mu=mu)
        sol = solve_darcy(problem, solver=solver, rel_tol=rel_tol)
        e = cx.vertices[cx.simplices[1]]
        hs.append(float(np.linalg.norm(e[:, 1] - e[:, 0], axis=1).max()))
        fe.append(flux_error_norm(cx, m, sol.flux, vel))
        pe.append(pressure_error_norm(m, sol.pressure, pre))
        tris.append(cx.num_simplices(2))
        if log:
            log(f"level {level}: {tris[-1]} triangles, h={hs[-1]:.4e}, "
                f"flux={fe[-1]:.4e}, pressure={pe[-1]:.4e} ({sol.stats.method})")
    hs, fe, pe = map(np.asarray, (hs, fe, pe))
    return ConvergenceResult(hs, fe, pe, tris, time.perf_counter() - t0,
                             loglog_slope(hs, fe), loglog_slope(hs, pe))
