"""Saddle-point solvers for ``[A B^T; B 0]`` systems with diagonal ``A``.

Sparse storage is scipy's CSR format.  The Schur path forms
``S = B A^{-1} B^T`` explicitly and runs conjugate gradients on ``-S``.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

log = logging.getLogger(__name__)

DENSE_LIMIT = 4000


class SolverError(RuntimeError):
    pass


class ConvergenceError(SolverError):
    pass


class SingularSystemError(SolverError):
    pass


@dataclass
class SaddleSystem:
    A_diag: np.ndarray
    B: sp.csr_matrix
    rhs_top: np.ndarray
    rhs_bottom: np.ndarray

    def __post_init__(self):
        self.A_diag = np.asarray(self.A_diag, dtype=float)
        self.B = sp.csr_matrix(self.B, dtype=float)
        self.rhs_top = np.asarray(self.rhs_top, dtype=float)
        self.rhs_bottom = np.asarray(self.rhs_bottom, dtype=float)
        m, nf = self.B.shape
        if self.A_diag.shape != (nf,) or self.rhs_top.shape != (nf,):
            raise ValueError("A_diag/rhs_top must match the columns of B")
        if self.rhs_bottom.shape != (m,):
            raise ValueError("rhs_bottom must match the rows of B")

    @property
    def shape(self):
        return self.B.shape

    @property
    def dim(self) -> int:
        return sum(self.B.shape)

    def rhs(self) -> np.ndarray:
        return np.concatenate([self.rhs_top, self.rhs_bottom])

    def residual(self, f, p) -> np.ndarray:
        top = self.A_diag * f + self.B.T @ p - self.rhs_top
        bottom = self.B @ f - self.rhs_bottom
        return np.concatenate([top, bottom])

    def to_dense(self) -> np.ndarray:
        m, nf = self.B.shape
        Bd = self.B.toarray()
        K = np.zeros((nf + m, nf + m))
        K[:nf, :nf] = np.diag(self.A_diag)
        K[:nf, nf:] = Bd.T
        K[nf:, :nf] = Bd
        return K


@dataclass
class SolveStats:
    method: str
    iterations: int = 0
    residual: float = 0.0
    history: list = field(default_factory=list, repr=False)


def conjugate_gradient(matvec, b, x0=None, *, atol, max_iter, precond=None):
    """Plain (optionally Jacobi-preconditioned) conjugate gradients for SPD systems.

    Returns ``(x, iterations, residual_history)``.
    """
    x = np.zeros_like(b) if x0 is None else np.array(x0, dtype=float)
    r = b - matvec(x)
    z = r if precond is None else precond * r
    d = z.copy()
    rz = r @ z
    history = [float(np.linalg.norm(r))]
    for it in range(1, max_iter + 1):
        if history[-1] <= atol:
            return x, it - 1, history
        q = matvec(d)
        dq = d @ q
        if dq <= 0:
            raise SolverError("CG breakdown: operator is not positive definite")
        alpha = rz / dq
        x += alpha * d
        r -= alpha * q
        z = r if precond is None else precond * r
        rz_new = r @ z
        d = z + (rz_new / rz) * d
        rz = rz_new
        history.append(float(np.linalg.norm(r)))
    if history[-1] <= atol:
        return x, max_iter, history
    raise ConvergenceError(
        f"CG did not converge in {max_iter} iterations (residual {history[-1]:.3e}, target {atol:.3e})"
    )


def schur_complement(sys: SaddleSystem) -> sp.csr_matrix:
    inv = sp.diags(1.0 / sys.A_diag)
    S = (sys.B @ inv @ sys.B.T).tocsr()
    S.sort_indices()
    return S


def _check_pressure_nullspace(S: sp.csr_matrix):
    if S.shape[0] == 0:
        return
    ncomp, labels = connected_components(S, directed=False)
    scale = abs(S).max()
    for c in range(ncomp):
        ind = (labels == c).astype(float)
        if np.max(np.abs(S @ ind)) <= 1e-12 * scale:
            raise SingularSystemError(
                "pressure nullspace: a group of cells has no pinned pressure"
            )


def schur_solve(sys: SaddleSystem, rel_tol: float = 1e-12, max_iter: int | None = None,
                jacobi: bool = False):
    """Solve the saddle system by the Schur complement and CG.

    Returns ``(f, p, stats)``.  The stopping test is on the residual of the
    full block system relative to its right-hand side.
    """
    if np.any(sys.A_diag == 0):
        raise SingularSystemError("A has zero diagonal entries; Schur complement undefined")
    S = schur_complement(sys)
    _check_pressure_nullspace(S)
    inv_a = 1.0 / sys.A_diag
    # -S p = rhs_bottom - B A^{-1} rhs_top
    b = sys.rhs_bottom - sys.B @ (inv_a * sys.rhs_top)
    rhs_norm = np.linalg.norm(sys.rhs())
    m = S.shape[0]
    if max_iter is None:
        max_iter = 10 * max(sys.dim, 1)
    negS = (-S).tocsr()
    precond = None
    if jacobi:
        dg = negS.diagonal()
        precond = 1.0 / dg
    if rhs_norm == 0:
        p, iters, hist = np.zeros(m), 0, [0.0]
    else:
        p, iters, hist = conjugate_gradient(
            lambda x: negS @ x, b, atol=rel_tol * rhs_norm, max_iter=max_iter,
            precond=precond,
        )
    f = inv_a * (sys.rhs_top - sys.B.T @ p)
    res = np.linalg.norm(sys.residual(f, p))
    log.debug("schur_solve: %d unknowns, %d CG iterations, residual %.3e", m, iters, res)
    return f, p, SolveStats("schur", iters, float(res), hist)


def direct_solve(sys: SaddleSystem, dense_limit: int = DENSE_LIMIT):
    """Dense LU (partial pivoting) solve of the full block system."""
    if sys.dim > dense_limit:
        raise SolverError(f"system dimension {sys.dim} exceeds dense limit {dense_limit}")
    nf = sys.B.shape[1]
    rhs = sys.rhs()
    if sys.dim == 0:
        return np.zeros(0), np.zeros(0), SolveStats("direct")
    K = sys.to_dense()
    with warnings.catch_warnings():
        # singularity is judged from the pivots below
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(K, check_finite=True)
    u = np.abs(np.diag(lu))
    if u.min() <= 1e-13 * max(u.max(), 1.0) * np.sqrt(sys.dim):
        raise SingularSystemError(
            "singular saddle matrix (pressure nullspace or unconstrained flux)"
        )
    x = scipy.linalg.lu_solve((lu, piv), rhs)
    f, p = x[:nf], x[nf:]
    res = np.linalg.norm(sys.residual(f, p))
    return f, p, SolveStats("direct", 0, float(res))


def sparse_direct_solve(sys: SaddleSystem):
    """Sparse LU solve of the full block system (no size limit)."""
    from scipy.sparse.linalg import MatrixRankWarning, spsolve

    nf = sys.B.shape[1]
    K = sp.bmat([[sp.diags(sys.A_diag), sys.B.T], [sys.B, None]], format="csc")
    with warnings.catch_warnings():
        warnings.simplefilter("error", MatrixRankWarning)
        try:
            x = spsolve(K, sys.rhs())
        except MatrixRankWarning:
            raise SingularSystemError("singular saddle matrix") from None
    f, p = x[:nf], x[nf:]
    res = np.linalg.norm(sys.residual(f, p))
    return f, p, SolveStats("sparse", 0, float(res))
