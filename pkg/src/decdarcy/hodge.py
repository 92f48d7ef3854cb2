"""Diagonal discrete Hodge stars, including the permeability-weighted one."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import DualMeasures


class DegenerateHodgeError(ZeroDivisionError):
    """A Hodge entry that must be inverted is zero (cocircular/degenerate dual)."""

    def __init__(self, message, indices=()):
        super().__init__(message)
        self.indices = list(indices)


class InterfaceError(ValueError):
    """A face where permeability jumps is not well-centered on both sides."""

    def __init__(self, message, indices=()):
        super().__init__(message)
        self.indices = list(indices)


@dataclass(frozen=True)
class DiagonalOperator:
    degree: int
    direction: str  # "primal->dual" or "dual->primal"
    diag: np.ndarray

    def __matmul__(self, x):
        return self.diag * np.asarray(x)

    def toarray(self) -> np.ndarray:
        return np.diag(self.diag)


def hodge_matrix(measures: DualMeasures, k: int) -> DiagonalOperator:
    """Diagonal of ``M_k``: dual volume over primal volume of each k-simplex."""
    if not 0 <= k <= measures.n:
        raise ValueError(f"degree {k} out of range")
    diag = measures.dual_volume[k] / measures.primal_volume[k]
    return DiagonalOperator(k, "primal->dual", diag)


def inverse_hodge_with_sign(op: DiagonalOperator, n: int) -> DiagonalOperator:
    """``(-1)**(k(n-k))`` times the inverse of a primal Hodge star."""
    k = op.degree
    zero = np.flatnonzero(op.diag == 0)
    if len(zero):
        raise DegenerateHodgeError(
            f"cannot invert Hodge star: zero entries at {k}-simplices {zero[:10].tolist()}",
            zero,
        )
    sign = (-1) ** (k * (n - k))
    return DiagonalOperator(k, "dual->primal", sign / op.diag)


def weighted_permeability(measures: DualMeasures, kappa, rel_tol: float = 1e-10) -> np.ndarray:
    """Per-face permeability: dual-edge weighted average of the two cofaces.

    For a face between cells with ``kappa_+ != kappa_-`` the weights are the
    portions of the dual edge lying in each cell, which must both be
    positive.  Where the permeability does not jump (and on boundary faces)
    the cell value is used directly.
    """
    cx = measures.complex
    kappa = np.asarray(kappa, dtype=float)
    if kappa.shape != (cx.num_simplices(cx.n),):
        raise ValueError("kappa needs one value per n-simplex")
    if np.any(~(kappa > 0)):
        raise ValueError("permeability must be positive")
    cof = cx.face_cofaces
    k0 = kappa[cof[:, 0]]
    k1 = np.where(cof[:, 1] >= 0, kappa[cof[:, 1]], k0)
    out = k0.copy()
    jump = np.flatnonzero(k0 != k1)
    if len(jump):
        portions = measures.side_portion[jump]
        tol = rel_tol * measures.longest_edge[cx.n - 1][jump]
        bad = jump[np.any(portions <= tol[:, None], axis=1)]
        if len(bad):
            raise InterfaceError(
                f"permeability interface faces {bad[:10].tolist()} are not well-centered",
                bad,
            )
        total = portions.sum(axis=1)
        out[jump] = (k0[jump] * portions[:, 0] + k1[jump] * portions[:, 1]) / total
    return out


def hetero_hodge_inverse(measures: DualMeasures, kappa) -> DiagonalOperator:
    """Diagonal of ``(M^kappa_{n-1})^{-1}``: ``kappa_w |s| / |*s|`` per face."""
    n = measures.n
    kw = weighted_permeability(measures, kappa)
    dual = measures.dual_volume[n - 1]
    zero = np.flatnonzero(dual == 0)
    if len(zero):
        raise DegenerateHodgeError(
            f"zero-length dual edges at faces {zero[:10].tolist()}", zero
        )
    return DiagonalOperator(n - 1, "dual->primal", kw * measures.primal_volume[n - 1] / dual)
