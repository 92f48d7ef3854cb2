"""Gauss rules on simplices via collapsed (conical product) coordinates."""

from __future__ import annotations

from functools import lru_cache
from math import ceil

import numpy as np
from scipy.special import roots_jacobi


@lru_cache(maxsize=None)
def simplex_rule(k: int, degree: int):
    """Quadrature on the reference k-simplex, exact for polynomials of ``degree``.

    Returns barycentric points ``(Q, k+1)`` and weights ``(Q,)`` summing to 1,
    so ``integral = volume * sum(w * f(points))``.
    """
    if k == 0:
        return np.ones((1, 1)), np.ones(1)
    q = max(1, ceil((degree + 1) / 2))
    axes = []
    for j in range(k):
        # weight (1 - t)^(k-1-j) absorbs the collapse Jacobian
        alpha = k - 1 - j
        x, w = roots_jacobi(q, alpha, 0)
        t = (x + 1) / 2
        w = w / w.sum()
        axes.append((t, w))
    grids = np.meshgrid(*[a[0] for a in axes], indexing="ij")
    wgrid = np.ones_like(grids[0])
    for j, (_, w) in enumerate(axes):
        shape = [1] * k
        shape[j] = -1
        wgrid = wgrid * w.reshape(shape)
    ts = [g.ravel() for g in grids]
    coords = np.zeros((len(ts[0]), k))
    remaining = np.ones(len(ts[0]))
    for j in range(k):
        coords[:, j] = ts[j] * remaining
        remaining = remaining * (1 - ts[j])
    bary = np.concatenate([1 - coords.sum(axis=1, keepdims=True), coords], axis=1)
    weights = wgrid.ravel()
    return bary, weights / weights.sum()


def integrate(fn, points: np.ndarray, volumes: np.ndarray, degree: int) -> np.ndarray:
    """Integrate ``fn`` over a batch of simplices ``(m, k+1, N)``.

    ``fn`` takes an ``(M, N)`` array of points and returns ``(M,)`` or
    ``(M, d)`` values.
    """
    m, kp1, N = points.shape
    bary, w = simplex_rule(kp1 - 1, degree)
    x = np.einsum("qi,mik->mqk", bary, points).reshape(-1, N)
    vals = np.asarray(fn(x), dtype=float)
    vals = vals.reshape((m, len(w)) + vals.shape[1:])
    return np.einsum("q,mq...->m...", w, vals) * volumes.reshape((m,) + (1,) * (vals.ndim - 2))
