"""Named analytic cases and permeability layouts used by the command line."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .complex import SimplicialComplex


@dataclass(frozen=True)
class AnalyticCase:
    """Velocity, source and exact pressure for uniform ``kappa`` and ``mu``.

    The callables take ``(m, n)`` point arrays plus ``kappa`` and ``mu``.
    """

    name: str
    velocity: Callable
    source: Callable | None
    pressure: Callable


def _constant_x(n):
    def velocity(x, kappa=1.0, mu=1.0):
        v = np.zeros_like(x)
        v[:, 0] = 1.0
        return v

    def pressure(x, kappa=1.0, mu=1.0):
        return -(mu / kappa) * x[:, 0]

    return AnalyticCase("constant-x", velocity, None, pressure)


def _coscos(n):
    if n != 2:
        raise ValueError("the coscos case is two-dimensional")
    pi = np.pi

    def pressure(x, kappa=1.0, mu=1.0):
        return np.cos(pi * x[:, 0]) * np.cos(pi * x[:, 1])

    def velocity(x, kappa=1.0, mu=1.0):
        s = kappa / mu * pi
        return np.stack([s * np.sin(pi * x[:, 0]) * np.cos(pi * x[:, 1]),
                         s * np.cos(pi * x[:, 0]) * np.sin(pi * x[:, 1])], axis=1)

    def source(x, kappa=1.0, mu=1.0):
        return 2 * pi**2 * kappa / mu * pressure(x)

    return AnalyticCase("coscos", velocity, source, pressure)


CASES = {"constant-x": _constant_x, "coscos": _coscos}


def get_case(name: str, n: int) -> AnalyticCase:
    try:
        return CASES[name](n)
    except KeyError:
        raise ValueError(f"unknown case {name!r}; choose from {sorted(CASES)}") from None


def bind(fn, kappa, mu):
    """Fix the material parameters of a case callable."""
    if fn is None:
        return None
    return lambda x: fn(x, kappa, mu)


def cell_centroids(cx: SimplicialComplex) -> np.ndarray:
    return cx.vertices[cx.simplices[cx.n]].mean(axis=1)


def kappa_split(cx: SimplicialComplex, axis: int, position: float, left: float, right: float):
    """Two-valued permeability, ``left`` below ``position`` along ``axis``."""
    c = cell_centroids(cx)[:, axis]
    return np.where(c < position, float(left), float(right))


def kappa_layers(cx: SimplicialComplex, values, axis: int = 1):
    """Equal-thickness layers stacked along ``axis`` over the mesh extent."""
    values = np.asarray(values, dtype=float)
    lo = cx.vertices[:, axis].min()
    hi = cx.vertices[:, axis].max()
    c = cell_centroids(cx)[:, axis]
    idx = np.floor((c - lo) / (hi - lo) * len(values)).astype(int)
    return values[np.clip(idx, 0, len(values) - 1)]


def layer_index(points, lo, hi, count, axis: int = 1):
    idx = np.floor((np.asarray(points)[:, axis] - lo) / (hi - lo) * count).astype(int)
    return np.clip(idx, 0, count - 1)


def interface_faces(cx: SimplicialComplex, kappa) -> np.ndarray:
    """Interior (n-1)-simplices whose two cofaces carry different permeability."""
    kappa = np.asarray(kappa, dtype=float)
    inner = cx.interior_faces()
    cof = cx.face_cofaces[inner]
    return inner[kappa[cof[:, 0]] != kappa[cof[:, 1]]]
