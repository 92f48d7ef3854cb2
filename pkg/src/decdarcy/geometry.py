"""Circumcenters, primal volumes and signed circumcentric dual volumes."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import factorial

import numpy as np

from .complex import SimplicialComplex, _encode


class DegenerateSimplexError(ValueError):
    pass


def circumcenters(points: np.ndarray, return_barycentric: bool = False):
    """Circumcenters of a batch of k-simplices.

    ``points`` has shape ``(m, k+1, N)``.  The center is found in the affine
    hull of each simplex by solving the k x k system
    ``(E E^T) a = |e_i|^2 / 2`` with ``E`` the edge vectors from the first
    vertex.  Optionally also returns the barycentric coordinates of the
    centers, shape ``(m, k+1)``.
    """
    pts = np.asarray(points, dtype=float)
    m, kp1, N = pts.shape
    if kp1 == 1:
        centers = pts[:, 0, :].copy()
        bary = np.ones((m, 1))
        return (centers, bary) if return_barycentric else centers
    edges = pts[:, 1:, :] - pts[:, :1, :]
    gram = np.einsum("mik,mjk->mij", edges, edges)
    rhs = 0.5 * np.einsum("mik,mik->mi", edges, edges)
    try:
        a = np.linalg.solve(gram, rhs[..., None])[..., 0]
    except np.linalg.LinAlgError:
        raise DegenerateSimplexError("singular circumcenter system") from None
    scale = np.max(np.abs(gram).reshape(m, -1), axis=1)
    det = np.linalg.det(gram)
    if np.any(det <= 1e-24 * scale ** (kp1 - 1)):
        raise DegenerateSimplexError("degenerate simplex in circumcenter computation")
    centers = pts[:, 0, :] + np.einsum("mi,mik->mk", a, edges)
    if not return_barycentric:
        return centers
    bary = np.concatenate([1.0 - a.sum(axis=1, keepdims=True), a], axis=1)
    return centers, bary


def circumcenter(simplex_points) -> np.ndarray:
    """Circumcenter of one simplex given as a ``(k+1, N)`` array of vertices."""
    pts = np.asarray(simplex_points, dtype=float)
    return circumcenters(pts[None])[0]


def unsigned_volumes(points: np.ndarray) -> np.ndarray:
    """k-volumes of a batch of simplices ``(m, k+1, N)``; 0-simplices have volume 1."""
    pts = np.asarray(points, dtype=float)
    k = pts.shape[1] - 1
    if k == 0:
        return np.ones(pts.shape[0])
    edges = pts[:, 1:, :] - pts[:, :1, :]
    gram = np.einsum("mik,mjk->mij", edges, edges)
    return np.sqrt(np.clip(np.linalg.det(gram), 0.0, None)) / factorial(k)


@dataclass
class DualMeasures:
    """Metric data of a complex and its (circumcentric) dual.

    ``side_portion[i, s]`` is the signed length of the dual edge of
    (n-1)-simplex ``i`` that lies in the coface ``complex.face_cofaces[i, s]``
    (zero where that coface does not exist).
    """

    complex: SimplicialComplex
    circumcenter: list
    primal_volume: list
    dual_volume: list
    side_portion: np.ndarray
    center: str = "circumcenter"
    longest_edge: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.complex.n

    @property
    def dual_edge_length(self) -> np.ndarray:
        return self.dual_volume[self.n - 1]

    @property
    def cell_volume(self) -> np.ndarray:
        return self.primal_volume[self.n]

    @property
    def cell_center(self) -> np.ndarray:
        """Location of the dual 0-cells (pressure points)."""
        return self.circumcenter[self.n]


def _local_flags(n: int, k: int):
    """All chains S_k < S_{k+1} < ... < S_n of local vertex subsets of an n-simplex."""
    full = tuple(range(n + 1))
    chains = [[full]]
    for _ in range(n - k):
        nxt = []
        for ch in chains:
            last = ch[-1]
            for drop in last:
                nxt.append(ch + [tuple(v for v in last if v != drop)])
        chains = nxt
    return [tuple(reversed(ch)) for ch in chains]


def dual_measures(cx: SimplicialComplex, center: str = "circumcenter") -> DualMeasures:
    """Compute primal volumes and signed dual volumes of ``cx``.

    Each dual cell of a k-simplex is assembled from elementary simplices
    spanned by ``c(s_k), c(s_{k+1}), ..., c(s_n)`` over all chains of faces
    ``s_k < ... < s_n``.  An elementary piece is counted negatively for each
    step where ``c(s_{j+1})`` lies on the opposite side of ``s_j`` from the
    remaining vertex of ``s_{j+1}`` (a negative barycentric coordinate).

    ``center="barycenter"`` replaces all circumcenters by barycenters; this
    is only meant as a comparison foil.
    """
    if center not in ("circumcenter", "barycenter"):
        raise ValueError(f"unknown center {center!r}")
    n = cx.n
    verts = cx.vertices
    nv = len(verts)

    centers, primal = [], []
    for k in range(n + 1):
        pts = verts[cx.simplices[k]]
        if center == "circumcenter":
            centers.append(circumcenters(pts))
        else:
            centers.append(pts.mean(axis=1))
        primal.append(unsigned_volumes(pts))

    top = cx.simplices[n]
    tpts = verts[top]
    T = len(top)
    local = {}
    for size in range(1, n + 2):
        for sub in combinations(range(n + 1), size):
            spts = tpts[:, list(sub), :]
            if center == "circumcenter":
                c, bary = circumcenters(spts, return_barycentric=True)
            else:
                c, bary = spts.mean(axis=1), np.full((T, size), 1.0 / size)
            gidx = np.searchsorted(cx._keys[size - 1], _encode(top[:, list(sub)], nv))
            local[sub] = (c, bary, gidx)

    dual = [np.zeros(cx.num_simplices(k)) for k in range(n + 1)]
    side = np.zeros((cx.num_simplices(n - 1), 2))
    cof = cx.face_cofaces
    cell_index = np.arange(T)
    for k in range(n + 1):
        if k == n:
            dual[n] = np.ones(T)
            continue
        for chain in _local_flags(n, k):
            sign = np.ones(T)
            for lo, hi in zip(chain[:-1], chain[1:]):
                (extra,) = set(hi) - set(lo)
                sign *= np.sign(local[hi][1][:, hi.index(extra)])
            pts = np.stack([local[s][0] for s in chain], axis=1)
            piece = sign * unsigned_volumes(pts)
            gidx = local[chain[0]][2]
            np.add.at(dual[k], gidx, piece)
            if k == n - 1:
                slot = np.where(cof[gidx, 0] == cell_index, 0, 1)
                side[gidx, slot] = piece

    longest = {}
    for k in range(1, n + 1):
        pts = verts[cx.simplices[k]]
        longest[k] = np.max(
            [np.linalg.norm(pts[:, i] - pts[:, j], axis=1)
             for i, j in combinations(range(k + 1), 2)],
            axis=0,
        )
    return DualMeasures(cx, centers, primal, dual, side, center, longest)


@dataclass
class MeshReport:
    ok: bool
    violating: list
    borderline: list = field(default_factory=list)
    values: dict = field(default_factory=dict)


def is_delaunay(measures: DualMeasures, rel_tol: float = 1e-10) -> MeshReport:
    """Local Delaunay test on every interior (n-1)-simplex.

    A face violates the criterion when its signed dual length is negative
    beyond ``rel_tol`` times its longest edge; near-zero duals (cocircular
    pairs) are reported as borderline but do not fail the check.
    """
    cx = measures.complex
    if cx.embedding_dim != cx.n:
        raise ValueError("Delaunay check needs a flat embedding (N == n)")
    inner = cx.interior_faces()
    dual = measures.dual_edge_length[inner]
    scale = measures.longest_edge[cx.n - 1][inner] if cx.n > 1 else np.ones(len(inner))
    tol = rel_tol * scale
    violating = inner[dual < -tol].tolist()
    borderline = inner[np.abs(dual) <= tol].tolist()
    return MeshReport(not violating, violating, borderline,
                      {"min_dual_edge": float(dual.min()) if len(dual) else np.inf})


def is_well_centered_interface(measures: DualMeasures, faces, rel_tol: float = 1e-10) -> MeshReport:
    """Check that both cofaces of each listed face contain their circumcenters.

    Both side portions of the dual edge must be strictly positive.
    """
    cx = measures.complex
    faces = np.asarray(faces, dtype=np.int64).ravel()
    cof = cx.face_cofaces
    on_boundary = faces[cof[faces, 1] < 0]
    if len(on_boundary):
        raise ValueError(f"interface faces on the boundary: {on_boundary.tolist()}")
    portions = measures.side_portion[faces]
    tol = rel_tol * measures.longest_edge[cx.n - 1][faces]
    bad_mask = np.any(portions <= tol[:, None], axis=1)
    violating = faces[bad_mask].tolist()
    return MeshReport(
        not violating,
        violating,
        values={int(f): tuple(float(x) for x in p) for f, p in zip(faces[bad_mask], portions[bad_mask])},
    )
