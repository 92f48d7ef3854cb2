"""Oriented simplicial complexes, chains/cochains and their incidence matrices.

Simplices of every dimension are stored as vertex tuples sorted ascending,
and each list of k-simplices is kept in dictionary order.  Simplices of
dimension k < n are oriented by their sorted tuple.  The n-simplices carry
an extra sign (``top_orientation``) that relates the sorted tuple to the
consistent orientation of the mesh.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import factorial

import numpy as np
import scipy.sparse as sp


class ComplexError(ValueError):
    """Raised for inputs that do not describe an oriented manifold complex."""


def _permutation_parity(rows: np.ndarray) -> np.ndarray:
    """Sign of the permutation that sorts each row (+1 even, -1 odd)."""
    rows = np.asarray(rows)
    sign = np.ones(len(rows), dtype=np.int64)
    m = rows.shape[1]
    for i in range(m):
        for j in range(i + 1, m):
            sign[rows[:, i] > rows[:, j]] *= -1
    return sign


def _encode(rows: np.ndarray, base: int) -> np.ndarray:
    """Injective integer key for rows of vertex indices (order preserving)."""
    keys = np.zeros(len(rows), dtype=np.int64)
    for col in range(rows.shape[1]):
        keys = keys * base + rows[:, col]
    return keys


class SimplicialComplex:
    """An oriented manifold simplicial complex of dimension ``n`` in R^N.

    Use :func:`build_complex` to construct one from vertices and top
    simplices.  Instances are treated as immutable.
    """

    def __init__(self, vertices, simplices, top_orientation):
        self.vertices = np.asarray(vertices, dtype=float)
        self.vertices.setflags(write=False)
        self.simplices = [np.asarray(s, dtype=np.int64) for s in simplices]
        for s in self.simplices:
            s.setflags(write=False)
        self.top_orientation = np.asarray(top_orientation, dtype=np.int64)
        self.top_orientation.setflags(write=False)
        self._keys = [_encode(s, len(self.vertices)) for s in self.simplices]

    @property
    def n(self) -> int:
        return len(self.simplices) - 1

    @property
    def embedding_dim(self) -> int:
        return self.vertices.shape[1]

    def num_simplices(self, k: int) -> int:
        return len(self.simplices[k])

    def __repr__(self):
        counts = ", ".join(str(len(s)) for s in self.simplices)
        return f"SimplicialComplex(n={self.n}, N={self.embedding_dim}, counts=[{counts}])"

    def index(self, k: int, rows) -> np.ndarray:
        """Indices of the k-simplices given as (unsorted) vertex tuples."""
        rows = np.sort(np.atleast_2d(np.asarray(rows, dtype=np.int64)), axis=1)
        if rows.shape[1] != k + 1:
            raise ComplexError(f"expected {k + 1} vertices per {k}-simplex")
        keys = _encode(rows, len(self.vertices))
        pos = np.searchsorted(self._keys[k], keys)
        pos = np.minimum(pos, len(self._keys[k]) - 1)
        if np.any(self._keys[k][pos] != keys):
            raise KeyError("simplex not in complex")
        return pos

    def _check_k(self, k: int, lo: int, hi: int):
        if not lo <= k <= hi:
            raise ValueError(f"dimension k={k} out of range [{lo}, {hi}]")

    def boundary_matrix(self, k: int) -> sp.csr_matrix:
        """Integer matrix of the boundary map from k-chains to (k-1)-chains.

        The column of ``[v0, ..., vk]`` holds ``(-1)**i`` in the row of the
        face that omits ``v_i``.  Columns of n-simplices are multiplied by
        ``top_orientation``.
        """
        self._check_k(k, 1, self.n)
        return self._boundary[k - 1]

    def exterior_derivative_matrix(self, k: int) -> sp.csr_matrix:
        """Matrix ``D_k`` of the discrete exterior derivative on primal k-cochains."""
        self._check_k(k, 0, self.n - 1)
        return self._derivative[k]

    def dual_derivative_matrix_d0(self) -> sp.csr_matrix:
        """Matrix of ``d*_0`` on dual 0-cochains: ``(-1)**n D_{n-1}^T``."""
        d = self.exterior_derivative_matrix(self.n - 1).T.tocsr()
        return d if self.n % 2 == 0 else (-d).tocsr()

    @cached_property
    def _boundary(self):
        out = []
        nv = len(self.vertices)
        for k in range(1, self.n + 1):
            simp = self.simplices[k]
            m = len(simp)
            rows, cols, vals = [], [], []
            for i in range(k + 1):
                faces = np.delete(simp, i, axis=1)
                rows.append(np.searchsorted(self._keys[k - 1], _encode(faces, nv)))
                cols.append(np.arange(m))
                vals.append(np.full(m, (-1) ** i, dtype=np.int64))
            vals = np.concatenate(vals)
            cols = np.concatenate(cols)
            if k == self.n:
                vals = vals * self.top_orientation[cols]
            mat = sp.csr_matrix(
                (vals, (np.concatenate(rows), cols)),
                shape=(self.num_simplices(k - 1), m),
                dtype=np.int64,
            )
            mat.sort_indices()
            out.append(mat)
        return out

    @cached_property
    def _derivative(self):
        out = []
        for b in self._boundary:
            d = b.T.tocsr()
            d.sort_indices()
            out.append(d)
        return out

    @cached_property
    def face_cofaces(self) -> np.ndarray:
        """``(N_{n-1}, 2)`` array of the n-simplices containing each (n-1)-simplex.

        Cofaces are listed in increasing index order; boundary faces have
        ``-1`` in the second slot.
        """
        b = self.boundary_matrix(self.n).tocsr()
        out = np.full((b.shape[0], 2), -1, dtype=np.int64)
        counts = np.diff(b.indptr)
        for slot in range(2):
            has = counts > slot
            out[has, slot] = b.indices[b.indptr[:-1][has] + slot]
        return out

    def boundary_faces(self) -> np.ndarray:
        """Indices of the (n-1)-simplices that lie on exactly one n-simplex."""
        return np.flatnonzero(self.face_cofaces[:, 1] < 0)

    def interior_faces(self) -> np.ndarray:
        return np.flatnonzero(self.face_cofaces[:, 1] >= 0)

    def cell_faces(self) -> np.ndarray:
        """``(N_n, n+1)`` face indices of each n-simplex; column i omits vertex i."""
        top = self.simplices[self.n]
        nv = len(self.vertices)
        cols = [
            np.searchsorted(self._keys[self.n - 1], _encode(np.delete(top, i, axis=1), nv))
            for i in range(self.n + 1)
        ]
        return np.stack(cols, axis=1)

    def cell_components(self) -> int:
        """Number of connected components of n-simplices glued along faces."""
        from scipy.sparse.csgraph import connected_components

        inner = self.face_cofaces[self.interior_faces()]
        m = self.num_simplices(self.n)
        adj = sp.coo_matrix((np.ones(len(inner)), (inner[:, 0], inner[:, 1])), shape=(m, m))
        return connected_components(adj, directed=False)[0]


@dataclass
class Cochain:
    """Real values on primal k-simplices, or on dual cells of (n-k)-simplices."""

    complex: SimplicialComplex
    degree: int
    values: np.ndarray
    dual: bool = False

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        n = self.complex.n
        if not 0 <= self.degree <= n:
            raise ValueError(f"degree {self.degree} out of range for n={n}")
        k = n - self.degree if self.dual else self.degree
        expected = self.complex.num_simplices(k)
        if self.values.shape != (expected,):
            raise ValueError(f"cochain needs {expected} values, got {self.values.shape}")

    def __call__(self, chain) -> float:
        """Evaluate on a chain given as a coefficient vector (or a simplex index)."""
        if np.isscalar(chain):
            return float(self.values[int(chain)])
        return float(np.dot(self.values, np.asarray(chain, dtype=float)))

    def d(self) -> "Cochain":
        if self.dual:
            raise NotImplementedError("only d*_0 is provided for dual cochains")
        mat = self.complex.exterior_derivative_matrix(self.degree)
        return Cochain(self.complex, self.degree + 1, mat @ self.values)


def _signed_volumes(points: np.ndarray) -> np.ndarray:
    """Signed n-volumes of simplices given as ``(m, n+1, n)`` coordinates."""
    edges = points[:, 1:, :] - points[:, :1, :]
    n = edges.shape[1]
    return np.linalg.det(edges) / factorial(n)


def build_complex(vertices, top_simplices, *, orientation="auto", rel_tol: float = 1e-12):
    """Build an oriented manifold simplicial complex.

    Parameters
    ----------
    vertices : (V, N) array of coordinates.
    top_simplices : sequence of vertex tuples, all of the same dimension n.
    orientation : ``"auto"`` orients every n-simplex with positive signed
        volume (only possible when N == n).  ``"given"`` uses the vertex
        order of each input tuple as its orientation; this is required for
        N > n.
    rel_tol : a simplex is degenerate when its volume is below
        ``rel_tol * longest_edge**n``.
    """
    verts = np.asarray(vertices, dtype=float)
    if verts.ndim != 2:
        raise ComplexError("vertices must be a 2D array")
    try:
        tops = np.asarray(top_simplices, dtype=np.int64)
    except ValueError:
        raise ComplexError(
            "top simplices have mixed dimensions; every simplex must be a face "
            "of some n-simplex"
        ) from None
    if tops.ndim != 2 or tops.shape[1] < 3 or tops.shape[1] > 4:
        raise ComplexError("top simplices must be triangles or tetrahedra")
    n = tops.shape[1] - 1
    N = verts.shape[1]
    if N < n:
        raise ComplexError(f"cannot embed {n}-simplices in R^{N}")
    if tops.min() < 0 or tops.max() >= len(verts):
        raise ComplexError("vertex index out of range")
    if np.any(np.diff(np.sort(tops, axis=1), axis=1) == 0):
        raise ComplexError("repeated vertex in a simplex")

    pts = verts[tops]
    edges = pts[:, 1:, :] - pts[:, :1, :]
    gram = np.einsum("mik,mjk->mij", edges, edges)
    volume = np.sqrt(np.clip(np.linalg.det(gram), 0.0, None)) / factorial(n)
    pairs = list(combinations(range(n + 1), 2))
    longest = np.max(
        [np.linalg.norm(pts[:, i] - pts[:, j], axis=1) for i, j in pairs], axis=0
    )
    bad = np.flatnonzero(volume < rel_tol * longest**n)
    if len(bad):
        raise ComplexError(f"degenerate {n}-simplices: {bad[:10].tolist()}")

    parity = _permutation_parity(tops)
    if orientation == "auto":
        if N != n:
            raise ComplexError("orientation must be supplied ('given') when N > n")
        top_orientation = np.sign(_signed_volumes(verts[np.sort(tops, axis=1)])).astype(np.int64)
    elif orientation == "given":
        top_orientation = parity
    else:
        raise ValueError(f"unknown orientation mode {orientation!r}")

    sorted_tops = np.sort(tops, axis=1)
    simplices = [None] * (n + 1)
    simplices[n] = sorted_tops
    nv = len(verts)
    keys = _encode(sorted_tops, nv)
    order = np.argsort(keys, kind="stable")
    if np.any(np.diff(keys[order]) == 0):
        raise ComplexError("duplicate top simplex")
    simplices[n] = sorted_tops[order]
    top_orientation = top_orientation[order]
    for k in range(n - 1, -1, -1):
        faces = np.concatenate(
            [sorted_tops[:, list(c)] for c in combinations(range(n + 1), k + 1)]
        )
        simplices[k] = np.unique(faces, axis=0)
    if len(simplices[0]) != nv:
        raise ComplexError("some vertices are not used by any top simplex")

    cx = SimplicialComplex(verts, simplices, top_orientation)
    b = cx.boundary_matrix(n)
    counts = np.diff(b.tocsr().indptr)
    if np.any(counts > 2):
        raise ComplexError(
            f"non-manifold: faces {np.flatnonzero(counts > 2)[:10].tolist()} have >2 cofaces"
        )
    row_sums = np.asarray(b.sum(axis=1)).ravel()
    interior = counts == 2
    if np.any(row_sums[interior] != 0):
        bad = np.flatnonzero(interior & (row_sums != 0))
        raise ComplexError(f"inconsistent orientation across faces {bad[:10].tolist()}")
    return cx
