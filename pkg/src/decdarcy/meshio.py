"""Mesh input/output: Triangle/TetGen files, structured generators, refinement, VTK and CSV."""

from __future__ import annotations

import csv
import os
import tempfile
from itertools import permutations
from pathlib import Path

import numpy as np

from .complex import SimplicialComplex


class MeshFormatError(ValueError):
    pass


def _data_lines(path):
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if line:
                yield lineno, line.split()


def read_node_ele(node_path, ele_path):
    """Read a Triangle/TetGen ``.node``/``.ele`` pair.

    Returns ``(vertices, top_simplices, region_attrs)``; indices are
    renumbered from 0 whatever base the files use, and ``region_attrs`` is
    ``None`` when the ``.ele`` file has no attribute column.
    """
    lines = _data_lines(node_path)
    try:
        _, header = next(lines)
        nnode, dim, nattr, nmark = (int(x) for x in header[:4])
    except (StopIteration, ValueError):
        raise MeshFormatError(f"{node_path}: malformed header") from None
    ids, coords = [], []
    for lineno, tok in lines:
        if len(tok) < 1 + dim + nattr + nmark:
            raise MeshFormatError(f"{node_path}:{lineno}: expected {1 + dim + nattr + nmark} fields")
        ids.append(int(tok[0]))
        coords.append([float(x) for x in tok[1:1 + dim]])
    if len(ids) != nnode:
        raise MeshFormatError(f"{node_path}: header declares {nnode} nodes, found {len(ids)}")
    base = ids[0] if ids else 0
    if base not in (0, 1) or ids != list(range(base, base + nnode)):
        raise MeshFormatError(f"{node_path}: node indices must be contiguous from 0 or 1")

    lines = _data_lines(ele_path)
    try:
        _, header = next(lines)
        nele, per, nregion = (int(x) for x in (header + ["0"])[:3])
    except (StopIteration, ValueError):
        raise MeshFormatError(f"{ele_path}: malformed header") from None
    eids, elems, regions = [], [], []
    for lineno, tok in lines:
        if len(tok) < 1 + per + nregion:
            raise MeshFormatError(f"{ele_path}:{lineno}: expected {1 + per + nregion} fields")
        eids.append(int(tok[0]))
        elems.append([int(x) for x in tok[1:1 + per]])
        if nregion:
            regions.append(float(tok[1 + per]))
    if len(elems) != nele:
        raise MeshFormatError(f"{ele_path}: header declares {nele} elements, found {len(elems)}")
    ebase = eids[0] if eids else 0
    if ebase not in (0, 1) or eids != list(range(ebase, ebase + nele)):
        raise MeshFormatError(f"{ele_path}: element indices must be contiguous from 0 or 1")
    elems = np.asarray(elems, dtype=np.int64) - base
    if elems.size and (elems.min() < 0 or elems.max() >= nnode):
        raise MeshFormatError(f"{ele_path}: vertex index out of range (mixed indexing?)")
    region = np.asarray(regions) if nregion else None
    return np.asarray(coords, dtype=float), elems, region


def write_node_ele(stem, vertices, simplices, regions=None, base: int = 0):
    """Write ``stem.node``/``stem.ele`` with 17 significant digits."""
    stem = Path(stem)
    vertices = np.asarray(vertices, dtype=float)
    simplices = np.asarray(simplices, dtype=np.int64)
    node_lines = [f"{len(vertices)} {vertices.shape[1]} 0 0"]
    for i, v in enumerate(vertices):
        node_lines.append(" ".join([str(i + base)] + [f"{x:.17g}" for x in v]))
    nreg = 0 if regions is None else 1
    ele_lines = [f"{len(simplices)} {simplices.shape[1]} {nreg}"]
    for i, s in enumerate(simplices):
        row = [str(i + base)] + [str(int(x) + base) for x in s]
        if regions is not None:
            row.append(f"{regions[i]:.17g}")
        ele_lines.append(" ".join(row))
    _atomic_write(stem.parent / (stem.name + ".node"), "\n".join(node_lines) + "\n")
    _atomic_write(stem.parent / (stem.name + ".ele"), "\n".join(ele_lines) + "\n")


def _kuhn_tets():
    """Six tetrahedra of the unit cube as corner bit patterns, all sharing the main diagonal."""
    tets = []
    for perm in permutations(range(3)):
        corner = [0, 0, 0]
        tet = [0]
        for axis in perm:
            corner[axis] = 1
            tet.append(corner[0] + 2 * corner[1] + 4 * corner[2])
        tets.append(tet)
    return tets


def _incircle(a, b, c, d):
    """Positive when d is strictly inside the circumcircle of ccw triangle abc."""
    m = np.array([
        [a[0] - d[0], a[1] - d[1], (a[0] - d[0]) ** 2 + (a[1] - d[1]) ** 2],
        [b[0] - d[0], b[1] - d[1], (b[0] - d[0]) ** 2 + (b[1] - d[1]) ** 2],
        [c[0] - d[0], c[1] - d[1], (c[0] - d[0]) ** 2 + (c[1] - d[1]) ** 2],
    ])
    return np.linalg.det(m)


def _positive(verts, tops):
    """Reorder vertices so every simplex has positive signed volume."""
    tops = np.asarray(tops, dtype=np.int64)
    pts = verts[tops]
    neg = np.linalg.det(pts[:, 1:, :] - pts[:, :1, :]) < 0
    tops[neg, -2:] = tops[neg, -1:-3:-1]
    return tops


def _orient(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def generate_structured(lower, upper, divisions, perturb: float = 0.0, seed: int = 0):
    """Structured simplicial mesh of an axis-aligned box.

    2D: every grid square is cut into two triangles along the diagonal from
    its lower-left corner.  3D: every cube is cut into the six Kuhn
    tetrahedra.  ``perturb`` moves interior vertices by up to
    ``perturb * spacing`` (seeded); in 2D each square is then cut along
    its Delaunay diagonal.
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    div = [int(d) for d in divisions]
    n = len(div)
    if n not in (2, 3) or lower.shape != (n,) or upper.shape != (n,):
        raise ValueError("box and divisions must describe a 2D or 3D box")
    if min(div) < 1:
        raise ValueError("divisions must be >= 1")
    axes = [np.linspace(lower[i], upper[i], div[i] + 1) for i in range(n)]
    grid = np.meshgrid(*axes, indexing="ij")
    verts = np.stack([g.ravel() for g in grid], axis=1)
    shape = [d + 1 for d in div]

    def vid(*idx):
        return np.ravel_multi_index(idx, shape)

    if perturb:
        rng = np.random.default_rng(seed)
        spacing = (upper - lower) / np.asarray(div)
        inner = np.ones(len(verts), dtype=bool)
        for i in range(n):
            inner &= (verts[:, i] > lower[i]) & (verts[:, i] < upper[i])
        jitter = rng.uniform(-1.0, 1.0, size=verts.shape) * perturb * spacing
        verts[inner] += jitter[inner]

    tops = []
    if n == 2:
        for i in range(div[0]):
            for j in range(div[1]):
                a, b, c, d = vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)
                if perturb and _incircle(verts[a], verts[b], verts[c], verts[d]) > 0:
                    tops += [[a, b, d], [b, c, d]]
                else:
                    tops += [[a, b, c], [a, c, d]]
    else:
        kuhn = _kuhn_tets()
        for i in range(div[0]):
            for j in range(div[1]):
                for k in range(div[2]):
                    for tet in kuhn:
                        tops.append([vid(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1)) for c in tet])
    return verts, _positive(verts, tops)


def refine_4to1(cx: SimplicialComplex):
    """Split every triangle into four similar ones through the edge midpoints.

    Returns ``(vertices, triangles)`` with the new midpoint vertices appended
    after the original ones (vertex ``V + e`` is the midpoint of edge ``e``).
    """
    if cx.n != 2:
        raise ValueError("4-to-1 refinement is only defined for triangle meshes")
    V = cx.vertices
    edges = cx.simplices[1]
    mids = 0.5 * (V[edges[:, 0]] + V[edges[:, 1]])
    verts = np.vstack([V, mids])
    nv = len(V)
    tris = cx.simplices[2]
    faces = cx.cell_faces()  # column i is the edge opposite vertex i
    m0, m1, m2 = (nv + faces[:, i] for i in range(3))
    v0, v1, v2 = tris[:, 0], tris[:, 1], tris[:, 2]
    children = np.concatenate([
        np.stack([v0, m2, m1], axis=1),
        np.stack([m2, v1, m0], axis=1),
        np.stack([m1, m0, v2], axis=1),
        np.stack([m0, m1, m2], axis=1),
    ])
    return verts, children


def _atomic_write(path, text: str):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def _vec3(values, n):
    values = np.asarray(values, dtype=float)
    if values.shape[1] == 3:
        return values
    return np.hstack([values, np.zeros((len(values), 3 - values.shape[1]))])


def write_vtk(cx: SimplicialComplex, path, cell_data=None, point_data=None, title="decdarcy"):
    """Legacy ASCII VTK unstructured grid (triangles: type 5, tetrahedra: type 10).

    ``cell_data``/``point_data`` map names to arrays with one scalar or one
    vector per cell/vertex; 2D vectors are padded with z = 0.
    """
    n = cx.n
    V = _vec3(cx.vertices, cx.embedding_dim)
    cells = cx.simplices[n]
    # restore mesh orientation in the written connectivity
    cells = np.where(cx.top_orientation[:, None] > 0, cells, cells[:, [1, 0] + list(range(2, n + 1))])
    ctype = {2: 5, 3: 10}[n]
    out = ["# vtk DataFile Version 3.0", title, "ASCII", "DATASET UNSTRUCTURED_GRID"]
    out.append(f"POINTS {len(V)} double")
    out += [" ".join(_fmt(x) for x in p) for p in V]
    out.append(f"CELLS {len(cells)} {len(cells) * (n + 2)}")
    out += [" ".join(str(int(v)) for v in [n + 1, *c]) for c in cells]
    out.append(f"CELL_TYPES {len(cells)}")
    out += [str(ctype)] * len(cells)
    for section, data, count in (("CELL_DATA", cell_data, len(cells)), ("POINT_DATA", point_data, len(V))):
        if not data:
            continue
        out.append(f"{section} {count}")
        for name, values in data.items():
            values = np.asarray(values, dtype=float)
            if values.shape[0] != count:
                raise ValueError(f"field {name!r} has {values.shape[0]} entries, expected {count}")
            if values.ndim == 1:
                out.append(f"SCALARS {name} double 1")
                out.append("LOOKUP_TABLE default")
                out += [_fmt(x) for x in values]
            else:
                out.append(f"VECTORS {name} double")
                out += [" ".join(_fmt(x) for x in row) for row in _vec3(values, n)]
    _atomic_write(path, "\n".join(out) + "\n")


def write_cell_csv(path, centers, pressure, velocity):
    """One row per cell: index, pressure point coordinates, pressure, velocity."""
    n = centers.shape[1]
    axes = "xyz"[:n]
    header = ["cell"] + [f"c{a}" for a in axes] + ["pressure"] + [f"v{a}" for a in axes]
    rows = [[i, *map(_fmt, c), _fmt(p), *map(_fmt, v)]
            for i, (c, p, v) in enumerate(zip(centers, pressure, velocity))]
    _write_csv(path, header, rows)


def write_face_csv(path, cx: SimplicialComplex, flux):
    """One row per (n-1)-simplex: index, vertices, boundary flag, flux."""
    n = cx.n
    bnd = np.zeros(cx.num_simplices(n - 1), dtype=bool)
    bnd[cx.boundary_faces()] = True
    header = ["face"] + [f"v{i}" for i in range(n)] + ["boundary", "flux"]
    rows = [[i, *map(int, s), int(b), _fmt(f)]
            for i, (s, b, f) in enumerate(zip(cx.simplices[n - 1], bnd, flux))]
    _write_csv(path, header, rows)


def _write_csv(path, header, rows):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            w.writerows(rows)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def generate_staggered(lower, upper, divisions, axis: int = 0):
    """Triangle mesh of a rectangle built from straight and offset mesh lines.

    Lines normal to ``axis`` are placed at ``divisions[axis]`` equal steps;
    even lines carry ``divisions[other]`` equal segments and odd lines are
    shifted by half a segment.  Each strip between two lines is zipped into
    isosceles triangles, so every edge on an even line has two congruent
    neighbours, acute when the line spacing exceeds half the segment length.
    Interfaces should therefore sit on even lines.
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    if lower.shape != (2,) or upper.shape != (2,) or axis not in (0, 1):
        raise ValueError("staggered meshes are 2D; axis must be 0 or 1")
    nl, ns = int(divisions[axis]), int(divisions[1 - axis])
    if nl < 1 or ns < 1:
        raise ValueError("divisions must be >= 1")
    other = 1 - axis
    pos = np.linspace(lower[axis], upper[axis], nl + 1)
    seg = (upper[other] - lower[other]) / ns
    verts, lines = [], []
    for i, x in enumerate(pos):
        if i % 2 == 0:
            s = lower[other] + seg * np.arange(ns + 1)
        else:
            s = np.concatenate([[lower[other]], lower[other] + seg * (np.arange(ns) + 0.5),
                                [upper[other]]])
        ids = []
        for t in s:
            p = [0.0, 0.0]
            p[axis], p[other] = x, t
            ids.append(len(verts))
            verts.append(p)
        lines.append((s, ids))
    tops = []
    for (sa, ia), (sb, ib) in zip(lines[:-1], lines[1:]):
        a = b = 0
        while a < len(sa) - 1 or b < len(sb) - 1:
            if a < len(sa) - 1 and b < len(sb) - 1 and np.isclose(sa[a + 1], sb[b + 1]):
                # tie: take the diagonal that keeps the quad Delaunay
                P = np.asarray(verts)
                tri = [P[ia[a]], P[ib[b]], P[ia[a + 1]]]
                if _orient(*tri) < 0:
                    tri = tri[::-1]
                advance_a = _incircle(*tri, P[ib[b + 1]]) <= 0
            else:
                advance_a = b == len(sb) - 1 or (a < len(sa) - 1 and sa[a + 1] <= sb[b + 1])
            if advance_a:
                tops.append([ia[a], ib[b], ia[a + 1]])
                a += 1
            else:
                tops.append([ia[a], ib[b], ib[b + 1]])
                b += 1
    verts = np.asarray(verts)
    return verts, _positive(verts, tops)


def generate_hexagon(radius: float = 1.0, center=(0.0, 0.0)):
    """Regular hexagon split into six equilateral triangles around its center."""
    ang = np.pi / 3 * np.arange(6)
    ring = np.stack([np.cos(ang), np.sin(ang)], axis=1) * radius + np.asarray(center, dtype=float)
    verts = np.vstack([np.asarray(center, dtype=float)[None], ring])
    tops = np.array([[0, 1 + i, 1 + (i + 1) % 6] for i in range(6)], dtype=np.int64)
    return verts, tops


def read_boundary_flux(path, cx: SimplicialComplex) -> np.ndarray:
    """Boundary fluxes from a CSV with ``face`` and ``flux`` columns.

    The layout matches :func:`write_face_csv`, so a written face file can be
    fed back. Rows for interior faces are ignored; every boundary face must
    appear. Values are in the orientation of the face as stored in ``cx``.
    """
    bfaces = cx.boundary_faces()
    nfaces = cx.num_simplices(cx.n - 1)
    values = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(row for row in fh if not row.lstrip().startswith("#"))
        if reader.fieldnames is None or not {"face", "flux"} <= set(reader.fieldnames):
            raise MeshFormatError(f"{path}: needs 'face' and 'flux' columns")
        for lineno, row in enumerate(reader, 2):
            try:
                face, flux = int(row["face"]), float(row["flux"])
            except (TypeError, ValueError):
                raise MeshFormatError(f"{path}:{lineno}: bad face or flux value") from None
            if not 0 <= face < nfaces:
                raise MeshFormatError(f"{path}:{lineno}: face {face} out of range")
            values[face] = flux
    missing = [int(f) for f in bfaces if int(f) not in values]
    if missing:
        raise MeshFormatError(f"{path}: no flux for boundary faces {missing[:10]}")
    return np.array([values[int(f)] for f in bfaces])
