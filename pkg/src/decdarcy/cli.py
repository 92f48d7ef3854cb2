"""Command-line entry point: ``decdarcy <subcommand> [options]``.

Options may also come from a plain ``key = value`` file given with
``--config``; keys are long option names, and options on the command line
take precedence.  Exit status is 0 on success, 1 when a numerical check
fails and 2 for configuration or input errors.
"""

from __future__ import annotations

import argparse
import logging
import shlex
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import cases as _cases
from .complex import build_complex
from .darcy import (
    DarcyProblem, de_rham_flux, discretize_source, mass_balance_residual, solve_darcy,
)
from .geometry import dual_measures, is_delaunay, is_well_centered_interface
from .harness import convergence_study, patch_test
from .linalg import SolverError
from .meshio import (
    generate_hexagon, generate_staggered, generate_structured, read_node_ele, refine_4to1,
    read_boundary_flux, write_cell_csv, write_face_csv, write_node_ele, write_vtk,
)
from .whitney import pressure_error_norm, velocity_at_points

log = logging.getLogger("decdarcy")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


def _floats(text, what):
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"{what}: expected comma-separated numbers, got {text!r}") from None


def _ints(text, what):
    try:
        return [int(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"{what}: expected comma-separated integers, got {text!r}") from None


@dataclass
class RunConfig:
    """Everything a subcommand needs, resolved from flags and the config file."""

    subcommand: str
    mesh: str | None = None
    node: str | None = None
    ele: str | None = None
    perturb: float = 0.0
    seed: int = 0
    refine: int = 0
    kappa: float = 1.0
    kappa_split: tuple | None = None     # (axis, position, k_left, k_right)
    kappa_layers: list | None = None
    kappa_regions: dict | None = None
    mu: float = 1.0
    bc_velocity: list | None = None
    pressure_gradient: list | None = None
    bc_file: str | None = None
    center: str = "circumcenter"
    case: str | None = None
    pin: tuple = (0, 0.0)
    solver: str = "auto"
    tol: float = 1e-12
    max_iter: int | None = None
    out_vtk: str | None = None
    out_csv: str | None = None
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        d = vars(args)
        cfg = cls(d["subcommand"])
        for name in ("mesh", "node", "ele", "perturb", "seed", "refine", "kappa", "mu", "case",
                     "bc_file", "center", "solver", "tol", "max_iter", "out_vtk", "out_csv"):
            if name in d and d[name] is not None:
                setattr(cfg, name, d[name])
        if (cfg.node is None) != (cfg.ele is None):
            raise ConfigError("--node and --ele must be given together")
        if cfg.node is not None and cfg.mesh is not None:
            raise ConfigError("give either --mesh or --node/--ele, not both")
        if cfg.kappa <= 0 or cfg.mu <= 0:
            raise ConfigError("kappa and mu must be positive")
        if d.get("kappa_split"):
            cfg.kappa_split = _parse_split(d["kappa_split"])
        if d.get("kappa_layers"):
            cfg.kappa_layers = _floats(d["kappa_layers"], "--kappa-layers")
            if not cfg.kappa_layers or min(cfg.kappa_layers) <= 0:
                raise ConfigError("--kappa-layers needs positive values")
        if d.get("kappa_regions"):
            cfg.kappa_regions = _parse_regions(d["kappa_regions"])
        if sum(x is not None for x in (cfg.kappa_split, cfg.kappa_layers, cfg.kappa_regions)) > 1:
            raise ConfigError("choose one of --kappa-split, --kappa-layers, --kappa-regions")
        if d.get("bc_velocity"):
            cfg.bc_velocity = _floats(d["bc_velocity"], "--bc-velocity")
        if d.get("pressure_gradient"):
            cfg.pressure_gradient = _floats(d["pressure_gradient"], "--pressure-gradient")
        given = [x for x in ("bc_velocity", "pressure_gradient", "bc_file", "case") if d.get(x)]
        if len(given) > 1:
            raise ConfigError("choose one of --bc-velocity, --pressure-gradient, --bc-file, --case")
        if d.get("pin"):
            cfg.pin = _parse_pin(d["pin"])
        skip = set(vars(cfg)) | {"config", "verbose", "kappa_split", "kappa_layers",
                                 "kappa_regions", "bc_velocity", "pressure_gradient", "pin"}
        cfg.extra = {k: v for k, v in d.items() if k not in skip}
        return cfg

    @property
    def heterogeneous(self) -> bool:
        return any(x is not None for x in (self.kappa_split, self.kappa_layers, self.kappa_regions))


def _parse_split(text):
    # "x=0.5:1,100"
    try:
        where, values = str(text).split(":")
        axis_name, pos = where.split("=")
        axis = "xyz".index(axis_name.strip())
        k1, k2 = _floats(values, "--kappa-split")
        position = float(pos)
    except (ValueError, ConfigError):
        raise ConfigError(f"--kappa-split: expected like x=0.5:1,100, got {text!r}") from None
    if k1 <= 0 or k2 <= 0:
        raise ConfigError("--kappa-split values must be positive")
    return axis, position, k1, k2


def _parse_regions(text):
    # "1=1.0,2=10"
    out = {}
    for item in str(text).split(","):
        try:
            key, val = item.split("=")
            out[int(float(key))] = float(val)
        except ValueError:
            raise ConfigError(f"--kappa-regions: bad entry {item!r}") from None
    if min(out.values()) <= 0:
        raise ConfigError("--kappa-regions values must be positive")
    return out


def _parse_pin(text):
    try:
        cell, value = str(text).split(":")
        return int(cell), float(value)
    except ValueError:
        raise ConfigError(f"--pin: expected CELL:VALUE, got {text!r}") from None


# mesh and material setup

def _generated(spec: str, perturb: float, seed: int):
    kind, *parts = spec.split(":")
    if kind == "square":
        (k,) = _ints(parts[0] if parts else "2", "square")
        return generate_structured([0, 0], [1, 1], [k, k], perturb, seed)
    if kind == "cube":
        (k,) = _ints(parts[0] if parts else "2", "cube")
        return generate_structured([0, 0, 0], [1, 1, 1], [k, k, k], perturb, seed)
    if kind == "box" and len(parts) == 3:
        return generate_structured(_floats(parts[0], "box"), _floats(parts[1], "box"),
                                   _ints(parts[2], "box"), perturb, seed)
    if kind == "staggered" and len(parts) in (3, 4):
        axis = int(parts[3]) if len(parts) == 4 else 0
        return generate_staggered(_floats(parts[0], "staggered"), _floats(parts[1], "staggered"),
                                  _ints(parts[2], "staggered"), axis)
    if kind == "hexagon" and len(parts) <= 1:
        radius = float(parts[0]) if parts else 1.0
        return generate_hexagon(radius)
    raise ConfigError(
        f"unknown mesh spec {spec!r} (square:N, cube:N, box:LO:HI:DIVS, "
        "staggered:LO:HI:DIVS[:AXIS], hexagon[:R])"
    )


def load_mesh(cfg: RunConfig):
    """Build the complex (and region labels, if the file has them)."""
    regions = None
    if cfg.node is not None:
        verts, tops, regions = read_node_ele(cfg.node, cfg.ele)
    elif cfg.mesh is not None:
        verts, tops = _generated(cfg.mesh, cfg.perturb, cfg.seed)
    else:
        raise ConfigError("no mesh given (use --mesh or --node/--ele)")
    cx = build_complex(verts, tops)
    for _ in range(cfg.refine):
        if regions is not None:
            regions = np.tile(regions, 4)
        cx = build_complex(*refine_4to1(cx))
    return cx, regions


def resolve_kappa(cfg: RunConfig, cx, regions):
    if cfg.kappa_split is not None:
        axis, pos, k1, k2 = cfg.kappa_split
        if axis >= cx.n:
            raise ConfigError("--kappa-split axis exceeds the mesh dimension")
        return _cases.kappa_split(cx, axis, pos, k1, k2)
    if cfg.kappa_layers is not None:
        return _cases.kappa_layers(cx, cfg.kappa_layers, axis=1)
    if cfg.kappa_regions is not None:
        if regions is None:
            raise ConfigError("--kappa-regions needs an .ele file with a region column")
        missing = sorted(set(np.unique(regions).tolist()) - set(cfg.kappa_regions))
        if missing:
            raise ConfigError(f"no permeability given for regions {missing}")
        return np.array([cfg.kappa_regions[int(r)] for r in regions])
    return np.full(cx.num_simplices(cx.n), cfg.kappa)


def _default_velocity(n):
    return [1.0] + [0.0] * (n - 1)


def build_problem(cfg: RunConfig, cx, measures, kappa):
    """Darcy problem from the case, the boundary velocity or a pressure gradient."""
    n = cx.n
    bfaces = cx.boundary_faces()
    phi = None
    case = None
    if cfg.case is not None:
        case = _cases.get_case(cfg.case, n)
        if cfg.heterogeneous and cfg.case != "constant-x":
            raise ConfigError(f"case {cfg.case!r} assumes uniform permeability")
        velocity = _cases.bind(case.velocity, cfg.kappa, cfg.mu)
        phi = _cases.bind(case.source, cfg.kappa, cfg.mu)
        bc = de_rham_flux(cx, velocity, bfaces)
    elif cfg.pressure_gradient is not None:
        g = np.asarray(cfg.pressure_gradient, dtype=float)
        if g.shape != (n,):
            raise ConfigError(f"--pressure-gradient needs {n} components")
        # flux of v = -(kappa/mu) grad p, kappa taken from the adjacent cell
        kb = kappa[cx.face_cofaces[bfaces, 0]]
        bc = -kb / cfg.mu * de_rham_flux(cx, g, bfaces)
    elif cfg.bc_file is not None:
        bc = read_boundary_flux(cfg.bc_file, cx)
    else:
        v = np.asarray(cfg.bc_velocity or _default_velocity(n), dtype=float)
        if v.shape != (n,):
            raise ConfigError(f"--bc-velocity needs {n} components")
        bc = de_rham_flux(cx, v, bfaces)
    source = discretize_source(cx, measures, phi)
    problem = DarcyProblem(cx, measures, cfg.mu, kappa, source, bc, cfg.pin)
    return problem, case


# subcommands

def cmd_generate(cfg: RunConfig) -> int:
    out = cfg.extra.get("out")
    if not out:
        raise ConfigError("generate needs --out STEM")
    cx, regions = load_mesh(cfg)
    write_node_ele(out, cx.vertices, cx.simplices[cx.n], regions)
    if cfg.out_vtk:
        write_vtk(cx, cfg.out_vtk)
    print(f"wrote {out}.node/.ele: {len(cx.vertices)} vertices, {cx.num_simplices(cx.n)} cells")
    return EXIT_OK


def cmd_check_mesh(cfg: RunConfig) -> int:
    cx, regions = load_mesh(cfg)
    n = cx.n
    m = dual_measures(cx)
    rep = is_delaunay(m)
    dual = m.dual_edge_length[cx.interior_faces()]
    print(f"mesh: n={n}, {len(cx.vertices)} vertices, {cx.num_simplices(n - 1)} faces "
          f"({len(cx.boundary_faces())} boundary), {cx.num_simplices(n)} cells")
    print(f"volume: {m.cell_volume.sum():.12g} (vertex duals {m.dual_volume[0].sum():.12g})")
    if len(dual):
        print(f"interior dual edges: min {dual.min():.6e}, max {dual.max():.6e}")
    print(f"delaunay: {'ok' if rep.ok else 'VIOLATED'}; borderline faces: {len(rep.borderline)}")
    for f in rep.violating:
        print(f"  violating face {f} {cx.simplices[n - 1][f].tolist()} "
              f"dual {m.dual_edge_length[f]:.6e}")
    ok = rep.ok
    kappa = resolve_kappa(cfg, cx, regions)
    iface = _cases.interface_faces(cx, kappa)
    if len(iface):
        wc = is_well_centered_interface(m, iface)
        print(f"interface: {len(iface)} faces, well-centered: {'ok' if wc.ok else 'FAILED'}")
        for f in wc.violating:
            lp, lm = wc.values[f]
            print(f"  interface face {f} portions {lp:.6e}, {lm:.6e}")
        ok = ok and wc.ok
    else:
        print("interface: none")
    return EXIT_OK if ok else EXIT_FAIL


def _write_outputs(cfg, cx, measures, sol):
    velocity = velocity_at_points(cx, sol.flux) if cx.embedding_dim == cx.n else None
    if cfg.out_vtk:
        cell = {"pressure": sol.pressure}
        if velocity is not None:
            cell["velocity"] = velocity
        write_vtk(cx, cfg.out_vtk, cell_data=cell)
        print(f"wrote {cfg.out_vtk}")
    if cfg.out_csv:
        path = Path(cfg.out_csv)
        write_cell_csv(path, measures.cell_center, sol.pressure, velocity)
        faces = path.with_name(path.stem + "_faces.csv")
        write_face_csv(faces, cx, sol.flux)
        print(f"wrote {path} and {faces}")


def cmd_solve(cfg: RunConfig) -> int:
    cx, regions = load_mesh(cfg)
    kappa = resolve_kappa(cfg, cx, regions)
    m = dual_measures(cx, center=cfg.center)
    problem, case = build_problem(cfg, cx, m, kappa)
    sol = solve_darcy(problem, solver=cfg.solver, rel_tol=cfg.tol, max_iter=cfg.max_iter)
    _, mb = mass_balance_residual(sol, problem)
    print(f"solver: {sol.stats.method}, iterations {sol.stats.iterations}, "
          f"residual {sol.stats.residual:.3e}")
    print(f"mass balance: max residual {mb:.3e}")
    print(f"pressure range: [{sol.pressure.min():.6g}, {sol.pressure.max():.6g}]")
    if case is not None and not cfg.heterogeneous:
        exact = _cases.bind(case.pressure, cfg.kappa, cfg.mu)
        print(f"pressure error (relative, weighted): {pressure_error_norm(m, sol.pressure, exact):.6e}")
    _write_outputs(cfg, cx, m, sol)
    return EXIT_OK


def cmd_patch_test(cfg: RunConfig) -> int:
    if cfg.heterogeneous:
        raise ConfigError("the patch test uses a uniform --kappa")
    if cfg.bc_file or cfg.pressure_gradient or cfg.case:
        raise ConfigError("the patch test takes its boundary data from --bc-velocity")
    cx, _ = load_mesh(cfg)
    v = cfg.bc_velocity or _default_velocity(cx.n)
    if len(v) != cx.n:
        raise ConfigError(f"--bc-velocity needs {cx.n} components")
    threshold = cfg.extra["threshold"]
    rep = patch_test(cx, v, kappa=cfg.kappa, mu=cfg.mu, pin=cfg.pin, solver=cfg.solver,
                     rel_tol=cfg.tol, center=cfg.center)
    ok = rep.passed(threshold)
    print(f"cells {cx.num_simplices(cx.n)}, solver {rep.method}, {rep.seconds:.3f} s")
    print(f"pressure error {rep.pressure_error:.3e}  flux error {rep.flux_error:.3e}  "
          f"mass balance {rep.mass_balance:.3e}")
    print(f"patch test {'PASS' if ok else 'FAIL'} (threshold {threshold:g})")
    _write_outputs(cfg, cx, dual_measures(cx, center=cfg.center), rep.solution)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_barycenter_foil(cfg: RunConfig) -> int:
    cx, _ = load_mesh(cfg)
    if cx.n != 2:
        raise ConfigError("the barycenter comparison is two-dimensional")
    v = cfg.bc_velocity or _default_velocity(2)
    threshold, foil_min = cfg.extra["threshold"], cfg.extra["foil_min"]
    circ = patch_test(cx, v, kappa=cfg.kappa, mu=cfg.mu, pin=cfg.pin, solver=cfg.solver)
    bary = patch_test(cx, v, kappa=cfg.kappa, mu=cfg.mu, pin=cfg.pin, solver=cfg.solver,
                      center="barycenter")
    scale = np.abs(de_rham_flux(cx, v)).max()
    for name, r in (("circumcenter", circ), ("barycenter", bary)):
        print(f"{name:>12}: pressure error {r.pressure_error:.3e}, mass balance {r.mass_balance:.3e}")
    checks = {
        "circumcentric pressure exact": circ.pressure_error < threshold,
        "barycentric pressure not exact": bary.pressure_error > foil_min,
        "mass balance in both modes": max(circ.mass_balance, bary.mass_balance) <= 1e-10 * max(scale, 1.0),
    }
    for name, ok in checks.items():
        print(f"{'PASS' if ok else 'FAIL'} {name}")
    return EXIT_OK if all(checks.values()) else EXIT_FAIL


def cmd_convergence(cfg: RunConfig) -> int:
    if cfg.mesh is None and cfg.node is None:
        cfg.mesh = "square:10"
        if not cfg.perturb:
            cfg.perturb = 0.2
    cx, _ = load_mesh(cfg)
    case = _cases.get_case(cfg.case or "coscos", cx.n)
    levels = cfg.extra["levels"]
    if levels < 2:
        raise ConfigError("--levels must be at least 2")
    res = convergence_study(cx, case, levels, kappa=cfg.kappa, mu=cfg.mu, solver=cfg.solver,
                            rel_tol=cfg.tol, log=log.info)
    print(f"{'cells':>8} {'h':>12} {'flux error':>12} {'pressure error':>15}")
    for t, h, f, p in zip(res.triangles, res.h, res.flux_error, res.pressure_error):
        print(f"{t:>8d} {h:>12.5e} {f:>12.5e} {p:>15.5e}")
    frange = _floats(cfg.extra["flux_slope"], "--flux-slope")
    prange = _floats(cfg.extra["pressure_slope"], "--pressure-slope")
    checks = {
        f"flux slope {res.flux_slope:.3f} in [{frange[0]}, {frange[1]}]":
            frange[0] <= res.flux_slope <= frange[1],
        f"pressure slope {res.pressure_slope:.3f} in [{prange[0]}, {prange[1]}]":
            prange[0] <= res.pressure_slope <= prange[1],
        "errors decrease at every level": res.monotone,
    }
    for name, ok in checks.items():
        print(f"{'PASS' if ok else 'FAIL'} {name}")
    print(f"total time {res.seconds:.2f} s")
    return EXIT_OK if all(checks.values()) else EXIT_FAIL


COMMANDS = {
    "generate": cmd_generate,
    "check-mesh": cmd_check_mesh,
    "solve": cmd_solve,
    "patch-test": cmd_patch_test,
    "convergence": cmd_convergence,
    "barycenter-foil": cmd_barycenter_foil,
}


def _add_mesh(p):
    g = p.add_argument_group("mesh")
    g.add_argument("--mesh", help="generator spec: square:N, cube:N, box:LO:HI:DIVS, "
                                  "staggered:LO:HI:DIVS[:AXIS], hexagon[:R]")
    g.add_argument("--node", help="Triangle/TetGen .node file")
    g.add_argument("--ele", help="Triangle/TetGen .ele file")
    g.add_argument("--perturb", type=float, help="interior vertex jitter, fraction of the grid spacing")
    g.add_argument("--seed", type=int, help="seed for --perturb (default 0)")
    g.add_argument("--refine", type=int, help="number of 4:1 refinements (2D)")


def _add_material(p):
    g = p.add_argument_group("material")
    g.add_argument("--kappa", type=float, help="uniform permeability (default 1)")
    g.add_argument("--kappa-split", help="two permeabilities split at a plane, e.g. x=0.5:1,100")
    g.add_argument("--kappa-layers", help="equal layers stacked in y, e.g. 1,10,1,10,1")
    g.add_argument("--kappa-regions", help="permeability per .ele region, e.g. 1=1,2=10")
    g.add_argument("--mu", type=float, help="viscosity (default 1)")


def _add_problem(p):
    g = p.add_argument_group("problem")
    g.add_argument("--bc-velocity", help="constant boundary velocity, e.g. 1,0")
    g.add_argument("--pressure-gradient",
                   help="boundary flux from v = -(kappa/mu) grad p with this constant gradient")
    g.add_argument("--bc-file", help="boundary fluxes per face: CSV with face and flux columns")
    g.add_argument("--case", choices=sorted(_cases.CASES), help="named analytic case")
    g.add_argument("--pin", help="pinned pressure CELL:VALUE (default 0:0)")
    g.add_argument("--center", choices=["circumcenter", "barycenter"],
                   help="dual vertex placement (default circumcenter; barycenter is the foil)")


def _add_solver(p):
    g = p.add_argument_group("solver")
    g.add_argument("--solver", choices=["auto", "schur", "direct", "sparse"],
                   help="linear solver (default auto)")
    g.add_argument("--tol", type=float, help="relative residual tolerance (default 1e-12)")
    g.add_argument("--max-iter", type=int, help="CG iteration limit (default 10 x unknowns)")


def _add_output(p):
    g = p.add_argument_group("output")
    g.add_argument("--out-vtk", help="legacy VTK file with pressure and velocity")
    g.add_argument("--out-csv", help="per-cell CSV; fluxes go to <stem>_faces.csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="decdarcy", description="Darcy flow with discrete exterior calculus.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more logging")
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--config", help="key = value file; command-line flags take precedence")
        _add_mesh(p)
        return p

    p = add("generate", "write a generated mesh as .node/.ele files")
    p.add_argument("--out", help="output stem (writes STEM.node and STEM.ele)")
    p.add_argument("--out-vtk", help="also write the mesh as legacy VTK")

    p = add("check-mesh", "report Delaunay status, interface well-centeredness and dual measures")
    _add_material(p)

    p = add("solve", "solve a Darcy problem and write the fields")
    _add_material(p)
    _add_problem(p)
    _add_solver(p)
    _add_output(p)

    p = add("patch-test", "constant velocity, zero source; compare with the affine solution")
    _add_material(p)
    _add_problem(p)
    _add_solver(p)
    _add_output(p)
    p.add_argument("--threshold", type=float, default=1e-10, help="error threshold (default 1e-10)")

    p = add("convergence", "error table and slopes over successive 4:1 refinements")
    _add_material(p)
    p.add_argument("--case", choices=sorted(_cases.CASES), help="analytic case (default coscos)")
    _add_solver(p)
    p.add_argument("--levels", type=int, default=4, help="number of meshes (default 4)")
    p.add_argument("--flux-slope", default="1.7,2.1", help="accepted flux slope range")
    p.add_argument("--pressure-slope", default="0.85,1.25", help="accepted pressure slope range")

    p = add("barycenter-foil", "patch test with circumcentric and barycentric pressure points")
    _add_material(p)
    _add_problem(p)
    _add_solver(p)
    p.add_argument("--threshold", type=float, default=1e-10, help="circumcentric error threshold")
    p.add_argument("--foil-min", type=float, default=1e-3,
                   help="smallest barycentric error counted as inexact")
    return parser


def read_config_file(path) -> list[str]:
    """Turn ``key = value`` lines into command-line tokens."""
    tokens = []
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        tokens += [f"--{key.replace('_', '-')}", value]
    return tokens


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.config:
            tokens = read_config_file(args.config)
            log.debug("config tokens: %s", shlex.join(tokens))
            # config first so that later (command-line) occurrences win
            idx = argv.index(args.subcommand) + 1
            try:
                args = parser.parse_args(argv[:idx] + tokens + argv[idx:])
            except SystemExit as exc:
                return EXIT_CONFIG if exc.code else EXIT_OK
        cfg = RunConfig.from_args(args)
        return COMMANDS[cfg.subcommand](cfg)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverError, ZeroDivisionError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
