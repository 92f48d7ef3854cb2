"""Discrete exterior calculus for Darcy flow on triangle and tetrahedral meshes.

Fluxes live on primal (n-1)-simplices and pressures at the circumcenters of
the n-simplices; the flux/pressure saddle system uses diagonal Hodge stars,
optionally weighted by a piecewise-constant permeability.
"""

from .complex import Cochain, ComplexError, SimplicialComplex, build_complex
from .darcy import (
    ConsistencyError, DarcyProblem, DarcySolution, assemble_saddle_system, de_rham_flux,
    discretize_boundary_flux, discretize_source, eliminate_knowns, mass_balance_residual,
    solve_darcy,
)
from .geometry import (
    DegenerateSimplexError, DualMeasures, circumcenter, dual_measures, is_delaunay,
    is_well_centered_interface,
)
from .hodge import (
    DegenerateHodgeError, DiagonalOperator, InterfaceError, hetero_hodge_inverse, hodge_matrix,
    inverse_hodge_with_sign,
)
from .linalg import (
    ConvergenceError, SaddleSystem, SingularSystemError, SolverError, direct_solve, schur_solve,
)
from .meshio import (
    generate_hexagon, generate_staggered, generate_structured, read_node_ele, refine_4to1,
    write_vtk,
)
from .whitney import (
    FormValue, flux_error_norm, pressure_error_norm, velocity_at_points, velocity_from_flux_form,
    whitney_flux_at_point,
)

__version__ = "0.1.0"
