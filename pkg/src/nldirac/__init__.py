"""Numerical and exact-algebra laboratory for a nonlinearly generalized
Dirac equation.

The field takes values in complexified spacetime algebra; the mass term is
replaced by F(Z) psi where Z lives in a commutative subalgebra isomorphic
to the complex numbers.  The package provides:

* exact (Gaussian-rational) and float gamma-matrix arithmetic,
* the subalgebra isomorphism and pluggable nonlinear mass terms,
* a periodic-grid RK4 integrator with charge and residual diagnostics,
* spin-group and gauge transformations with covariance checks,
* an exact polynomial identity suite over the algebra,
* a small CLI (``nldirac``) driving reproducible runs.
"""

from .errors import (
    AmplitudeCollapseError,
    BilinearRealityError,
    ConfigError,
    IntegrationFault,
    NotASpinElementError,
    StabilityFault,
    SubalgebraError,
    UnsupportedLagrangianError,
)
from .exact import GaussianRational, gq
from .clifford import (
    ETA,
    Matrix4C,
    axial_current,
    basis_spinor,
    bilinear_invariants,
    current,
    dirac_adjoint,
    gamma,
    gamma_lower,
    gammas,
    pseudoscalar,
    su22_member,
)
from .nalgebra import (
    FunctionSpec,
    NElement,
    apply_function,
    compute_Z,
    from_matrix,
    n_add,
    n_conj,
    n_modsq,
    n_mul,
    to_matrix,
)
from .nonlinearity import (
    NonlinearitySpec,
    euler_lagrange_residual_check,
    equation_lhs,
    lagrangian_density,
    mass_term,
)
from .dynamics import (
    AnalyticSolution,
    FieldState,
    Grid,
    PotentialSpec,
    bilinear_integrals,
    gaussian_state,
    homogeneous_effective_mass,
    homogeneous_solution,
    homogeneous_state,
    lattice_residual,
    make_plane_wave,
    measure_frequency,
    plane_wave_solution,
    residual_norm,
    rhs,
    stability_bound,
    step_rk4,
    total_charge,
)
from .symmetry import (
    GaugeFunction,
    LorentzPair,
    gauge_transform,
    lorentz_pair,
    parity_pair,
    parse_transform,
    spin_from_plane,
    spin_to_lorentz,
    transform_solution,
)
from .identities import MatPoly, SuiteReport, run_all
from .config import InitialSpec, RunConfig, echo_text, load_config, parse_config
from .run import ReportBundle, run_covariance, run_dispersion, run_simulation

__version__ = "0.1.0"

__all__ = [
    "AmplitudeCollapseError",
    "AnalyticSolution",
    "BilinearRealityError",
    "ConfigError",
    "ETA",
    "FieldState",
    "FunctionSpec",
    "GaugeFunction",
    "GaussianRational",
    "Grid",
    "InitialSpec",
    "IntegrationFault",
    "LorentzPair",
    "MatPoly",
    "Matrix4C",
    "NElement",
    "NonlinearitySpec",
    "NotASpinElementError",
    "PotentialSpec",
    "ReportBundle",
    "RunConfig",
    "StabilityFault",
    "SubalgebraError",
    "SuiteReport",
    "UnsupportedLagrangianError",
    "apply_function",
    "axial_current",
    "basis_spinor",
    "bilinear_integrals",
    "bilinear_invariants",
    "compute_Z",
    "current",
    "dirac_adjoint",
    "echo_text",
    "equation_lhs",
    "euler_lagrange_residual_check",
    "from_matrix",
    "gamma",
    "gamma_lower",
    "gammas",
    "gauge_transform",
    "gaussian_state",
    "gq",
    "homogeneous_effective_mass",
    "homogeneous_solution",
    "homogeneous_state",
    "lagrangian_density",
    "lattice_residual",
    "load_config",
    "lorentz_pair",
    "make_plane_wave",
    "mass_term",
    "measure_frequency",
    "n_add",
    "n_conj",
    "n_modsq",
    "n_mul",
    "parity_pair",
    "parse_config",
    "parse_transform",
    "plane_wave_solution",
    "pseudoscalar",
    "residual_norm",
    "rhs",
    "run_all",
    "run_covariance",
    "run_dispersion",
    "run_simulation",
    "spin_from_plane",
    "spin_to_lorentz",
    "stability_bound",
    "step_rk4",
    "su22_member",
    "to_matrix",
    "total_charge",
    "transform_solution",
]
