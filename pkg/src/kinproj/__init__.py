"""Relaxation solver for hyperbolic conservation laws.

Conservation laws are relaxed to kinetic BGK systems with a few discrete
velocities and advanced with fully explicit projective integration; a
Fourier-symbol stability analyzer chooses the method parameters.
"""

from .config import RunConfig, make_config, parse_config, resolve_config, serialize_config
from .harness import ErrorReport, error_1norm, fit_order, spatial_order_sweep, temporal_order_sweep
from .model import FluxModel, make_model
from .problems import Problem, builtin_problem, exact_advection, exact_sod
from .solver import RunResult, solve
from .space import KineticOperator, Mesh, make_mesh_1d, make_mesh_2d, semi_discrete_rhs
from .timeint import ButcherTableau, ProjectiveScheme, make_scheme, projective_step, validate_tableau
from .velocity import VelocitySet, bracket, gauss_hermite_pair, orthogonal_velocities, v_max_bound

__version__ = "0.1.0"

__all__ = [
    "ButcherTableau",
    "ErrorReport",
    "FluxModel",
    "KineticOperator",
    "Mesh",
    "Problem",
    "ProjectiveScheme",
    "RunConfig",
    "RunResult",
    "VelocitySet",
    "bracket",
    "builtin_problem",
    "error_1norm",
    "exact_advection",
    "exact_sod",
    "fit_order",
    "gauss_hermite_pair",
    "make_config",
    "make_mesh_1d",
    "make_mesh_2d",
    "make_model",
    "make_scheme",
    "orthogonal_velocities",
    "parse_config",
    "projective_step",
    "resolve_config",
    "semi_discrete_rhs",
    "serialize_config",
    "solve",
    "spatial_order_sweep",
    "temporal_order_sweep",
    "v_max_bound",
    "validate_tableau",
]
