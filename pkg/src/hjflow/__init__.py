"""Chernoff-iteration solver for the viscous Hamilton-Jacobi equation
u_t = Laplacian(u)/2 + H(grad u), with the dominating nonlinear expectation
and exponential Orlicz norm machinery used to certify its properties.
"""

from ._kernels import BACKEND
from .chernoff import DyadicSchedule, SolverConfig, iterate, one_step, parse_dyadic, solve
from .dominating import DominatingParams, t_op
from .grid import GridFunction, GridSpec
from .hamiltonian import Hamiltonian, build_conjugate_table, legendre_conjugate
from .kernel import GaussKernel, heat_step
from .oracle import exact_solution
from .orlicz import YoungFunction, luxemburg_norm, phi_inverse
from .regularity import DiagnosticsReport, PropertyViolation

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DyadicSchedule",
    "SolverConfig",
    "iterate",
    "one_step",
    "parse_dyadic",
    "solve",
    "DominatingParams",
    "t_op",
    "GridFunction",
    "GridSpec",
    "Hamiltonian",
    "build_conjugate_table",
    "legendre_conjugate",
    "GaussKernel",
    "heat_step",
    "exact_solution",
    "YoungFunction",
    "luxemburg_norm",
    "phi_inverse",
    "DiagnosticsReport",
    "PropertyViolation",
    "__version__",
]
