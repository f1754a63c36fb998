"""Entanglement of two spin qubits generated by scattering a flying spin-1/2 mediator.

Dimensionless throughout (hbar = m = d = 1, the target axis ``d`` along z).
"""
from .born import (RhoAB, ScatterParams, concurrence_born, concurrence_from_rho,
                   high_concurrence_predicates, yield_born)
from .appxseries import calC, calC_approx, calC_series, concurrence_approx
from .capquad import CapRule, cap_solid_angle, integrate_cap
from .errors import (ConvergenceError, DegenerateBranchError, DomainError, ResonanceError,
                     ScatterError, SingularSystemError, UnsupportedRegimeError, ZeroYieldError)
from .fullorder import (concurrence_full, evaluate_full, evaluate_strong, full_coeffs,
                        yield_full)

__all__ = [
    "CapRule", "ConvergenceError", "DegenerateBranchError", "DomainError",
    "ResonanceError", "RhoAB", "ScatterError", "ScatterParams", "SingularSystemError",
    "UnsupportedRegimeError", "ZeroYieldError", "calC", "calC_approx", "calC_series",
    "cap_solid_angle", "concurrence_approx", "concurrence_born", "concurrence_from_rho",
    "concurrence_full", "evaluate_full", "evaluate_strong", "full_coeffs",
    "high_concurrence_predicates", "integrate_cap", "yield_born", "yield_full",
]
__version__ = "0.1.0"
