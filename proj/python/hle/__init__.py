"""Radial solutions of the Henon-Lane-Emden system on the critical hyperbola.

Thin wrapper over the C++ core: parameter algebra and regime classification,
the Rayleigh-quotient solver for the reduced 1-D system, the radial transform,
and the weighted Rellich closed forms.
"""

from hle._core import (
    DecayReport,
    DualityReport,
    LineGrid,
    NonconvergenceError,
    RadialSolution,
    ReducedParams,
    Regime,
    SolveOptions,
    SystemParams,
    TrajectoryPair,
    ValidationError,
    VariationalResult,
    apriori_bounds,
    check_hyperbola,
    classify_regime,
    decay_limits,
    derive_reduced,
    duality_check,
    energy_max,
    equilibria,
    gamma_appendix,
    minimize_quotient,
    mu2,
    mu_theta,
    pde_residual_sups,
    system_residual_sups,
    theta_double_star,
    to_radial,
)

__all__ = [
    "DecayReport",
    "DualityReport",
    "LineGrid",
    "NonconvergenceError",
    "RadialSolution",
    "ReducedParams",
    "Regime",
    "SolveOptions",
    "SystemParams",
    "TrajectoryPair",
    "ValidationError",
    "VariationalResult",
    "apriori_bounds",
    "check_hyperbola",
    "classify_regime",
    "decay_limits",
    "derive_reduced",
    "duality_check",
    "energy_max",
    "equilibria",
    "gamma_appendix",
    "minimize_quotient",
    "mu2",
    "mu_theta",
    "pde_residual_sups",
    "system_residual_sups",
    "theta_double_star",
    "to_radial",
]

__version__ = "0.1.0"
