"""Normalised incomplete gamma function from its transition-region expansions.

The public surface is split by task:

* :mod:`transgamma.coeffs` generates every coefficient family exactly.
* :mod:`transgamma.expansions` evaluates the expansions in binary64.
* :mod:`transgamma.inversion` inverts Q and locates the negative zero of gamma*.
* :mod:`transgamma.oracle` gives extended-precision reference values.
"""

from .coeffs import gen_a, gen_b, gen_C, gen_d, gen_e_table, gen_f_table, gen_P
from .exceptions import (
    ConvergenceError,
    DegenerateExpansionError,
    DomainError,
    FrontierError,
    ValidityError,
)
from .expansions import (
    EvalReport,
    Regime,
    gamma_outer_lower,
    gamma_outer_neg,
    gamma_outer_upper,
    gamma_transition_point,
    gammastar_asym,
    hybrid_q,
    optimal_truncation,
    q_outer,
    q_transition,
    q_uniform,
)
from .inversion import QuantileResult, ZeroResult, negative_zero, quantile, solve_tau1, thompson_approx
from .polynomial import RationalPoly

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DegenerateExpansionError",
    "DomainError",
    "EvalReport",
    "FrontierError",
    "QuantileResult",
    "RationalPoly",
    "Regime",
    "ValidityError",
    "ZeroResult",
    "gamma_outer_lower",
    "gamma_outer_neg",
    "gamma_outer_upper",
    "gamma_transition_point",
    "gammastar_asym",
    "gen_C",
    "gen_P",
    "gen_a",
    "gen_b",
    "gen_d",
    "gen_e_table",
    "gen_f_table",
    "hybrid_q",
    "negative_zero",
    "optimal_truncation",
    "q_outer",
    "q_transition",
    "q_uniform",
    "quantile",
    "solve_tau1",
    "thompson_approx",
]
