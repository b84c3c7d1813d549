"""Quantitative mu-calculus model checker for initialised linear hybrid systems.

Systems and games are passed as JSON text; rationals as strings such as "3/4",
"inf" or "-inf". Errors raise QmcError with args (message, code).
"""

from ._qmc import (
    QmcError,
    alternation_depth,
    approximate,
    approximate_game,
    crosscheck,
    di,
    dstar,
    equivalent,
    ext_add,
    ext_mul,
    interval_contains,
    mc_game,
    normalise_game,
    normalise_system,
    oracle,
    parse_formula,
    scale_interval,
    solve_counter_reset,
    to_nnf,
    validate_initialised,
)

__all__ = [
    "QmcError",
    "alternation_depth",
    "approximate",
    "approximate_game",
    "crosscheck",
    "di",
    "dstar",
    "equivalent",
    "ext_add",
    "ext_mul",
    "interval_contains",
    "mc_game",
    "normalise_game",
    "normalise_system",
    "oracle",
    "parse_formula",
    "scale_interval",
    "solve_counter_reset",
    "to_nnf",
    "validate_initialised",
]
