"""Optimal consumption, investment and life insurance with exponential utility."""

from ._core import (
    ClosedFormSolution,
    ConfigError,
    ModelParams,
    ParameterError,
    PiecewiseConstant,
    SolverError,
    ValueSurface,
    baseline_params,
    derive,
    dual_objective,
    estimate_utility,
    g1,
    g2,
    indifference_price,
    load_config,
    optimal_portfolio,
    parse_config,
    run_command,
    solve,
    solve_hjb,
    validate,
    value_at_theta,
    zeta_of_theta,
)

__all__ = [
    "ClosedFormSolution",
    "ConfigError",
    "ModelParams",
    "ParameterError",
    "PiecewiseConstant",
    "SolverError",
    "ValueSurface",
    "baseline_params",
    "derive",
    "dual_objective",
    "estimate_utility",
    "g1",
    "g2",
    "indifference_price",
    "load_config",
    "optimal_portfolio",
    "parse_config",
    "run_command",
    "solve",
    "solve_hjb",
    "validate",
    "value_at_theta",
    "zeta_of_theta",
]
