"""Stein's method of exchangeable pairs for Beta targets and Polya urns."""

from ._core import (
    ConvergenceError,
    DomainError,
    SmoothnessError,
    SpecError,
    bound_suite,
    c_constant,
    compute_eta,
    density_round_trip,
    exponential_check,
    fixture_names,
    intro_comparison,
    mills_counterexample,
    monte_carlo_check,
    pmf,
    rate_study,
    regression,
    regression_check,
    simulate_pair,
    solve,
    theorem_mt_bound,
)

__all__ = [
    "ConvergenceError",
    "DomainError",
    "SmoothnessError",
    "SpecError",
    "bound_suite",
    "c_constant",
    "compute_eta",
    "density_round_trip",
    "exponential_check",
    "fixture_names",
    "intro_comparison",
    "mills_counterexample",
    "monte_carlo_check",
    "pmf",
    "rate_study",
    "regression",
    "regression_check",
    "simulate_pair",
    "solve",
    "theorem_mt_bound",
]
