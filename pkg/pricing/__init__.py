"""Posted-price constructions, each evaluated by exact worst-case search."""

from pricing.schemes import (
    SCHEMES,
    Candidate,
    Limits,
    SchemeResult,
    dynamic_policy_submodular,
    dynamic_submod_result,
    evaluate_candidate,
    known_order_result,
    run_scheme,
    scheme_general_1m,
    scheme_general_best_order,
    scheme_known_order,
    scheme_subadditive_third,
    scheme_submodular_23,
    scheme_submodular_57,
    scheme_two_identical_subadditive,
    scheme_uniform_half,
    summarize,
)

__all__ = [
    "SCHEMES",
    "Candidate",
    "Limits",
    "SchemeResult",
    "dynamic_policy_submodular",
    "dynamic_submod_result",
    "evaluate_candidate",
    "known_order_result",
    "run_scheme",
    "scheme_general_1m",
    "scheme_general_best_order",
    "scheme_known_order",
    "scheme_subadditive_third",
    "scheme_submodular_23",
    "scheme_submodular_57",
    "scheme_two_identical_subadditive",
    "scheme_uniform_half",
    "summarize",
]
