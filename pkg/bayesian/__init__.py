"""Independent finite-support valuation distributions and uniform Bayesian prices."""

from bayesian.distributions import (
    GENERATORS,
    AgentDistribution,
    SupportPoint,
    ValuationDistribution,
    bayes_lower,
    distribution_from_dict,
    distribution_to_dict,
    iid,
    load_distribution,
    point_mass,
)
from bayesian.estimates import (
    BayesEstimate,
    bayes_prices_c_close,
    bayes_uniform_subadditive,
    bayes_uniform_xos,
    exhaustive_expectation,
    expected_opt,
    realized_welfare,
)

__all__ = [
    "GENERATORS",
    "AgentDistribution",
    "BayesEstimate",
    "SupportPoint",
    "ValuationDistribution",
    "bayes_lower",
    "bayes_prices_c_close",
    "bayes_uniform_subadditive",
    "bayes_uniform_xos",
    "distribution_from_dict",
    "distribution_to_dict",
    "exhaustive_expectation",
    "expected_opt",
    "iid",
    "load_distribution",
    "point_mass",
    "realized_welfare",
]
