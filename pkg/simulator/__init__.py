"""Sequential arrivals with adversarial order and tie-breaking."""

from simulator.dynamics import Outcome, Purchase, best_response, simulate, simulate_dynamic
from simulator.prices import (
    DynamicPolicy,
    PriceVector,
    constant_policy,
    from_counts,
    load_prices,
    price_vector,
    save_prices,
    uniform_prices,
)
from simulator.search import (
    WorstCaseResult,
    best_case_welfare,
    naive_best_case,
    naive_worst_case,
    worst_case_for_order,
    worst_case_welfare,
    worst_case_welfare_dynamic,
)

__all__ = [
    "DynamicPolicy",
    "Outcome",
    "PriceVector",
    "Purchase",
    "WorstCaseResult",
    "best_case_welfare",
    "best_response",
    "constant_policy",
    "from_counts",
    "load_prices",
    "naive_best_case",
    "naive_worst_case",
    "price_vector",
    "save_prices",
    "simulate",
    "simulate_dynamic",
    "uniform_prices",
    "worst_case_for_order",
    "worst_case_welfare",
    "worst_case_welfare_dynamic",
]
