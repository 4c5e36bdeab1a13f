"""Multi-unit market model, the welfare oracle and the marginal-value profile."""

from market.files import load_market, market_from_dict, market_to_dict, save_market
from market.model import Allocation, Market
from market.profile import MarginalProfile, marginal_profile, market_profile, unit_demand_reduction
from market.welfare import brute_force_optimal_welfare, optimal_welfare

__all__ = [
    "Allocation",
    "MarginalProfile",
    "Market",
    "brute_force_optimal_welfare",
    "load_market",
    "marginal_profile",
    "market_from_dict",
    "market_profile",
    "market_to_dict",
    "optimal_welfare",
    "save_market",
    "unit_demand_reduction",
]
