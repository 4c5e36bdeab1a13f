"""Named constructions, price grids and random market generators."""

from instances.catalog import CATALOG, NamedInstance, generate
from instances.grids import all_sorted_vectors, two_level_grid, uniform_grid
from instances.random_markets import random_market, random_markets
from instances.verify import VerifyReport, verify_bound

__all__ = [
    "CATALOG",
    "NamedInstance",
    "VerifyReport",
    "all_sorted_vectors",
    "generate",
    "random_market",
    "random_markets",
    "two_level_grid",
    "uniform_grid",
    "verify_bound",
]
