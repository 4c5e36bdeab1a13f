import pytest

from market.model import Market
from valuations.symmetric import additive, make_valuation, unit_demand


@pytest.fixture
def intro_market() -> Market:
    v = make_valuation([0, 5, 9, 11])
    return Market(3, (v, v))


@pytest.fixture
def prelim_market() -> Market:
    return Market(3, (make_valuation([0, 5, 9, 11]), make_valuation([0, 2, 4, 5])))


@pytest.fixture
def two_item_market() -> Market:
    return Market(2, (unit_demand(2, 2), additive(1, 2)))
