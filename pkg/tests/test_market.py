import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from market.files import load_market, market_from_dict, save_market
from market.model import Allocation, Market
from market.profile import market_profile, unit_demand_reduction
from market.welfare import brute_force_optimal_welfare, optimal_welfare
from simulator.search import worst_case_welfare
from strategies import markets, markets_with_prices
from valuations.errors import DomainError, InsufficientDemand, NotMonotone, NotSubmodular, ParseError
from valuations.symmetric import make_valuation, single_minded, unit_demand


def test_market_checks_valuation_lengths():
    with pytest.raises(DomainError):
        Market(3, (unit_demand(1, 2),))
    with pytest.raises(DomainError):
        Market(-1, ())


def test_optimal_welfare_intro(intro_market):
    opt, alloc = optimal_welfare(intro_market)
    assert opt == 14
    assert alloc.quantities == (1, 2)


def test_optimal_welfare_prelim(prelim_market):
    opt, alloc = optimal_welfare(prelim_market)
    assert opt == 11
    assert alloc.quantities == (2, 1)
    assert alloc.welfare(prelim_market) == 11


def test_optimal_welfare_without_agents():
    assert optimal_welfare(Market(4, ())) == (0, Allocation(()))


@given(markets(max_n=3, max_m=5))
def test_dp_matches_enumeration(market):
    opt, alloc = optimal_welfare(market)
    assert opt == brute_force_optimal_welfare(market)
    assert alloc.welfare(market) == opt
    assert alloc.total <= market.m


def test_prelim_profile(prelim_market):
    prof = market_profile(prelim_market)
    assert prof.V == tuple(map(Fraction, (5, 4, 2, 2, 2, 1)))
    assert prof.delta == 1
    assert prof.epsilon == Fraction(1, 2)
    assert prof.b == 2
    assert prof.m_prime == 2
    assert prof.G(prof.b) == 2 and prof.E(prof.b) == 3
    assert prof.k == (2, 0)
    assert prof.y == (1, 2)
    assert prof.top_m_sum == 11


def test_epsilon_comes_from_the_gap_to_zero():
    prof = market_profile(Market(2, (make_valuation([0, 5, 6]),)))
    assert prof.delta == 4
    assert prof.separation == 1
    assert prof.b - prof.epsilon == Fraction(1, 2)


def test_delta_is_the_gap_inside_v():
    equal = market_profile(Market(2, (make_valuation([0, 3, 6]),)))
    assert equal.delta == 1
    assert equal.separation == 3
    spread = market_profile(Market(2, (make_valuation(["0", "5", "51/10"]),)))
    assert spread.delta == Fraction(49, 10)
    assert spread.epsilon == Fraction(1, 20)
    assert spread.b - spread.epsilon > 0


def test_insufficient_demand_carries_epsilon():
    with pytest.raises(InsufficientDemand) as err:
        market_profile(Market(3, (unit_demand(1, 3),)))
    assert err.value.epsilon == Fraction(1, 2)


def test_no_items_is_insufficient_demand():
    with pytest.raises(InsufficientDemand):
        market_profile(Market(0, (make_valuation([0]),)))


def test_unit_demand_reduction(prelim_market):
    reduced = unit_demand_reduction(prelim_market)
    assert reduced.n == 6
    assert [v(1) for v in reduced.agents] == [5, 4, 2, 2, 2, 1]
    assert all(v(3) == v(1) for v in reduced.agents)
    with pytest.raises(NotSubmodular):
        unit_demand_reduction(Market(3, (single_minded(3, 3),)))


def test_market_file_round_trip(tmp_path, prelim_market):
    path = save_market(prelim_market, tmp_path / "prelim.market.json")
    assert load_market(path) == prelim_market


def test_market_file_errors(tmp_path):
    with pytest.raises(ParseError):
        load_market(tmp_path / "missing.market.json")
    bad = tmp_path / "bad.market.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError):
        load_market(bad)
    with pytest.raises(ParseError):
        market_from_dict({"agents": []})
    with pytest.raises(ParseError):
        market_from_dict({"m": 3, "agents": [{"values": ["0", "1"]}]})


def test_closure_repairs_non_monotone_input():
    data = {"m": 2, "agents": [{"values": ["0", "3", "2"]}]}
    with pytest.raises(NotMonotone):
        market_from_dict(data)
    market = market_from_dict(data, closure=True)
    assert market.agents[0].values == (0, 3, 3)


def test_fraction_strings_in_files(tmp_path):
    path = tmp_path / "half.market.json"
    path.write_text(json.dumps({"m": 1, "agents": [["0", "1/2"]]}))
    assert load_market(path).agents[0](1) == Fraction(1, 2)


# -----------------------
# Profile properties
# -----------------------
@settings(max_examples=60, deadline=None)
@given(markets("submodular", max_n=3, max_m=4), st.data())
def test_profile_ignores_agent_order(market, data):
    shuffled = Market(market.m, tuple(data.draw(st.permutations(market.agents))))
    try:
        prof = market_profile(market)
    except InsufficientDemand:
        with pytest.raises(InsufficientDemand):
            market_profile(shuffled)
        return
    other = market_profile(shuffled)
    assert (other.V, other.b, other.m_prime, other.delta, other.epsilon) == (
        prof.V,
        prof.b,
        prof.m_prime,
        prof.delta,
        prof.epsilon,
    )
    assert prof.G(prof.b) < market.m <= prof.G(prof.b) + prof.E(prof.b)
    # no marginal lands strictly inside (b - eps, b + eps) except b itself
    assert prof.b - prof.epsilon > 0
    assert all(d == prof.b or abs(d - prof.b) >= 2 * prof.epsilon for d in prof.V)


@settings(max_examples=60, deadline=None)
@given(markets("submodular", max_n=3, max_m=5))
def test_submodular_opt_is_the_top_m_marginals(market):
    marg = sorted((v.marginal(j) for v in market.agents for j in range(1, market.m + 1)), reverse=True)
    opt, _ = optimal_welfare(market)
    assert opt == sum(marg[: market.m])
    try:
        assert market_profile(market).top_m_sum == opt
    except InsufficientDemand:
        pass


@settings(max_examples=40, deadline=None)
@given(markets_with_prices("submodular", max_n=3, max_m=4))
def test_unit_demand_reduction_never_raises_the_worst_case(case):
    market, prices = case
    reduced = unit_demand_reduction(market)
    assert optimal_welfare(reduced)[0] == optimal_welfare(market)[0]
    original = worst_case_welfare(market, prices, max_agents=None).welfare
    assert original >= worst_case_welfare(reduced, prices, max_agents=None).welfare
