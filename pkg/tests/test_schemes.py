from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from market.model import Market
from market.welfare import optimal_welfare
from pricing.schemes import (
    SCHEMES,
    dynamic_policy_submodular,
    known_order_result,
    run_scheme,
    scheme_general_1m,
    scheme_known_order,
    scheme_submodular_23,
    scheme_submodular_57,
    scheme_two_identical_subadditive,
    scheme_uniform_half,
    summarize,
)
from market.profile import market_profile
from simulator.dynamics import simulate_dynamic
from simulator.prices import uniform_prices
from simulator.search import worst_case_welfare
from strategies import markets, subadditive_valuations
from valuations.errors import InsufficientDemand, NotSubadditive, NotSubmodular, NotTwoIdentical, UnknownId
from valuations.symmetric import make_valuation, single_minded, unit_demand


def test_two_candidates_on_prelim(prelim_market):
    res = scheme_submodular_23(prelim_market)
    assert [c.label for c in res.candidates] == ["P1", "P2"]
    assert res.candidates[0].prices.prices == (Fraction(3, 2),) * 3
    assert res.candidates[1].prices.prices == (Fraction(3, 2), Fraction(5, 2), Fraction(5, 2))
    assert res.welfare == 9
    assert res.welfare >= Fraction(22, 3)
    assert res.meets_guarantee


def test_four_candidates_on_prelim(prelim_market):
    res = scheme_submodular_57(prelim_market)
    assert [c.label for c in res.candidates] == ["P1", "P2", "P3", "P4"]
    p3 = res.candidates[2].prices.prices
    assert p3 == (Fraction(3, 2), Fraction(3, 2), Fraction(7, 2))
    assert res.meets_guarantee


def test_dynamic_policy_reaches_opt_on_prelim(prelim_market):
    res = run_scheme("dynamic-submod", prelim_market)
    assert res.welfare == res.opt == 11
    policy = dynamic_policy_submodular(prelim_market)
    assert policy.prices_for(frozenset({0, 1}), 3).prices == (Fraction(3, 2), Fraction(5, 2), Fraction(5, 2))
    assert simulate_dynamic(prelim_market, policy, (1, 0)).welfare == 11


def test_known_order_prices_on_prelim(prelim_market):
    prices = scheme_known_order(prelim_market, (0, 1))
    assert prices.prices == (Fraction(3, 2),) * 3
    assert known_order_result(prelim_market, (1, 0)).welfare == 11


def test_submodular_schemes_reject_other_classes():
    market = Market(2, (make_valuation([0, 0, 3]),))
    with pytest.raises(NotSubmodular):
        scheme_uniform_half(market)
    with pytest.raises(NotSubadditive):
        run_scheme("subadd13", market)


def test_identical_pair_is_required():
    with pytest.raises(NotTwoIdentical):
        scheme_two_identical_subadditive(Market(2, (unit_demand(1, 2), unit_demand(2, 2))))


def test_identical_pair_price_is_opt_over_3m():
    v = make_valuation([0] + [6 + i for i in range(1, 7)])
    res = scheme_two_identical_subadditive(Market(6, (v, v)))
    assert res.opt == 18
    assert res.chosen_prices.prices == (1,) * 6
    assert res.meets_guarantee


def test_general_price_sits_below_the_best_average():
    market = Market(3, (unit_demand(1, 3), single_minded(3, 3)))
    res = scheme_general_1m(market)
    assert res.opt == 3
    # per-item averages 1, 1/2, 1/3 and 0: beta is 1, the next lower one 1/2
    assert res.chosen_prices.prices == (Fraction(3, 4),) * 3
    assert res.meets_guarantee


def test_insufficient_demand_falls_back_to_epsilon():
    market = Market(3, (unit_demand(2, 3),))
    res = scheme_uniform_half(market)
    assert res.fallback
    assert res.welfare == res.opt == 2


def test_unknown_scheme():
    with pytest.raises(UnknownId):
        run_scheme("nope", Market(0, ()))


def test_summary_mentions_the_scheme(prelim_market):
    assert summarize(run_scheme("uniform-half", prelim_market)).startswith("uniform-half:")


@pytest.mark.parametrize("scheme_id", ["submod23", "submod57", "uniform-half", "known-order", "dynamic-submod"])
@settings(max_examples=40, deadline=None)
@given(market=markets("submodular", max_n=3, max_m=4))
def test_submodular_schemes_meet_their_guarantee(scheme_id, market):
    assert run_scheme(scheme_id, market).meets_guarantee


@settings(max_examples=40, deadline=None)
@given(markets("subadditive", max_n=3, max_m=4))
def test_subadditive_third(market):
    assert run_scheme("subadd13", market).meets_guarantee


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6).flatmap(subadditive_valuations))
def test_identical_pair_two_thirds(v):
    assert scheme_two_identical_subadditive(Market(v.m, (v, v))).meets_guarantee


@pytest.mark.parametrize("scheme_id", ["general-1m", "general-best-order"])
@settings(max_examples=40, deadline=None)
@given(market=markets("general", max_n=3, max_m=4))
def test_general_schemes_meet_their_guarantee(scheme_id, market):
    res = run_scheme(scheme_id, market)
    assert res.meets_guarantee
    assert res.welfare <= optimal_welfare(market)[0]


def test_registry_ids():
    assert set(SCHEMES) == {
        "submod23",
        "submod57",
        "known-order",
        "uniform-half",
        "dynamic-submod",
        "subadd13",
        "subadd-2iden",
        "general-1m",
        "general-best-order",
    }


@settings(max_examples=40, deadline=None)
@given(markets("submodular", max_n=3, max_m=4))
def test_uniform_b_minus_eps_sells_every_item(market):
    try:
        prof = market_profile(market)
    except InsufficientDemand:
        return
    prices = uniform_prices(prof.b - prof.epsilon, market.m)
    for ties in ("adversarial", "canonical"):
        res = worst_case_welfare(market, prices, ties=ties)
        assert res.outcome.allocation.total == market.m


@settings(max_examples=40, deadline=None)
@given(markets("submodular", max_n=3, max_m=4), st.data())
def test_known_order_reaches_opt_for_any_order(market, data):
    order = tuple(data.draw(st.permutations(range(market.n))))
    res = known_order_result(market, order)
    assert res.welfare == res.opt
