from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bayesian.distributions import (
    AgentDistribution,
    SupportPoint,
    bayes_lower,
    distribution_from_dict,
    distribution_to_dict,
    load_distribution,
    point_mass,
)
from bayesian.estimates import (
    bayes_prices_c_close,
    bayes_uniform_subadditive,
    bayes_uniform_xos,
    exhaustive_expectation,
    expected_opt,
)
from market.model import Market
from market.welfare import optimal_welfare
from strategies import markets, xos_distributions
from valuations.errors import BadParams, ClassMismatch, DomainError
from valuations.symmetric import ValuationClass, make_valuation, unit_demand


def test_support_must_be_a_distribution():
    v = unit_demand(1, 2)
    with pytest.raises(DomainError):
        AgentDistribution((SupportPoint(Fraction(1, 2), v),))
    with pytest.raises(DomainError):
        AgentDistribution((SupportPoint(Fraction(0), v), SupportPoint(Fraction(1), v)))


def test_bayes_lower_shape():
    dist = bayes_lower(3)
    assert dist.m == 9 and dist.n == 3
    assert dist.support_size == 8
    assert dist.declared_class is ValuationClass.GENERAL
    with pytest.raises(BadParams):
        bayes_lower(1)


def test_bayes_lower_expected_opt_is_exact():
    # a single-minded agent takes all 9 items; otherwise 3 unit-demand agents get one each
    e_opt = exhaustive_expectation(bayes_lower(3), lambda mk: optimal_welfare(mk)[0])
    assert e_opt == Fraction(65, 9)


def test_sampling_is_deterministic_in_seed_and_index():
    dist = bayes_lower(4)
    assert dist.sample(7, 3) == dist.sample(7, 3)
    draws = {dist.sample(7, i) for i in range(40)}
    assert len(draws) > 1


def test_point_mass_expectation(prelim_market):
    dist = point_mass(prelim_market)
    assert exhaustive_expectation(dist, lambda mk: optimal_welfare(mk)[0]) == 11
    mean, stderr = expected_opt(dist, samples=5, seed=1)
    assert mean == 11 and stderr == 0.0


def test_uniform_xos_price_on_prelim(prelim_market):
    prices, est = bayes_uniform_xos(point_mass(prelim_market), 0, None, order="identity", exhaustive=True)
    assert prices.prices == (Fraction(11, 6),) * 3
    assert est.expected_opt == 11
    assert est.expected_welfare == 11
    assert est.exhaustive


def test_monte_carlo_needs_a_seed(prelim_market):
    with pytest.raises(BadParams):
        bayes_uniform_xos(point_mass(prelim_market), 10, None)


def test_monte_carlo_matches_exhaustive_on_a_point_mass(prelim_market):
    dist = point_mass(prelim_market)
    _, exact = bayes_uniform_xos(dist, 0, None, exhaustive=True)
    _, sampled = bayes_uniform_xos(dist, 4, seed=42)
    assert (sampled.expected_opt, sampled.expected_welfare) == (exact.expected_opt, exact.expected_welfare)


def test_class_checks():
    dist = point_mass(Market(2, (make_valuation([0, 0, 3]),)))
    with pytest.raises(ClassMismatch):
        bayes_uniform_xos(dist, 0, None, exhaustive=True)
    with pytest.raises(ClassMismatch):
        bayes_uniform_subadditive(dist, 0, None, exhaustive=True)
    with pytest.raises(BadParams):
        bayes_prices_c_close(dist, Fraction(1, 2), 0, None, exhaustive=True)


@settings(max_examples=30, deadline=None)
@given(markets("subadditive", max_n=3, max_m=4))
def test_subadditive_point_mass_gets_a_quarter(market):
    _, est = bayes_uniform_subadditive(point_mass(market), 0, None, order="identity", exhaustive=True)
    assert est.expected_welfare >= est.expected_opt / 4


@settings(max_examples=30, deadline=None)
@given(markets("xos", max_n=3, max_m=4))
def test_xos_point_mass_gets_half(market):
    _, est = bayes_uniform_xos(point_mass(market), 0, None, order="identity", exhaustive=True)
    assert est.expected_welfare >= est.expected_opt / 2


def test_distribution_files(tmp_path):
    dist = bayes_lower(2)
    data = distribution_to_dict(dist)
    assert distribution_from_dict(data).agents == dist.agents
    path = tmp_path / "lower.dist.json"
    path.write_text('{"generator": "bayes-lower", "params": {"n": 2}}')
    assert load_distribution(path).m == 4


@settings(max_examples=25, deadline=None)
@given(xos_distributions())
def test_c_close_with_c_one_is_the_xos_price(dist):
    xos_prices, xos_est = bayes_uniform_xos(dist, 0, None, order="identity", exhaustive=True)
    close_prices, close_est = bayes_prices_c_close(dist, Fraction(1), 0, None, order="identity", exhaustive=True)
    assert close_prices == xos_prices
    assert (close_est.expected_opt, close_est.expected_welfare) == (xos_est.expected_opt, xos_est.expected_welfare)


def test_monte_carlo_opt_on_bayes_lower():
    dist = bayes_lower(3)
    mean, stderr = expected_opt(dist, samples=400, seed=11)
    assert stderr > 0
    assert abs(float(mean - Fraction(65, 9))) <= 5 * stderr


@settings(max_examples=15, deadline=None)
@given(xos_distributions(), st.integers(0, 10_000))
def test_monte_carlo_opt_tracks_the_exact_expectation(dist, seed):
    exact = exhaustive_expectation(dist, lambda mk: optimal_welfare(mk)[0])
    mean, stderr = expected_opt(dist, samples=300, seed=seed)
    assert abs(float(mean - exact)) <= 5 * stderr + 1e-9
