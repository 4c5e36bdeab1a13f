from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Literal

import numpy as np

from bayesian.distributions import ValuationDistribution
from market.model import Market
from market.welfare import optimal_welfare
from simulator.prices import PriceVector, uniform_prices
from simulator.search import DEFAULT_MAX_AGENTS, worst_case_for_order, worst_case_welfare
from valuations.envelopes import closeness_factor, minimal_xos_envelope
from valuations.errors import BadParams, ClassMismatch
from valuations.rationals import format_rational
from valuations.symmetric import is_subadditive, is_xos

OrderMode = Literal["adversarial", "identity"]


@dataclass(frozen=True)
class BayesEstimate:
    """
    Means are exact over the draws used. With exhaustive=True they are exact
    expectations over the whole support and the standard errors are 0.
    """

    expected_opt: Fraction
    expected_welfare: Fraction
    samples: int
    seed: int | None
    opt_stderr: float = 0.0
    welfare_stderr: float = 0.0
    exhaustive: bool = False

    @property
    def ratio(self) -> Fraction:
        if self.expected_opt == 0:
            return Fraction(1)
        return self.expected_welfare / self.expected_opt


def _stderr(values: list[Fraction]) -> float:
    if len(values) < 2:
        return 0.0
    arr = np.array([float(v) for v in values])
    return float(arr.std(ddof=1) / np.sqrt(len(arr)))


def _mean(values: list[Fraction]) -> Fraction:
    return sum(values, start=Fraction(0)) / len(values)


def _check_samples(samples: int) -> None:
    if samples < 1:
        raise BadParams(f"samples must be >= 1, got {samples}")


def exhaustive_expectation(dist: ValuationDistribution, fn: Callable[[Market], Fraction]) -> Fraction:
    """Exact sum of prob * fn(profile) over the product support."""
    return sum((p * fn(market) for p, market in dist.profiles()), start=Fraction(0))


def expected_opt(dist: ValuationDistribution, samples: int, seed: int) -> tuple[Fraction, float]:
    """Monte Carlo mean of OPT over draws 0..samples-1, with its standard error."""
    _check_samples(samples)
    opts = [optimal_welfare(dist.sample(seed, i))[0] for i in range(samples)]
    return _mean(opts), _stderr(opts)


def realized_welfare(
    market: Market,
    prices: PriceVector,
    order: OrderMode = "adversarial",
    max_agents: int | None = DEFAULT_MAX_AGENTS,
) -> Fraction:
    if order == "identity":
        return worst_case_for_order(market, prices, range(market.n)).welfare
    return worst_case_welfare(market, prices, max_agents=max_agents).welfare


# -----------------------
# Price constructions
# -----------------------
def _require(market: Market, test: Callable, label: str) -> None:
    for idx, v in enumerate(market.agents):
        if not test(v):
            raise ClassMismatch(f"Drawn valuation of agent {idx} is not {label}: {v!r}")


def _envelope_contribution(market: Market, c: Fraction) -> Fraction:
    """
    Sum of w_i(x*_i) where w_i is the minimal XOS envelope and x* is the
    optimal allocation of the drawn valuations.
    """
    _, alloc = optimal_welfare(market)
    total = Fraction(0)
    for idx, (v, q) in enumerate(zip(market.agents, alloc.quantities)):
        w = minimal_xos_envelope(v)
        factor = closeness_factor(v, w)
        if factor > c:
            raise ClassMismatch(
                f"Agent {idx} is {format_rational(factor)}-close to XOS, above c={format_rational(c)}"
            )
        total += w(q)
    return total


def _estimate(
    dist: ValuationDistribution,
    price_of: Callable[[Market], Fraction],
    scale: Fraction,
    samples: int,
    seed: int | None,
    order: OrderMode,
    exhaustive: bool,
    check: Callable[[Market], None],
    max_agents: int | None,
) -> tuple[PriceVector, BayesEstimate]:
    m = dist.m
    if exhaustive:
        for _, market in dist.profiles():
            check(market)
        mean_target = exhaustive_expectation(dist, price_of)
        prices = uniform_prices(mean_target * scale if m else 0, m)
        e_opt = exhaustive_expectation(dist, lambda mk: optimal_welfare(mk)[0])
        e_wel = exhaustive_expectation(
            dist, lambda mk: realized_welfare(mk, prices, order, max_agents)
        )
        return prices, BayesEstimate(e_opt, e_wel, dist.support_size, seed, exhaustive=True)

    _check_samples(samples)
    if seed is None:
        raise BadParams("Monte Carlo estimation needs a seed")
    # price from draws 0..samples-1, welfare measured on fresh draws samples..2*samples-1
    pricing_draws = [dist.sample(seed, i) for i in range(samples)]
    for market in pricing_draws:
        check(market)
    targets = [price_of(mk) for mk in pricing_draws]
    prices = uniform_prices(_mean(targets) * scale if m else 0, m)

    fresh = [dist.sample(seed, samples + i) for i in range(samples)]
    opts, wels = [], []
    for market in fresh:
        check(market)
        opts.append(optimal_welfare(market)[0])
        wels.append(realized_welfare(market, prices, order, max_agents))
    est = BayesEstimate(_mean(opts), _mean(wels), samples, seed, _stderr(opts), _stderr(wels))
    return prices, est


def bayes_uniform_xos(
    dist: ValuationDistribution,
    samples: int,
    seed: int | None,
    order: OrderMode = "adversarial",
    exhaustive: bool = False,
    max_agents: int | None = DEFAULT_MAX_AGENTS,
) -> tuple[PriceVector, BayesEstimate]:
    """Uniform price E[OPT]/2m for XOS agents."""

    def check(market: Market) -> None:
        _require(market, is_xos, "XOS")

    def target(market: Market) -> Fraction:
        return optimal_welfare(market)[0]

    scale = Fraction(1, 2 * dist.m) if dist.m else Fraction(0)
    return _estimate(dist, target, scale, samples, seed, order, exhaustive, check, max_agents)


def bayes_prices_c_close(
    dist: ValuationDistribution,
    c: Fraction,
    samples: int,
    seed: int | None,
    order: OrderMode = "adversarial",
    exhaustive: bool = False,
    max_agents: int | None = DEFAULT_MAX_AGENTS,
) -> tuple[PriceVector, BayesEstimate]:
    """
    Uniform price E[sum_i w_i(x*_i)] / (2cm), w_i the minimal XOS envelope.
    w_i / c is an XOS function below v_i, so this is half of its expected
    per-item contribution.
    """
    c = Fraction(c)
    if c < 1:
        raise BadParams(f"Closeness factor must be at least 1, got {format_rational(c)}")

    def check(market: Market) -> None:
        for idx, v in enumerate(market.agents):
            factor = closeness_factor(v, minimal_xos_envelope(v))
            if factor > c:
                raise ClassMismatch(
                    f"Agent {idx} is {format_rational(factor)}-close to XOS, above c={format_rational(c)}"
                )

    def target(market: Market) -> Fraction:
        return _envelope_contribution(market, c)

    scale = Fraction(1) / (2 * c * dist.m) if dist.m else Fraction(0)
    return _estimate(dist, target, scale, samples, seed, order, exhaustive, check, max_agents)


def bayes_uniform_subadditive(
    dist: ValuationDistribution,
    samples: int,
    seed: int | None,
    order: OrderMode = "adversarial",
    exhaustive: bool = False,
    max_agents: int | None = DEFAULT_MAX_AGENTS,
) -> tuple[PriceVector, BayesEstimate]:
    """Subadditive agents are 2-close to XOS."""
    if exhaustive:
        for _, market in dist.profiles():
            _require(market, is_subadditive, "subadditive")
    elif seed is not None:
        for i in range(samples):
            _require(dist.sample(seed, i), is_subadditive, "subadditive")
    return bayes_prices_c_close(dist, Fraction(2), samples, seed, order, exhaustive, max_agents)
