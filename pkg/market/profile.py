from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from market.model import Market
from valuations.errors import InsufficientDemand, NotSubmodular
from valuations.symmetric import SymmetricValuation, is_submodular, unit_demand


@dataclass(frozen=True)
class MarginalProfile:
    """
    All n*m marginal values with the cutoff machinery:
    G(x) = #{V > x}, E(x) = #{V = x}, b is the value with
    G(b) < m <= G(b) + E(b), and m' = G(b).

    delta is the smallest gap between distinct values of V (1 when they
    are all equal). separation is the same gap with 0 added to V, and
    epsilon = separation / 2, so b - epsilon is positive whenever b is.
    """

    m: int
    V: tuple[Fraction, ...]  # sorted descending
    delta: Fraction
    separation: Fraction
    epsilon: Fraction
    b: Fraction
    m_prime: int
    g_of_b: int
    e_of_b: int
    k: tuple[int, ...]  # per agent: marginals strictly above b
    y: tuple[int, ...]  # per agent: marginals equal to b

    def G(self, x: Fraction) -> int:
        return sum(1 for d in self.V if d > x)

    def E(self, x: Fraction) -> int:
        return sum(1 for d in self.V if d == x)

    @property
    def top_m_sum(self) -> Fraction:
        return sum(self.V[: self.m], start=Fraction(0))


def _min_gap(values: Iterable[Fraction]) -> Fraction:
    distinct = sorted(set(values))
    if len(distinct) < 2:
        return Fraction(1)
    return min(b - a for a, b in zip(distinct, distinct[1:]))


def marginal_profile(m: int, valuations: Sequence[SymmetricValuation]) -> MarginalProfile:
    """
    Profile over an explicit valuation list, so callers choose raw
    valuations or their envelopes. Raises InsufficientDemand (carrying the
    fallback epsilon) when fewer than m marginals are positive.
    """
    V = sorted((v.marginal(j) for v in valuations for j in range(1, m + 1)), reverse=True)
    delta = _min_gap(V)
    separation = _min_gap([*V, Fraction(0)])
    epsilon = separation / 2
    positive = sum(1 for d in V if d > 0)
    if m == 0 or positive < m:
        raise InsufficientDemand(
            f"Only {positive} positive marginal values for m={m} items", epsilon
        )

    b = V[m - 1]
    g = sum(1 for d in V if d > b)
    e = sum(1 for d in V if d == b)
    k = tuple(sum(1 for j in range(1, m + 1) if v.marginal(j) > b) for v in valuations)
    y = tuple(sum(1 for j in range(1, m + 1) if v.marginal(j) == b) for v in valuations)
    return MarginalProfile(
        m=m,
        V=tuple(V),
        delta=delta,
        separation=separation,
        epsilon=epsilon,
        b=b,
        m_prime=g,
        g_of_b=g,
        e_of_b=e,
        k=k,
        y=y,
    )


def market_profile(market: Market) -> MarginalProfile:
    return marginal_profile(market.m, market.agents)


def unit_demand_reduction(market: Market) -> Market:
    """
    Agent (i, j) wants one item at v_i(j) - v_i(j-1). Agents are ordered
    by i, then j.
    """
    for idx, v in enumerate(market.agents):
        if not is_submodular(v):
            raise NotSubmodular(f"Agent {idx} does not have decreasing marginal values")
    agents = [
        unit_demand(v.marginal(j), market.m)
        for v in market.agents
        for j in range(1, market.m + 1)
    ]
    return Market(market.m, tuple(agents))
