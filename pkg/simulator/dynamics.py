from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

from market.model import Allocation, Market
from simulator.prices import DynamicPolicy, PriceVector
from valuations.errors import DomainError, InvalidTieChoice
from valuations.rationals import format_rational
from valuations.symmetric import SymmetricValuation

TieMode = Literal["canonical", "all"]


def utilities(v: SymmetricValuation, remaining_prices: Sequence[Fraction]) -> list[Fraction]:
    """u(k) = v(k) - (sum of the k cheapest remaining prices)."""
    out = [Fraction(0)]
    paid = Fraction(0)
    for k, p in enumerate(remaining_prices, start=1):
        paid += p
        out.append(v(k) - paid)
    return out


def best_response(
    v: SymmetricValuation,
    remaining_prices: Sequence[Fraction],
    mode: TieMode = "canonical",
) -> frozenset[int]:
    """
    Utility-maximizing purchase sizes against ascending remaining prices.
    canonical: the largest argmax only. all: every argmax.
    """
    us = utilities(v, remaining_prices)
    top = max(us)
    if mode == "canonical":
        return frozenset({max(k for k, u in enumerate(us) if u == top)})
    return frozenset(k for k, u in enumerate(us) if u == top)


@dataclass(frozen=True)
class Purchase:
    agent: int
    quantity: int
    paid: Fraction


@dataclass(frozen=True)
class Outcome:
    allocation: Allocation
    welfare: Fraction
    revenue: Fraction
    order: tuple[int, ...]
    purchases: tuple[Purchase, ...]

    @property
    def ties(self) -> tuple[int, ...]:
        return tuple(p.quantity for p in self.purchases)

    def utilities(self, market: Market) -> tuple[Fraction, ...]:
        paid = {p.agent: p.paid for p in self.purchases}
        return tuple(
            v(q) - paid.get(i, Fraction(0))
            for i, (v, q) in enumerate(zip(market.agents, self.allocation.quantities))
        )


def _check_order(market: Market, order: Sequence[int]) -> tuple[int, ...]:
    order = tuple(order)
    if sorted(order) != list(range(market.n)):
        raise DomainError(f"Order {list(order)} is not a permutation of 0..{market.n - 1}")
    return order


def _pick(
    agent: int,
    choices: frozenset[int],
    ties: Sequence[int] | None,
    step: int,
) -> int:
    if ties is None:
        return max(choices)
    k = ties[step]
    if k not in choices:
        raise InvalidTieChoice(
            f"Step {step}: agent {agent} cannot buy {k}; utility-maximizing sizes are {sorted(choices)}"
        )
    return k


def simulate(
    market: Market,
    prices: PriceVector,
    order: Sequence[int],
    ties: Sequence[int] | None = None,
) -> Outcome:
    """
    Agents arrive in `order`; each buys its chosen quantity of the cheapest
    remaining items. ties=None uses the canonical (largest) choice.
    """
    order = _check_order(market, order)
    if prices.m != market.m:
        raise DomainError(f"{prices.m} prices for a market with {market.m} items")
    if ties is not None and len(ties) != len(order):
        raise InvalidTieChoice(f"Expected {len(order)} tie choices, got {len(ties)}")

    quantities = [0] * market.n
    purchases: list[Purchase] = []
    start = 0
    revenue = Fraction(0)
    for step, agent in enumerate(order):
        remaining = prices.suffix(start)
        choices = best_response(market.agents[agent], remaining, mode="all")
        k = _pick(agent, choices, ties, step)
        paid = sum(remaining[:k], start=Fraction(0))
        quantities[agent] = k
        purchases.append(Purchase(agent, k, paid))
        revenue += paid
        start += k

    alloc = Allocation(tuple(quantities))
    return Outcome(alloc, alloc.welfare(market), revenue, order, tuple(purchases))


def simulate_dynamic(
    market: Market,
    policy: DynamicPolicy,
    order: Sequence[int],
    ties: Sequence[int] | None = None,
) -> Outcome:
    """Same as simulate, but prices are re-posted before every arrival."""
    order = _check_order(market, order)
    if ties is not None and len(ties) != len(order):
        raise InvalidTieChoice(f"Expected {len(order)} tie choices, got {len(ties)}")

    quantities = [0] * market.n
    purchases: list[Purchase] = []
    remaining_agents = frozenset(range(market.n))
    items_left = market.m
    revenue = Fraction(0)
    for step, agent in enumerate(order):
        pv = policy.prices_for(remaining_agents, items_left)
        choices = best_response(market.agents[agent], pv.prices, mode="all")
        k = _pick(agent, choices, ties, step)
        paid = sum(pv.prices[:k], start=Fraction(0))
        quantities[agent] = k
        purchases.append(Purchase(agent, k, paid))
        revenue += paid
        items_left -= k
        remaining_agents = remaining_agents - {agent}

    alloc = Allocation(tuple(quantities))
    return Outcome(alloc, alloc.welfare(market), revenue, order, tuple(purchases))


def describe(outcome: Outcome) -> str:
    steps = ", ".join(f"agent {p.agent} buys {p.quantity}" for p in outcome.purchases)
    return f"welfare {format_rational(outcome.welfare)} [{steps}]"
