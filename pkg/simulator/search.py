from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Literal, Sequence

from market.model import Market
from simulator.dynamics import Outcome, best_response, simulate, simulate_dynamic
from simulator.prices import DynamicPolicy, PriceVector
from valuations.errors import DomainError, SizeLimit
from valuations.symmetric import SymmetricValuation

DEFAULT_MAX_AGENTS = 12
DEFAULT_MAX_ITEMS = 64
DEFAULT_MAX_ORDER_AGENTS = 8

Ties = Literal["adversarial", "canonical"]


@dataclass(frozen=True)
class WorstCaseResult:
    """Extreme welfare plus a witness (order, per-step quantities) replayable by simulate."""

    welfare: Fraction
    order: tuple[int, ...]
    ties: tuple[int, ...]
    outcome: Outcome
    states: int = 0


# -----------------------
# Helpers
# -----------------------
def _check_caps(market: Market, max_agents: int | None, max_items: int | None) -> None:
    if max_agents is not None and market.n > max_agents:
        raise SizeLimit(f"{market.n} agents exceeds the cap of {max_agents} (raise --max-n)")
    if max_items is not None and market.m > max_items:
        raise SizeLimit(f"{market.m} items exceeds the cap of {max_items}")


def _check_prices(market: Market, prices: PriceVector) -> None:
    if prices.m != market.m:
        raise DomainError(f"{prices.m} prices for a market with {market.m} items")


def _agent_types(market: Market) -> tuple[list[SymmetricValuation], list[list[int]]]:
    """Groups agents with equal valuations; members listed by index."""
    types: list[SymmetricValuation] = []
    members: list[list[int]] = []
    index: dict[SymmetricValuation, int] = {}
    for i, v in enumerate(market.agents):
        t = index.get(v)
        if t is None:
            t = len(types)
            index[v] = t
            types.append(v)
            members.append([])
        members[t].append(i)
    return types, members


class _ResponseTable:
    """best_response per (agent type, suffix start); agents with equal valuations share entries."""

    def __init__(self, market: Market, prices: PriceVector, ties: Ties):
        self.prices = prices
        self.mode = "all" if ties == "adversarial" else "canonical"
        self.types, self.members = _agent_types(market)
        self.type_of = [0] * market.n
        for t, ms in enumerate(self.members):
            for i in ms:
                self.type_of[i] = t
        self._cache: dict[tuple[int, int], tuple[int, ...]] = {}

    def by_type(self, t: int, start: int) -> tuple[int, ...]:
        key = (t, start)
        hit = self._cache.get(key)
        if hit is None:
            v = self.types[t]
            hit = tuple(sorted(best_response(v, self.prices.suffix(start), mode=self.mode)))
            self._cache[key] = hit
        return hit

    def by_agent(self, agent: int, start: int) -> tuple[int, ...]:
        return self.by_type(self.type_of[agent], start)


# -----------------------
# Static prices
# -----------------------
def worst_case_welfare(
    market: Market,
    prices: PriceVector,
    ties: Ties = "adversarial",
    max_agents: int | None = DEFAULT_MAX_AGENTS,
    max_items: int | None = DEFAULT_MAX_ITEMS,
) -> WorstCaseResult:
    """
    Minimum welfare over every arrival order and every utility-maximizing
    purchase size. Purchases always take the cheapest remaining items, so
    the unsold stock is a suffix of the ascending price list and a state is
    (remaining agents, suffix start). Agents with equal valuations are
    interchangeable: remaining agents are kept as counts per valuation.
    """
    _check_caps(market, max_agents, max_items)
    _check_prices(market, prices)
    m = market.m
    response = _ResponseTable(market, prices, ties)
    types, members = response.types, response.members
    memo: dict[tuple[tuple[int, ...], int], tuple[Fraction, int, int]] = {}

    def solve(counts: tuple[int, ...], start: int) -> Fraction:
        key = (counts, start)
        hit = memo.get(key)
        if hit is not None:
            return hit[0]
        if start == m or not any(counts):
            memo[key] = (Fraction(0), -1, 0)
            return Fraction(0)
        best: tuple[Fraction, int, int] | None = None
        for t, c in enumerate(counts):
            if c == 0:
                continue
            v = types[t]
            rest = counts[:t] + (c - 1,) + counts[t + 1:]
            for k in response.by_type(t, start):
                val = v(k) + solve(rest, start + k)
                if best is None or val < best[0]:
                    best = (val, t, k)
        assert best is not None
        memo[key] = best
        return best[0]

    counts0 = tuple(len(ms) for ms in members)
    welfare = solve(counts0, 0)

    # witness: follow the stored choices, then let leftover agents arrive empty-handed
    order: list[int] = []
    tie_choices: list[int] = []
    pools = [list(ms) for ms in members]
    counts, start = counts0, 0
    while True:
        _, t, k = memo[(counts, start)]
        if t < 0:
            break
        order.append(pools[t].pop(0))
        tie_choices.append(k)
        counts = counts[:t] + (counts[t] - 1,) + counts[t + 1:]
        start += k
    for pool in pools:
        for agent in pool:
            order.append(agent)
            tie_choices.append(0)
    outcome = simulate(market, prices, order, tie_choices)
    return WorstCaseResult(welfare, tuple(order), tuple(tie_choices), outcome, len(memo))


def worst_case_for_order(
    market: Market,
    prices: PriceVector,
    order: Sequence[int],
    ties: Ties = "adversarial",
) -> WorstCaseResult:
    """Arrival order fixed in advance; only the tie choices are adversarial."""
    _check_prices(market, prices)
    order = tuple(order)
    if sorted(order) != list(range(market.n)):
        raise DomainError(f"Order {list(order)} is not a permutation of 0..{market.n - 1}")
    m, last = market.m, len(order)
    response = _ResponseTable(market, prices, ties)
    memo: dict[tuple[int, int], tuple[Fraction, int]] = {}

    # only states reachable from (0, 0) are visited
    def solve(pos: int, start: int) -> Fraction:
        key = (pos, start)
        hit = memo.get(key)
        if hit is not None:
            return hit[0]
        if pos == last or start == m:
            memo[key] = (Fraction(0), 0)
            return Fraction(0)
        agent = order[pos]
        v = market.agents[agent]
        best: tuple[Fraction, int] | None = None
        for k in response.by_agent(agent, start):
            val = v(k) + solve(pos + 1, start + k)
            if best is None or val < best[0]:
                best = (val, k)
        assert best is not None
        memo[key] = best
        return best[0]

    welfare = solve(0, 0)

    tie_choices: list[int] = []
    start = 0
    for pos in range(len(order)):
        k = memo[(pos, start)][1] if (pos, start) in memo else 0
        tie_choices.append(k)
        start += k
    outcome = simulate(market, prices, order, tie_choices)
    return WorstCaseResult(welfare, order, tuple(tie_choices), outcome, len(memo))


def best_case_welfare(
    market: Market,
    prices: PriceVector,
    ties: Ties = "adversarial",
    max_order_agents: int | None = DEFAULT_MAX_ORDER_AGENTS,
    max_items: int | None = DEFAULT_MAX_ITEMS,
) -> WorstCaseResult:
    """
    The seller fixes the arrival order up front; ties stay adversarial.
    Exact maximum over all n! orders, so the agent cap is
    max_order_agents (8 by default, PRICING_MAX_ORDER_AGENTS in the CLI)
    rather than the 12 used by worst_case_welfare; SizeLimit above it.
    """
    _check_caps(market, max_order_agents, max_items)
    _check_prices(market, prices)
    best: WorstCaseResult | None = None
    for order in permutations(range(market.n)):
        res = worst_case_for_order(market, prices, order, ties=ties)
        if best is None or res.welfare > best.welfare:
            best = res
    assert best is not None
    return best


# -----------------------
# Dynamic prices
# -----------------------
def worst_case_welfare_dynamic(
    market: Market,
    policy: DynamicPolicy,
    ties: Ties = "adversarial",
    max_agents: int | None = DEFAULT_MAX_AGENTS,
    max_items: int | None = DEFAULT_MAX_ITEMS,
) -> WorstCaseResult:
    """Minimum over orders and ties when prices are re-posted every round."""
    _check_caps(market, max_agents, max_items)
    mode = "all" if ties == "adversarial" else "canonical"
    full = (1 << market.n) - 1
    memo: dict[tuple[int, int], tuple[Fraction, int, int]] = {}

    def solve(mask: int, items_left: int) -> Fraction:
        key = (mask, items_left)
        hit = memo.get(key)
        if hit is not None:
            return hit[0]
        if mask == 0:
            memo[key] = (Fraction(0), -1, 0)
            return Fraction(0)
        remaining = frozenset(i for i in range(market.n) if mask >> i & 1)
        pv = policy.prices_for(remaining, items_left)
        best: tuple[Fraction, int, int] | None = None
        for i in sorted(remaining):
            v = market.agents[i]
            for k in sorted(best_response(v, pv.prices, mode=mode)):
                val = v(k) + solve(mask & ~(1 << i), items_left - k)
                if best is None or val < best[0]:
                    best = (val, i, k)
        assert best is not None
        memo[key] = best
        return best[0]

    welfare = solve(full, market.m)
    order: list[int] = []
    tie_choices: list[int] = []
    mask, items_left = full, market.m
    while mask:
        _, i, k = memo[(mask, items_left)]
        order.append(i)
        tie_choices.append(k)
        mask &= ~(1 << i)
        items_left -= k
    outcome = simulate_dynamic(market, policy, order, tie_choices)
    return WorstCaseResult(welfare, tuple(order), tuple(tie_choices), outcome, len(memo))


# -----------------------
# Brute-force oracles
# -----------------------
def _explore(
    market: Market,
    prices: PriceVector,
    order: Sequence[int],
    pos: int,
    start: int,
) -> list[Fraction]:
    if pos == len(order):
        return [Fraction(0)]
    v = market.agents[order[pos]]
    out: list[Fraction] = []
    for k in best_response(v, prices.suffix(start), mode="all"):
        out.extend(v(k) + w for w in _explore(market, prices, order, pos + 1, start + k))
    return out


def naive_worst_case(market: Market, prices: PriceVector) -> Fraction:
    """Every order times every tie branch, no memo. Small markets only."""
    _check_prices(market, prices)
    return min(
        min(_explore(market, prices, order, 0, 0))
        for order in permutations(range(market.n))
    )


def naive_best_case(market: Market, prices: PriceVector) -> Fraction:
    _check_prices(market, prices)
    return max(
        min(_explore(market, prices, order, 0, 0))
        for order in permutations(range(market.n))
    )


def subset_best_utility(v: SymmetricValuation, remaining_prices: Sequence[Fraction]) -> Fraction:
    """Best utility over every subset of the remaining items."""
    best = Fraction(0)
    items = list(remaining_prices)
    for k in range(1, len(items) + 1):
        for subset in combinations(items, k):
            best = max(best, v(k) - sum(subset, start=Fraction(0)))
    return best
