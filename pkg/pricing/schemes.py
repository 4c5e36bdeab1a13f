from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Sequence

from market.model import Market
from market.profile import MarginalProfile, marginal_profile, market_profile, unit_demand_reduction
from market.welfare import optimal_welfare
from simulator.prices import DynamicPolicy, PriceVector, constant_policy, from_counts, uniform_prices
from simulator.search import (
    DEFAULT_MAX_AGENTS,
    DEFAULT_MAX_ITEMS,
    DEFAULT_MAX_ORDER_AGENTS,
    WorstCaseResult,
    worst_case_for_order,
    worst_case_welfare,
    worst_case_welfare_dynamic,
)
from valuations.envelopes import minimal_submodular_envelope
from valuations.errors import (
    InsufficientDemand,
    NotSubadditive,
    NotSubmodular,
    NotTwoIdentical,
    PolicyDomainError,
    UnknownId,
)
from valuations.rationals import format_rational
from valuations.symmetric import is_subadditive, is_submodular


@dataclass(frozen=True)
class Limits:
    max_agents: int | None = DEFAULT_MAX_AGENTS
    max_items: int | None = DEFAULT_MAX_ITEMS
    max_order_agents: int | None = DEFAULT_MAX_ORDER_AGENTS


@dataclass(frozen=True)
class Candidate:
    """
    One pricing to evaluate. order=None means the adversary picks the
    arrival order; a fixed order leaves only the tie choices adversarial.
    proof_bound is the welfare floor the construction argues for, if any.
    """

    label: str
    prices: PriceVector | None = None
    policy: DynamicPolicy | None = None
    order: tuple[int, ...] | None = None
    proof_bound: Fraction | None = None
    result: WorstCaseResult | None = None

    @property
    def welfare(self) -> Fraction:
        if self.result is None:
            raise RuntimeError(f"Candidate {self.label} has not been evaluated")
        return self.result.welfare

    def describe(self) -> str:
        if self.prices is not None:
            return str(self.prices)
        return self.policy.name if self.policy is not None else self.label


@dataclass(frozen=True)
class SchemeResult:
    scheme: str
    candidates: tuple[Candidate, ...]
    chosen: int
    guarantee: Fraction
    opt: Fraction
    profile: MarginalProfile | None = None
    fallback: bool = False

    @property
    def chosen_candidate(self) -> Candidate:
        return self.candidates[self.chosen]

    @property
    def welfare(self) -> Fraction:
        return self.chosen_candidate.welfare

    @property
    def chosen_prices(self) -> PriceVector | None:
        return self.chosen_candidate.prices

    @property
    def chosen_order(self) -> tuple[int, ...]:
        c = self.chosen_candidate
        if c.order is not None:
            return c.order
        assert c.result is not None
        return c.result.order

    @property
    def meets_guarantee(self) -> bool:
        return self.welfare >= self.guarantee * self.opt


# -----------------------
# Evaluation
# -----------------------
def evaluate_candidate(market: Market, cand: Candidate, limits: Limits = Limits()) -> Candidate:
    if cand.result is not None:
        return cand
    if cand.policy is not None:
        res = worst_case_welfare_dynamic(
            market, cand.policy, max_agents=limits.max_agents, max_items=limits.max_items
        )
    elif cand.order is not None:
        res = worst_case_for_order(market, cand.prices, cand.order)
    else:
        res = worst_case_welfare(
            market, cand.prices, max_agents=limits.max_agents, max_items=limits.max_items
        )
    return replace(cand, result=res)


def _finish(
    scheme: str,
    market: Market,
    candidates: Sequence[Candidate],
    guarantee: Fraction,
    opt: Fraction,
    limits: Limits,
    profile: MarginalProfile | None = None,
    fallback: bool = False,
) -> SchemeResult:
    evaluated = tuple(evaluate_candidate(market, c, limits) for c in candidates)
    chosen = max(range(len(evaluated)), key=lambda i: (evaluated[i].welfare, -i))
    return SchemeResult(scheme, evaluated, chosen, guarantee, opt, profile, fallback)


def _require_submodular(market: Market) -> None:
    for idx, v in enumerate(market.agents):
        if not is_submodular(v):
            raise NotSubmodular(f"Agent {idx} does not have decreasing marginal values")


def _require_subadditive(market: Market) -> None:
    for idx, v in enumerate(market.agents):
        if not is_subadditive(v):
            raise NotSubadditive(f"Agent {idx} is not subadditive")


def _fallback(
    scheme: str,
    market: Market,
    err: InsufficientDemand,
    guarantee: Fraction,
    opt: Fraction,
    limits: Limits,
) -> SchemeResult:
    # fewer positive marginals than items: a uniform epsilon sells every one of them
    cand = Candidate("uniform eps", uniform_prices(err.epsilon, market.m))
    return _finish(scheme, market, [cand], guarantee, opt, limits, fallback=True)


# -----------------------
# Submodular agents
# -----------------------
def scheme_submodular_23(market: Market, limits: Limits = Limits()) -> SchemeResult:
    """
    P1: b-eps on every item. P2: b-eps on m-m' items, b+eps on m'.
    The profile comes from the unit-demand reduction; candidates are
    evaluated on the market itself.
    """
    reduced = unit_demand_reduction(market)
    opt, _ = optimal_welfare(market)
    m = market.m
    try:
        prof = market_profile(reduced)
    except InsufficientDemand as e:
        return _fallback("submod23", market, e, Fraction(2, 3), opt, limits)

    lo, hi = prof.b - prof.epsilon, prof.b + prof.epsilon
    candidates = [
        Candidate("P1", uniform_prices(lo, m), proof_bound=m * prof.b),
        Candidate("P2", from_counts([(m - prof.m_prime, lo), (prof.m_prime, hi)])),
    ]
    return _finish("submod23", market, candidates, Fraction(2, 3), opt, limits, prof)


def scheme_submodular_57(market: Market, limits: Limits = Limits()) -> SchemeResult:
    reduced = unit_demand_reduction(market)
    opt, _ = optimal_welfare(market)
    m = market.m
    guarantee = Fraction(5, 7) - Fraction(1, m) if m else Fraction(0)
    try:
        prof = market_profile(reduced)
    except InsufficientDemand as e:
        return _fallback("submod57", market, e, guarantee, opt, limits)

    b, eps, mp = prof.b, prof.epsilon, prof.m_prime
    lo, hi = b - eps, b + eps
    k = sum(1 for x in prof.V if x >= 2 * b)
    half = math.ceil(mp / 2)
    candidates = [
        Candidate("P1", uniform_prices(lo, m), proof_bound=m * b),
        Candidate("P2", from_counts([(m - mp, lo), (mp, hi)])),
        Candidate("P3", from_counts([(m - k, lo), (k, 2 * b - eps)])),
        Candidate("P4", from_counts([(m - half, lo), (half, hi)])),
    ]
    return _finish("submod57", market, candidates, guarantee, opt, limits, prof)


def _known_order_cheap_count(prof: MarginalProfile, order: Sequence[int]) -> int:
    # b-valued units go greedily to the earliest arrivals
    left = prof.m - sum(prof.k)
    cheap = 0
    for agent in order:
        if left <= 0:
            break
        take = min(prof.y[agent], left)
        cheap += prof.k[agent] + take
        left -= take
    return cheap


def scheme_known_order(market: Market, order: Sequence[int]) -> PriceVector:
    """
    Prices that reach OPT when the arrival order is known: the items of
    every arrival up to the last one receiving a b-valued unit cost b-eps,
    the rest cost b+eps.
    """
    _require_submodular(market)
    try:
        prof = market_profile(market)
    except InsufficientDemand as e:
        return uniform_prices(e.epsilon, market.m)
    cheap = _known_order_cheap_count(prof, order)
    return from_counts(
        [(cheap, prof.b - prof.epsilon), (market.m - cheap, prof.b + prof.epsilon)]
    )


def known_order_result(
    market: Market,
    order: Sequence[int] | None = None,
    limits: Limits = Limits(),
) -> SchemeResult:
    order = tuple(range(market.n)) if order is None else tuple(order)
    prices = scheme_known_order(market, order)
    opt, _ = optimal_welfare(market)
    cand = Candidate("known order", prices, order=order, proof_bound=opt)
    return _finish("known-order", market, [cand], Fraction(1), opt, limits)


def scheme_uniform_half(market: Market, limits: Limits = Limits()) -> SchemeResult:
    _require_submodular(market)
    opt, _ = optimal_welfare(market)
    m = market.m
    try:
        prof = market_profile(market)
    except InsufficientDemand as e:
        return _fallback("uniform-half", market, e, Fraction(1, 2), opt, limits)
    candidates = [
        Candidate("b-eps", uniform_prices(prof.b - prof.epsilon, m), proof_bound=m * prof.b),
        Candidate(
            "b+eps",
            uniform_prices(prof.b + prof.epsilon, m),
            proof_bound=opt - (m - prof.m_prime) * prof.b,
        ),
    ]
    return _finish("uniform-half", market, candidates, Fraction(1, 2), opt, limits, prof)


def dynamic_policy_submodular(market: Market) -> DynamicPolicy:
    """
    With X the remaining agents and l the remaining items, let
    gap = l - sum_{j in X} k_j. If some agent in X has y_i > gap, post b-eps
    on min_{y_i > gap} k_i + gap items and b+eps on the rest; otherwise
    every item costs b-eps.
    """
    _require_submodular(market)
    try:
        prof = market_profile(market)
    except InsufficientDemand as e:
        return replace(constant_policy(uniform_prices(e.epsilon, market.m)), name="uniform eps")

    lo, hi = prof.b - prof.epsilon, prof.b + prof.epsilon

    def rule(remaining: frozenset, items_left: int) -> PriceVector:
        gap = items_left - sum(prof.k[j] for j in remaining)
        slack = sum(prof.y[j] for j in remaining)
        if gap < 0 or gap > slack:
            raise PolicyDomainError(
                f"Remaining items {items_left} outside [{items_left - gap}, {items_left - gap + slack}] "
                f"for agents {sorted(remaining)}"
            )
        tight = [prof.k[i] for i in remaining if prof.y[i] > gap]
        if not tight:
            return uniform_prices(lo, items_left)
        cheap = min(tight) + gap
        return from_counts([(cheap, lo), (items_left - cheap, hi)])

    return DynamicPolicy(rule, name="dynamic b+-eps")


def dynamic_submod_result(market: Market, limits: Limits = Limits()) -> SchemeResult:
    policy = dynamic_policy_submodular(market)
    opt, _ = optimal_welfare(market)
    cand = Candidate("dynamic", policy=policy, proof_bound=opt)
    return _finish("dynamic-submod", market, [cand], Fraction(1), opt, limits)


# -----------------------
# Subadditive agents
# -----------------------
def _envelope_profile(market: Market) -> MarginalProfile:
    envelopes = [minimal_submodular_envelope(v) for v in market.agents]
    return marginal_profile(market.m, envelopes)


def scheme_subadditive_third(market: Market, limits: Limits = Limits()) -> SchemeResult:
    """Uniform b+eps and uniform b/2, with b taken over the submodular envelopes."""
    _require_subadditive(market)
    opt, _ = optimal_welfare(market)
    m = market.m
    try:
        prof = _envelope_profile(market)
    except InsufficientDemand as e:
        candidates = [
            Candidate("uniform eps", uniform_prices(e.epsilon, m)),
            Candidate("uniform 0", uniform_prices(0, m)),
        ]
        return _finish("subadd13", market, candidates, Fraction(1, 3), opt, limits, fallback=True)
    candidates = [
        Candidate("b+eps", uniform_prices(prof.b + prof.epsilon, m)),
        Candidate("b/2", uniform_prices(prof.b / 2, m), proof_bound=m * prof.b / 2),
    ]
    return _finish("subadd13", market, candidates, Fraction(1, 3), opt, limits, prof)


def scheme_two_identical_subadditive(market: Market, limits: Limits = Limits()) -> SchemeResult:
    if market.n != 2 or market.agents[0] != market.agents[1]:
        raise NotTwoIdentical(f"Needs exactly two agents with equal valuations, got n={market.n}")
    _require_subadditive(market)
    opt, _ = optimal_welfare(market)
    m = market.m
    price = opt / (3 * m) if m else Fraction(0)
    cand = Candidate("OPT/3m", uniform_prices(price, m))
    return _finish("subadd-2iden", market, [cand], Fraction(2, 3), opt, limits)


# -----------------------
# General agents
# -----------------------
def _achievable_averages(market: Market) -> set[Fraction]:
    return {v(q) / q for v in market.agents for q in range(1, market.m + 1)}


def scheme_general_1m(market: Market, limits: Limits = Limits()) -> SchemeResult:
    """
    beta is the best per-item value among agents served by the optimal
    allocation; price beta-eps, with eps half the distance from beta to the
    next lower achievable per-item value.
    """
    opt, alloc = optimal_welfare(market)
    m = market.m
    served = [
        market.agents[i](q) / q for i, q in enumerate(alloc.quantities) if q > 0
    ]
    beta = max(served, default=Fraction(0))
    if beta == 0:
        price = Fraction(0)
    else:
        below = [a for a in _achievable_averages(market) if a < beta]
        eps = (beta - max(below)) / 2 if below else beta / 2
        price = beta - eps
    guarantee = Fraction(1, m) if m else Fraction(1)
    cand = Candidate("beta-eps", uniform_prices(price, m), proof_bound=beta)
    return _finish("general-1m", market, [cand], guarantee, opt, limits)


def _refined_epsilon(market: Market, prof: MarginalProfile) -> Fraction:
    # every purchase increment whose average is below b stays below b-eps
    eps = prof.epsilon
    b = prof.b
    for v in market.agents:
        for i in range(market.m + 1):
            for j in range(i + 1, market.m + 1):
                slack = b - (v(j) - v(i)) / (j - i)
                if slack > 0:
                    eps = min(eps, slack / 2)
    return eps


def scheme_general_best_order(market: Market, limits: Limits = Limits()) -> SchemeResult:
    """
    P1: uniform b+eps under any order. P2: uniform b-eps, once with the
    identity order and once with an agent that still values the unsold
    stock at b or more moved to the front.
    """
    opt, _ = optimal_welfare(market)
    m = market.m
    envelopes = [minimal_submodular_envelope(v) for v in market.agents]
    try:
        prof = marginal_profile(m, envelopes)
    except InsufficientDemand as e:
        cand = Candidate("uniform eps", uniform_prices(e.epsilon, m))
        return _finish("general-best-order", market, [cand], Fraction(1, 2), opt, limits, fallback=True)

    eps = _refined_epsilon(market, prof)
    lo = uniform_prices(prof.b - eps, m)
    identity = tuple(range(market.n))
    p1 = Candidate("P1", uniform_prices(prof.b + eps, m))
    p2 = evaluate_candidate(market, Candidate("P2 identity", lo, order=identity), limits)
    candidates = [p1, p2]

    sold = p2.result.outcome.allocation.total
    if 0 < sold < m:
        # an agent whose (m-sold+1)-th envelope marginal is still at least b
        first = next(
            (i for i, u in enumerate(envelopes) if u.marginal(m - sold + 1) >= prof.b),
            None,
        )
        if first is not None:
            order = (first,) + tuple(i for i in identity if i != first)
            candidates.append(Candidate(f"P2 agent {first} first", lo, order=order))
    return _finish("general-best-order", market, candidates, Fraction(1, 2), opt, limits, prof)


# -----------------------
# Registry
# -----------------------
SchemeFn = Callable[..., SchemeResult]

SCHEMES: dict[str, SchemeFn] = {
    "submod23": lambda market, order=None, limits=Limits(): scheme_submodular_23(market, limits),
    "submod57": lambda market, order=None, limits=Limits(): scheme_submodular_57(market, limits),
    "known-order": lambda market, order=None, limits=Limits(): known_order_result(market, order, limits),
    "uniform-half": lambda market, order=None, limits=Limits(): scheme_uniform_half(market, limits),
    "dynamic-submod": lambda market, order=None, limits=Limits(): dynamic_submod_result(market, limits),
    "subadd13": lambda market, order=None, limits=Limits(): scheme_subadditive_third(market, limits),
    "subadd-2iden": lambda market, order=None, limits=Limits(): scheme_two_identical_subadditive(market, limits),
    "general-1m": lambda market, order=None, limits=Limits(): scheme_general_1m(market, limits),
    "general-best-order": lambda market, order=None, limits=Limits(): scheme_general_best_order(market, limits),
}


def run_scheme(
    scheme_id: str,
    market: Market,
    order: Sequence[int] | None = None,
    limits: Limits = Limits(),
) -> SchemeResult:
    fn = SCHEMES.get(scheme_id)
    if fn is None:
        raise UnknownId(f"Unknown scheme '{scheme_id}'. Known: {', '.join(SCHEMES)}")
    return fn(market, order=order, limits=limits)


def summarize(result: SchemeResult) -> str:
    c = result.chosen_candidate
    return (
        f"{result.scheme}: {c.label} {c.describe()} -> welfare {format_rational(c.welfare)} "
        f"(OPT {format_rational(result.opt)}, guarantee {format_rational(result.guarantee)})"
    )
