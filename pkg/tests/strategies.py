from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from bayesian.distributions import AgentDistribution, SupportPoint, ValuationDistribution
from market.model import Market
from simulator.prices import PriceVector
from valuations.symmetric import SymmetricValuation, from_marginals, is_subadditive, make_valuation

small = st.integers(min_value=0, max_value=6)
half_steps = st.integers(min_value=0, max_value=12).map(lambda k: Fraction(k, 2))


@st.composite
def submodular_valuations(draw, m: int) -> SymmetricValuation:
    marg = draw(st.lists(small, min_size=m, max_size=m))
    return from_marginals(sorted(marg, reverse=True))


@st.composite
def general_valuations(draw, m: int) -> SymmetricValuation:
    steps = draw(st.lists(small, min_size=m, max_size=m))
    return from_marginals(steps)


@st.composite
def xos_valuations(draw, m: int) -> SymmetricValuation:
    # max of capped additive clauses
    clauses = draw(st.lists(st.tuples(st.integers(1, max(m, 1)), st.integers(1, 6)), min_size=1, max_size=3))
    return make_valuation([max(min(i, c) * w for c, w in clauses) for i in range(m + 1)])


@st.composite
def _monotone_from_base(draw, m: int) -> SymmetricValuation:
    base = draw(st.integers(1, 6))
    steps = draw(st.lists(st.integers(0, base), min_size=max(m - 1, 0), max_size=max(m - 1, 0)))
    values = [0, base]
    for s in steps:
        values.append(values[-1] + s)
    return make_valuation(values[: m + 1])


def subadditive_valuations(m: int) -> st.SearchStrategy[SymmetricValuation]:
    return _monotone_from_base(m).filter(is_subadditive)


KINDS = {
    "submodular": submodular_valuations,
    "general": general_valuations,
    "xos": xos_valuations,
    "subadditive": subadditive_valuations,
}


@st.composite
def markets(draw, kind: str = "general", max_n: int = 3, max_m: int = 4, min_m: int = 1) -> Market:
    m = draw(st.integers(min_m, max_m))
    n = draw(st.integers(1, max_n))
    agents = tuple(draw(KINDS[kind](m)) for _ in range(n))
    return Market(m, agents)


@st.composite
def markets_with_prices(draw, kind: str = "general", max_n: int = 3, max_m: int = 4):
    market = draw(markets(kind, max_n, max_m))
    prices = draw(st.lists(half_steps, min_size=market.m, max_size=market.m))
    return market, PriceVector(tuple(sorted(prices)))


@st.composite
def xos_distributions(draw, max_n: int = 2, max_m: int = 3) -> ValuationDistribution:
    # two support points per agent, probabilities in quarters
    m = draw(st.integers(1, max_m))
    n = draw(st.integers(1, max_n))
    agents = []
    for _ in range(n):
        p = Fraction(draw(st.integers(1, 3)), 4)
        low, high = draw(xos_valuations(m)), draw(xos_valuations(m))
        agents.append(AgentDistribution((SupportPoint(p, low), SupportPoint(1 - p, high))))
    return ValuationDistribution(m, tuple(agents), name="drawn-xos")
