from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from bayesian.distributions import ValuationDistribution, bayes_lower
from instances.grids import all_sorted_vectors, around, default_counts, two_level_grid, uniform_grid
from market.model import Market
from simulator.prices import PriceVector, from_counts, uniform_prices
from valuations.errors import BadParams, UnknownId
from valuations.symmetric import (
    SymmetricValuation,
    ValuationClass,
    additive,
    make_valuation,
    single_minded,
    unit_demand,
)

# -----------------------
# Bound kinds
# -----------------------
UPPER_ALL_STATIC = "upper-on-all-static"
UPPER_UNIFORM_STATIC = "upper-on-uniform-static"
UPPER_KNOWN_ORDER = "upper-on-known-order"
UPPER_DYNAMIC = "upper-on-dynamic"
UPPER_BEST_ORDER = "upper-on-best-order"
UPPER_BAYESIAN = "upper-on-bayesian"
ENVELOPE_GAP = "envelope-gap"
WORKED_EXAMPLE = "worked-example"

# e to 20 decimals; only the 1-1/e instance uses it
E_RATIONAL = Fraction("2.71828182845904523536")
TOLERANCE = Fraction(1, 1000)

S, X, SA, G = (
    ValuationClass.SUBMODULAR,
    ValuationClass.XOS,
    ValuationClass.SUBADDITIVE,
    ValuationClass.GENERAL,
)


@dataclass(frozen=True)
class NamedInstance:
    """
    A construction with the welfare it claims no pricing can beat.

    welfare_cap: exact upper bound on the measured welfare for every grid vector.
    claimed_bound: the ratio the construction certifies (welfare_cap / opt when exact).
    headline_ratio / tolerance: for instances with irrational data, the
    measured ratio must stay within headline_ratio + tolerance.
    """

    id: str
    params: dict[str, Any]
    anchor: str
    bound_kind: str
    opt: Fraction
    claimed_bound: Fraction
    market: Market | None = None
    distribution: ValuationDistribution | None = None
    welfare_cap: Fraction | None = None
    headline_ratio: Fraction | None = None
    tolerance: Fraction = Fraction(0)
    price_grid: tuple[PriceVector, ...] = ()
    adversary_orders: tuple[tuple[int, ...], ...] = ()
    agent_classes: tuple[ValuationClass, ...] = ()
    envelope_target: SymmetricValuation | None = None
    envelope_kind: str | None = None
    expected_factor: Fraction | None = None
    notes: str = ""
    extra: dict[str, Any] = field(default_factory=dict)


def _market(m: int, *agents: SymmetricValuation) -> Market:
    return Market(m, tuple(agents))


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise BadParams(msg)


# -----------------------
# Worked examples
# -----------------------
def intro_example() -> NamedInstance:
    v = make_valuation([0, 5, 9, 11])
    return NamedInstance(
        id="intro_example",
        params={},
        anchor="uniform price 4 loses 4 of 14",
        bound_kind=WORKED_EXAMPLE,
        market=_market(3, v, v),
        opt=Fraction(14),
        claimed_bound=Fraction(10, 14),
        welfare_cap=Fraction(10),
        price_grid=(uniform_prices(4, 3),),
        agent_classes=(S, S),
        extra={"first_argmax": frozenset({1, 2}), "replay_ties": (2, 1), "replay_welfare": Fraction(14)},
    )


def prelim_example() -> NamedInstance:
    return NamedInstance(
        id="prelim_example",
        params={},
        anchor="V = 5,4,2,2,2,1; OPT 11",
        bound_kind=WORKED_EXAMPLE,
        market=_market(3, make_valuation([0, 5, 9, 11]), make_valuation([0, 2, 4, 5])),
        opt=Fraction(11),
        claimed_bound=Fraction(5, 11),
        welfare_cap=Fraction(5),
        price_grid=(uniform_prices(4, 3),),
        agent_classes=(S, S),
        extra={
            "V": tuple(Fraction(x) for x in (5, 4, 2, 2, 2, 1)),
            "delta": Fraction(1),
            "epsilon": Fraction(1, 2),
            "b": Fraction(2),
            "m_prime": 2,
            "G": 2,
            "E": 3,
        },
    )


# -----------------------
# Submodular lower bounds
# -----------------------
def submod_2item() -> NamedInstance:
    levels = [Fraction(x, 2) for x in range(6)]
    return NamedInstance(
        id="submod_2item",
        params={},
        anchor="worst case <= 2/3 OPT for every pricing",
        bound_kind=UPPER_ALL_STATIC,
        market=_market(2, unit_demand(2, 2), additive(1, 2)),
        opt=Fraction(3),
        welfare_cap=Fraction(2),
        claimed_bound=Fraction(2, 3),
        price_grid=tuple(all_sorted_vectors(levels, 2)),
        agent_classes=(S, ValuationClass.ADDITIVE),
    )


def beta_root(tol: Fraction = Fraction(1, 10**12)) -> Fraction:
    """Root of x^3 - 2x^2 - x + 1 in [2, 3], bracketed by bisection."""
    lo, hi = Fraction(2), Fraction(3)

    def f(x: Fraction) -> Fraction:
        return x**3 - 2 * x**2 - x + 1

    while hi - lo > tol:
        mid = (lo + hi) / 2
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def submod_0802(m: int = 100) -> NamedInstance:
    """
    m unit-demand agents with value 1, floor(alpha*m) with value beta.
    Verified along the two adversarial orders (beta agents first, value-1
    agents first); the measured ratio must stay within 0.802 + tolerance.
    """
    _need(m >= 100, f"submod_0802 needs m >= 100 for the ratio to approach 0.802, got {m}")
    beta = beta_root()
    alpha = 1 / (beta - 1) ** 2
    t = math.floor(alpha * m)
    agents = [unit_demand(1, m)] * m + [unit_demand(beta, m)] * t
    cut = math.floor((1 - alpha) * m)
    counts = sorted({c for c in (0, 1, cut - 1, cut, cut + 1, m - 1, m) if 0 <= c <= m})
    cheap = [Fraction(1, 2), Fraction(1)]
    dear = [(1 + beta) / 2, beta, beta + 1]
    grid = [uniform_prices(p, m) for p in cheap + dear]
    grid += [from_counts([(m - c, lo), (c, hi)]) for lo in cheap for hi in dear for c in counts]
    type1 = tuple(range(m))
    type2 = tuple(range(m, m + t))
    return NamedInstance(
        id="submod_0802",
        params={"m": m},
        anchor="worst case <= 0.802 OPT for every pricing",
        bound_kind=UPPER_ALL_STATIC,
        market=Market(m, tuple(agents)),
        opt=t * beta + (m - t),
        claimed_bound=Fraction(802, 1000),
        headline_ratio=Fraction(802, 1000),
        tolerance=TOLERANCE,
        price_grid=tuple(grid),
        adversary_orders=(type2 + type1, type1 + type2),
        agent_classes=(S,) * (m + t),
        extra={"beta": beta, "alpha": alpha, "type2_count": t},
    )


def submod_uniform_2agents(m: int = 10) -> NamedInstance:
    _need(m >= 2, f"submod_uniform_2agents needs m >= 2, got {m}")
    levels = [Fraction(1, 2), 1, Fraction(3, 2), m - Fraction(1, 2), m, m + 1]
    return NamedInstance(
        id="submod_uniform_2agents",
        params={"m": m},
        anchor="uniform worst case <= m/(2m-1) OPT",
        bound_kind=UPPER_UNIFORM_STATIC,
        market=_market(m, unit_demand(m, m), additive(1, m)),
        opt=Fraction(2 * m - 1),
        welfare_cap=Fraction(m),
        claimed_bound=Fraction(m, 2 * m - 1),
        price_grid=tuple(uniform_grid(levels, m)),
        agent_classes=(S, ValuationClass.ADDITIVE),
    )


def submod_identical(n: int = 3) -> NamedInstance:
    _need(n >= 2, f"submod_identical needs n >= 2, got {n}")
    m = n * n
    v = make_valuation([0] + [n + i for i in range(1, m + 1)])
    levels = [Fraction(1, 2), 1, Fraction(3, 2), n, n + 1, n + 2]
    return NamedInstance(
        id="submod_identical",
        params={"n": n},
        anchor="uniform worst case <= (n+1)/(2n) OPT",
        bound_kind=UPPER_UNIFORM_STATIC,
        market=Market(m, (v,) * n),
        opt=Fraction(2 * n * n),
        welfare_cap=Fraction(n * n + n),
        claimed_bound=Fraction(n + 1, 2 * n),
        price_grid=tuple(uniform_grid(levels, m)),
        agent_classes=(S,) * n,
    )


# -----------------------
# XOS lower bounds
# -----------------------
def xos_static_1e(m: int = 1000) -> NamedInstance:
    """
    Agent 0 is XOS (flat at k up to k items, then i); agent 1 is submodular
    with marginals (m-k-j)/(m-1-j). With agent 1 first, agent 0 buys at
    most one item under any static prices.
    """
    _need(m >= 6, f"xos_static_1e needs m >= 6, got {m}")
    k = math.floor(m / E_RATIONAL)
    v1 = make_valuation([0] + [k if i < k else i for i in range(1, m + 1)])
    marg = [Fraction(m - k - j, m - 1 - j) for j in range(m - k)] + [Fraction(0)] * k
    v2_values = [Fraction(0)]
    for d in marg:
        v2_values.append(v2_values[-1] + d)
    v2 = make_valuation(v2_values)
    cap = v1(1) + v2(m)
    # agent 1's marginals as prices, cheapest first, unsold tail at 1
    follow = from_counts([(1, d) for d in marg[: m - k]] + [(k, 1)])
    levels = [Fraction(1, 2), marg[0], 1, 2]
    grid = uniform_grid(levels, m) + [follow]
    grid += [from_counts([(m - c, Fraction(1, 2)), (c, 2)]) for c in (1, k, m - k)]
    return NamedInstance(
        id="xos_static_1e",
        params={"m": m},
        anchor="static worst case -> (1-1/e) OPT",
        bound_kind=UPPER_ALL_STATIC,
        market=_market(m, v1, v2),
        opt=Fraction(m),
        welfare_cap=cap,
        claimed_bound=cap / m,
        # the 1-1/e ratio only holds asymptotically
        headline_ratio=1 - 1 / E_RATIONAL if m >= 500 else None,
        tolerance=TOLERANCE if m >= 500 else Fraction(0),
        price_grid=tuple(grid),
        adversary_orders=((1, 0),),
        agent_classes=(X, S),
        extra={"k": k},
    )


def xos_dynamic_56() -> NamedInstance:
    # the unit-demand value and the XOS marginals are the region boundaries
    levels = around([1, 2, 4], Fraction(1, 2)) + [Fraction(5)]
    return NamedInstance(
        id="xos_dynamic_56",
        params={},
        anchor="dynamic worst case <= 5/6 OPT",
        bound_kind=UPPER_DYNAMIC,
        market=_market(3, make_valuation([0, 4, 4, 6]), unit_demand(1, 3)),
        opt=Fraction(6),
        welfare_cap=Fraction(5),
        claimed_bound=Fraction(5, 6),
        price_grid=tuple(all_sorted_vectors(levels, 3)),
        agent_classes=(X, S),
    )


# -----------------------
# Subadditive lower bounds
# -----------------------
def subadd_half(m: int = 10) -> NamedInstance:
    _need(m >= 3, f"subadd_half needs m >= 3, got {m}")
    v1 = make_valuation([0] + [1] * (m - 1) + [2])
    low = Fraction(1, m - 1)
    levels = around([low, 1], low / 2) + [Fraction(1, 2), Fraction(2)]
    return NamedInstance(
        id="subadd_half",
        params={"m": m},
        anchor="worst case <= ~1/2 OPT for every pricing",
        bound_kind=UPPER_ALL_STATIC,
        market=_market(m, v1, unit_demand(low, m)),
        opt=Fraction(2),
        welfare_cap=1 + low,
        claimed_bound=(1 + low) / 2,
        price_grid=tuple(two_level_grid(levels, m)),
        agent_classes=(SA, S),
    )


def subadd_third(m: int = 50) -> NamedInstance:
    _need(m >= 3, f"subadd_third needs m >= 3, got {m}")
    v1 = make_valuation([0] + [m - 1 + i for i in range(1, m)] + [3 * m - 2])
    levels = [Fraction(1, 2), 1, Fraction(3, 2), 2, Fraction(5, 2), 3, m]
    return NamedInstance(
        id="subadd_third",
        params={"m": m},
        anchor="uniform worst case -> 1/3 OPT",
        bound_kind=UPPER_UNIFORM_STATIC,
        market=_market(m, v1, unit_demand(2, m), additive(1, m)),
        opt=Fraction(3 * m - 2),
        welfare_cap=Fraction(m + 2),
        claimed_bound=Fraction(m + 2, 3 * m - 2),
        price_grid=tuple(uniform_grid(levels, m)),
        agent_classes=(SA, S, ValuationClass.ADDITIVE),
    )


def subadd_34_identical(m: int = 12, eps: Fraction | None = None) -> NamedInstance:
    _need(m >= 10 and m % 2 == 0, f"subadd_34_identical needs an even m >= 10, got {m}")
    eps = Fraction(1, m * m) if eps is None else Fraction(eps)
    _need(0 < eps < 1, "subadd_34_identical needs 0 < eps < 1")
    half = m // 2
    v = make_valuation(
        [0] + [Fraction(m, 4) if i < half else (half - 1 - eps if i == half else Fraction(half)) for i in range(1, m + 1)]
    )
    levels = [Fraction(1, 4), Fraction(1, 2), 1, 2, (half - 1 - eps) / half, Fraction(m, 4)]
    counts = default_counts(m) + [half - 1, half + 1]
    grid = two_level_grid(levels, m, counts) + all_sorted_vectors([Fraction(1, 2), 1, 2], m)
    return NamedInstance(
        id="subadd_34_identical",
        params={"m": m, "eps": eps},
        anchor="identical pair worst case -> 3/4 OPT",
        bound_kind=UPPER_ALL_STATIC,
        market=Market(m, (v, v)),
        opt=m - 2 - 2 * eps,
        welfare_cap=Fraction(3 * m, 4),
        claimed_bound=Fraction(3 * m, 4) / (m - 2 - 2 * eps),
        price_grid=tuple(grid),
        agent_classes=(SA, SA),
    )


def subadd_23_identical(m: int = 6) -> NamedInstance:
    _need(m >= 2, f"subadd_23_identical needs m >= 2, got {m}")
    v = make_valuation([0] + [m + i for i in range(1, m + 1)])
    levels = [Fraction(1, 2), 1, Fraction(3, 2), 2, m, m + 1, m + 2]
    return NamedInstance(
        id="subadd_23_identical",
        params={"m": m},
        anchor="identical pair, uniform worst case -> 2/3 OPT",
        bound_kind=UPPER_UNIFORM_STATIC,
        market=Market(m, (v, v)),
        opt=Fraction(3 * m),
        welfare_cap=Fraction(2 * m + 2),
        claimed_bound=Fraction(2 * m + 2, 3 * m),
        price_grid=tuple(uniform_grid(levels, m)),
        agent_classes=(S, S),
    )


# -----------------------
# General valuations
# -----------------------
def general_1m(m: int = 5) -> NamedInstance:
    _need(m >= 2, f"general_1m needs m >= 2, got {m}")
    levels = [Fraction(1, 2), 1, 2]
    return NamedInstance(
        id="general_1m",
        params={"m": m},
        anchor="worst case <= OPT/m in a known order",
        bound_kind=UPPER_KNOWN_ORDER,
        market=_market(m, unit_demand(1, m), single_minded(m, m)),
        opt=Fraction(m),
        welfare_cap=Fraction(1),
        claimed_bound=Fraction(1, m),
        price_grid=tuple(two_level_grid(levels, m)),
        adversary_orders=((0, 1),),
        agent_classes=(S, G),
    )


def general_best_order(m: int = 10, eps: Fraction | None = None) -> NamedInstance:
    _need(m >= 4 and m % 2 == 0, f"general_best_order needs an even m >= 4, got {m}")
    eps = Fraction(1, m * m) if eps is None else Fraction(eps)
    half = m // 2
    v = make_valuation(
        [0] + [0 if i < half else (half - eps if i == half else Fraction(half + 1)) for i in range(1, m + 1)]
    )
    levels = [Fraction(1, 2), (half - eps) / half, 1, Fraction(3, 2), 2]
    counts = default_counts(m) + [half - 1, half + 1]
    return NamedInstance(
        id="general_best_order",
        params={"m": m, "eps": eps},
        anchor="best order welfare <= m/2+1",
        bound_kind=UPPER_BEST_ORDER,
        market=Market(m, (v, v)),
        opt=m - 2 * eps,
        welfare_cap=Fraction(half + 1),
        claimed_bound=Fraction(half + 1) / (m - 2 * eps),
        price_grid=tuple(two_level_grid(levels, m, counts)),
        agent_classes=(G, G),
    )


# -----------------------
# Bayesian
# -----------------------
def bayes_lower_instance(n: int = 4) -> NamedInstance:
    dist = bayes_lower(n)
    m = dist.m
    grid = [
        uniform_prices(1, m),
        uniform_prices(2, m),
        uniform_prices(Fraction(1, 2), m),
        from_counts([(1, Fraction(1, 2)), (m - 1, 2)]),
        from_counts([(m - 1, Fraction(1, 2)), (1, m)]),
    ]
    return NamedInstance(
        id="bayes_lower",
        params={"n": n},
        anchor="expected worst case O(1/n) E[OPT]",
        bound_kind=UPPER_BAYESIAN,
        distribution=dist,
        opt=(1 - (1 - Fraction(1, n)) ** n) * m + (1 - Fraction(1, n)) ** n * n,
        claimed_bound=Fraction(n, m) + Fraction(1, n),
        price_grid=tuple(grid),
        adversary_orders=(tuple(range(n)),),
        agent_classes=(S, G),
        extra={"e": E_RATIONAL},
    )


# -----------------------
# Envelope gaps
# -----------------------
def _xos_submod_gap_valuation(ell: int) -> SymmetricValuation:
    m = ell * ell
    return make_valuation([0] + [1 if i <= ell else Fraction(i, ell) for i in range(1, m + 1)])


def envelope_tight_xos(ell: int = 39) -> NamedInstance:
    """XOS valuation whose minimal submodular envelope is 1+(l-1)/(l+1) times larger at l."""
    _need(ell >= 2, f"envelope_tight_xos needs l >= 2, got {ell}")
    factor = 1 + Fraction(ell - 1, ell + 1)
    return NamedInstance(
        id="envelope_tight_xos",
        params={"ell": ell},
        anchor="envelope gap approaches 2",
        bound_kind=ENVELOPE_GAP,
        opt=Fraction(0),
        claimed_bound=factor,
        envelope_target=_xos_submod_gap_valuation(ell),
        envelope_kind="submodular",
        expected_factor=factor,
        agent_classes=(X,),
    )


def envelope_tight_subadd_submod(ell: int = 39) -> NamedInstance:
    """The same valuation read as subadditive against its submodular envelope."""
    inst = envelope_tight_xos(ell)
    return NamedInstance(
        id="envelope_tight_subadd_submod",
        params={"ell": ell},
        anchor="envelope gap approaches 2",
        bound_kind=ENVELOPE_GAP,
        opt=Fraction(0),
        claimed_bound=inst.claimed_bound,
        envelope_target=inst.envelope_target,
        envelope_kind="submodular",
        expected_factor=inst.expected_factor,
        agent_classes=(SA,),
    )


def envelope_tight_subadd(l: int = 20) -> NamedInstance:  # noqa: E741
    """v = 1 up to l items and 2 at l+1; the minimal XOS envelope reaches 2l/(l+1) at l."""
    _need(l >= 1, f"envelope_tight_subadd needs l >= 1, got {l}")
    v = make_valuation([0] + [1] * l + [2])
    factor = Fraction(2 * l, l + 1)
    return NamedInstance(
        id="envelope_tight_subadd",
        params={"l": l},
        anchor="envelope gap approaches 2",
        bound_kind=ENVELOPE_GAP,
        opt=Fraction(0),
        claimed_bound=factor,
        envelope_target=v,
        envelope_kind="xos",
        expected_factor=factor,
        agent_classes=(SA,),
    )


# -----------------------
# Registry
# -----------------------
@dataclass(frozen=True)
class CatalogEntry:
    builder: Callable[..., NamedInstance]
    anchor: str
    description: str


CATALOG: dict[str, CatalogEntry] = {
    "intro_example": CatalogEntry(intro_example, "uniform price 4 loses 4 of 14", "two agents (0,5,9,11), uniform price 4"),
    "prelim_example": CatalogEntry(prelim_example, "V = 5,4,2,2,2,1; OPT 11", "marginal profile worked example, OPT 11"),
    "submod_2item": CatalogEntry(submod_2item, "worst case <= 2/3 OPT for every pricing", "2 items, unit-demand 2 and additive 1"),
    "submod_0802": CatalogEntry(submod_0802, "worst case <= 0.802 OPT for every pricing", "unit-demand agents at 1 and beta (params: m)"),
    "submod_uniform_2agents": CatalogEntry(submod_uniform_2agents, "uniform worst case <= m/(2m-1) OPT", "uniform pricing, unit-demand m and additive 1 (params: m)"),
    "submod_identical": CatalogEntry(submod_identical, "uniform worst case <= (n+1)/(2n) OPT", "n identical agents v(i)=n+i on n^2 items (params: n)"),
    "xos_static_1e": CatalogEntry(xos_static_1e, "static worst case -> (1-1/e) OPT", "two XOS agents, k=floor(m/e) (params: m)"),
    "xos_dynamic_56": CatalogEntry(xos_dynamic_56, "dynamic worst case <= 5/6 OPT", "(0,4,4,6) and unit-demand 1 on 3 items"),
    "subadd_half": CatalogEntry(subadd_half, "worst case <= ~1/2 OPT for every pricing", "step valuation and unit-demand 1/(m-1) (params: m)"),
    "subadd_third": CatalogEntry(subadd_third, "uniform worst case -> 1/3 OPT", "three agents, uniform pricing (params: m)"),
    "subadd_34_identical": CatalogEntry(subadd_34_identical, "identical pair worst case -> 3/4 OPT", "two identical subadditive agents (params: m, eps)"),
    "subadd_23_identical": CatalogEntry(subadd_23_identical, "identical pair, uniform worst case -> 2/3 OPT", "two identical agents, uniform pricing (params: m)"),
    "general_1m": CatalogEntry(general_1m, "worst case <= OPT/m in a known order", "unit-demand 1 and single-minded m (params: m)"),
    "general_best_order": CatalogEntry(general_best_order, "best order welfare <= m/2+1", "two identical agents, seller-chosen order (params: m, eps)"),
    "bayes_lower": CatalogEntry(bayes_lower_instance, "expected worst case O(1/n) E[OPT]", "unit-demand or single-minded i.i.d. agents (params: n)"),
    "envelope_tight_xos": CatalogEntry(envelope_tight_xos, "envelope gap approaches 2", "XOS vs submodular envelope (params: ell)"),
    "envelope_tight_subadd": CatalogEntry(envelope_tight_subadd, "envelope gap approaches 2", "subadditive vs XOS envelope (params: l)"),
    "envelope_tight_subadd_submod": CatalogEntry(envelope_tight_subadd_submod, "envelope gap approaches 2", "subadditive vs submodular envelope (params: ell)"),
}


def generate(instance_id: str, **params: Any) -> NamedInstance:
    entry = CATALOG.get(instance_id)
    if entry is None:
        raise UnknownId(f"Unknown instance '{instance_id}'. Known: {', '.join(CATALOG)}")
    try:
        return entry.builder(**params)
    except TypeError as e:
        raise BadParams(f"{instance_id}: {e}") from e
