from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import pandas as pd
from tqdm import tqdm

from bayesian.estimates import exhaustive_expectation
from instances.catalog import (
    ENVELOPE_GAP,
    UPPER_ALL_STATIC,
    UPPER_BAYESIAN,
    UPPER_BEST_ORDER,
    UPPER_DYNAMIC,
    UPPER_KNOWN_ORDER,
    UPPER_UNIFORM_STATIC,
    WORKED_EXAMPLE,
    NamedInstance,
)
from market.model import Market
from market.profile import market_profile
from market.welfare import optimal_welfare
from pricing.schemes import Limits
from simulator.dynamics import best_response, simulate
from simulator.prices import PriceVector
from simulator.search import best_case_welfare, worst_case_for_order, worst_case_welfare
from valuations.envelopes import closeness_factor, minimal_submodular_envelope, minimal_xos_envelope
from valuations.errors import BoundViolated, DomainError
from valuations.rationals import format_rational, rational_to_float
from valuations.symmetric import belongs_to, make_valuation

# optimal_welfare is O(n*m^2); above this the closed-form OPT is trusted
OPT_DP_BUDGET = 500_000

REPORT_COLUMNS = ["instance", "check", "prices", "welfare", "cap", "opt", "ratio", "ok"]


@dataclass
class VerifyReport:
    instance_id: str
    rows: list[dict[str, Any]] = field(default_factory=list)

    def add(
        self,
        check: str,
        ok: bool,
        prices: PriceVector | None = None,
        welfare: Fraction | None = None,
        cap: Fraction | None = None,
        opt: Fraction | None = None,
    ) -> None:
        ratio = welfare / opt if welfare is not None and opt else None
        self.rows.append(
            {
                "instance": self.instance_id,
                "check": check,
                "prices": str(prices) if prices is not None else "",
                "welfare": welfare,
                "cap": cap,
                "opt": opt,
                "ratio": ratio,
                "ok": bool(ok),
                "_prices": prices,
            }
        )

    @property
    def passed(self) -> bool:
        return all(r["ok"] for r in self.rows)

    @property
    def failures(self) -> list[dict[str, Any]]:
        return [r for r in self.rows if not r["ok"]]

    @property
    def max_ratio(self) -> Fraction | None:
        ratios = [r["ratio"] for r in self.rows if r["ratio"] is not None and r["check"] == "grid"]
        return max(ratios) if ratios else None

    def frame(self) -> pd.DataFrame:
        df = pd.DataFrame(self.rows, columns=REPORT_COLUMNS)
        for col in ("welfare", "cap", "opt"):
            df[col] = df[col].map(lambda q: format_rational(q) if q is not None else "")
        df["ratio"] = df["ratio"].map(lambda q: round(rational_to_float(q), 6) if q is not None else None)
        return df


# -----------------------
# Shared checks
# -----------------------
def _check_classes(inst: NamedInstance, report: VerifyReport) -> None:
    if inst.market is None or not inst.agent_classes:
        return
    seen: set[tuple[Any, Any]] = set()
    ok = True
    for v, cls in zip(inst.market.agents, inst.agent_classes):
        if (v, cls) in seen:
            continue
        seen.add((v, cls))
        ok = ok and belongs_to(v, cls)
    report.add("classes", ok)


def _check_opt(inst: NamedInstance, report: VerifyReport) -> None:
    market = inst.market
    if market is None:
        return
    if market.n * market.m * market.m > OPT_DP_BUDGET:
        report.add("opt (closed form)", True, opt=inst.opt)
        return
    opt, _ = optimal_welfare(market)
    report.add("opt", opt == inst.opt, welfare=opt, opt=inst.opt)


def _within(inst: NamedInstance, welfare: Fraction) -> bool:
    if inst.welfare_cap is not None and welfare > inst.welfare_cap:
        return False
    if inst.headline_ratio is not None and inst.opt > 0:
        if welfare / inst.opt > inst.headline_ratio + inst.tolerance:
            return False
    return True


def _static_welfare(inst: NamedInstance, prices: PriceVector, limits: Limits) -> Fraction:
    """Adversarial welfare: exact search, or the minimum over the construction's orders."""
    market = inst.market
    assert market is not None
    if inst.adversary_orders:
        return min(worst_case_for_order(market, prices, order).welfare for order in inst.adversary_orders)
    return worst_case_welfare(market, prices, max_agents=limits.max_agents, max_items=None).welfare


def _restricted(agents: list, items: int) -> Market:
    return Market(items, tuple(make_valuation(v.values[: items + 1]) for v in agents))


def _first_round_welfare(market: Market, prices: PriceVector) -> Fraction:
    """
    Whatever a dynamic policy posts first, the adversary picks the first
    buyer and its tie; the rest is bounded by OPT of what is left.
    """
    best: Fraction | None = None
    for a, v in enumerate(market.agents):
        rest = [u for i, u in enumerate(market.agents) if i != a]
        for k in best_response(v, prices.prices, mode="all"):
            opt_rest, _ = optimal_welfare(_restricted(rest, market.m - k))
            val = v(k) + opt_rest
            if best is None or val < best:
                best = val
    assert best is not None
    return best


# -----------------------
# Per kind
# -----------------------
def _verify_grid(inst: NamedInstance, report: VerifyReport, limits: Limits, progress: bool) -> None:
    market = inst.market
    assert market is not None
    for prices in tqdm(inst.price_grid, desc=inst.id, disable=not progress):
        if prices.m != market.m:
            raise DomainError(f"{inst.id}: grid vector of {prices.m} prices for {market.m} items")
        if inst.bound_kind == UPPER_UNIFORM_STATIC and not prices.uniform:
            raise DomainError(f"{inst.id}: non-uniform vector in a uniform-only grid")
        if inst.bound_kind == UPPER_BEST_ORDER:
            welfare = best_case_welfare(
                market, prices, max_order_agents=limits.max_order_agents, max_items=None
            ).welfare
        elif inst.bound_kind == UPPER_DYNAMIC:
            welfare = _first_round_welfare(market, prices)
        else:
            welfare = _static_welfare(inst, prices, limits)
        report.add("grid", _within(inst, welfare), prices, welfare, inst.welfare_cap, inst.opt)


def _verify_bayesian(inst: NamedInstance, report: VerifyReport) -> None:
    dist = inst.distribution
    assert dist is not None
    n, m = dist.n, dist.m
    e_opt = exhaustive_expectation(dist, lambda mk: optimal_welfare(mk)[0])
    report.add("expected opt", e_opt == inst.opt, welfare=e_opt, opt=inst.opt)
    e = inst.extra["e"]
    report.add("expected opt >= (1-1/e) m", e_opt >= (1 - 1 / e) * m, welfare=e_opt, opt=inst.opt)
    order = inst.adversary_orders[0] if inst.adversary_orders else tuple(range(n))
    for prices in inst.price_grid:
        if min(prices.prices) >= 1:
            cap = Fraction(n)
        else:
            cap = (1 - Fraction(1, n)) * n + Fraction(m, n)
        welfare = exhaustive_expectation(dist, lambda mk: worst_case_for_order(mk, prices, order).welfare)
        report.add("grid", welfare <= cap, prices, welfare, cap, e_opt)


def _verify_envelope(inst: NamedInstance, report: VerifyReport) -> None:
    v = inst.envelope_target
    assert v is not None
    for cls in inst.agent_classes:
        report.add(f"class {cls.value}", belongs_to(v, cls))
    if inst.envelope_kind == "xos":
        w = minimal_xos_envelope(v)
    else:
        w = minimal_submodular_envelope(v)
    factor = closeness_factor(v, w)
    report.add("closeness factor", factor == inst.expected_factor, welfare=factor, cap=inst.expected_factor)


def _verify_worked(inst: NamedInstance, report: VerifyReport) -> None:
    market = inst.market
    assert market is not None
    prices = inst.price_grid[0]
    extra = inst.extra
    if "first_argmax" in extra:
        got = best_response(market.agents[0], prices.prices, mode="all")
        report.add("first agent argmax", got == extra["first_argmax"], prices)
        replay = simulate(market, prices, range(market.n), extra["replay_ties"])
        report.add("replay", replay.welfare == extra["replay_welfare"], prices, replay.welfare, opt=inst.opt)
    if "V" in extra:
        prof = market_profile(market)
        report.add("profile V", prof.V == extra["V"])
        report.add("profile delta", prof.delta == extra["delta"] and prof.epsilon == extra["epsilon"])
        report.add("profile b", prof.b == extra["b"] and prof.m_prime == extra["m_prime"])
        report.add("profile G/E", prof.G(prof.b) == extra["G"] and prof.E(prof.b) == extra["E"])
    welfare = worst_case_welfare(market, prices).welfare
    report.add("worst case", welfare == inst.welfare_cap, prices, welfare, inst.welfare_cap, inst.opt)


def verify_bound(
    inst: NamedInstance,
    limits: Limits = Limits(),
    strict: bool = True,
    progress: bool = False,
) -> VerifyReport:
    """
    Measures adversarial welfare for every vector in the instance's grid and
    checks it against the claimed cap. Raises BoundViolated on the first
    failing row when strict.
    """
    report = VerifyReport(inst.id)
    kind = inst.bound_kind
    if kind == ENVELOPE_GAP:
        _verify_envelope(inst, report)
    elif kind == UPPER_BAYESIAN:
        _verify_bayesian(inst, report)
    else:
        _check_classes(inst, report)
        _check_opt(inst, report)
        if kind == WORKED_EXAMPLE:
            _verify_worked(inst, report)
        elif kind in (UPPER_ALL_STATIC, UPPER_UNIFORM_STATIC, UPPER_KNOWN_ORDER, UPPER_DYNAMIC, UPPER_BEST_ORDER):
            _verify_grid(inst, report, limits, progress)
        else:
            raise DomainError(f"Unknown bound kind '{kind}'")

    if strict and not report.passed:
        row = report.failures[0]
        prices = row["_prices"].prices if row["_prices"] is not None else ()
        detail = f" at {row['prices']}" if row["prices"] else ""
        welfare = f" (measured {format_rational(row['welfare'])})" if row["welfare"] is not None else ""
        raise BoundViolated(f"{inst.id}: check '{row['check']}' failed{detail}{welfare}", prices)
    return report
