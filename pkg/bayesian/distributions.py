from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Iterator

import numpy as np

from market.model import Market
from valuations.errors import BadParams, DomainError, ParseError, UnknownId
from valuations.rationals import format_rational, to_rational
from valuations.symmetric import (
    SymmetricValuation,
    ValuationClass,
    classify,
    make_valuation,
    single_minded,
    unit_demand,
)


@dataclass(frozen=True)
class SupportPoint:
    prob: Fraction
    valuation: SymmetricValuation


@dataclass(frozen=True)
class AgentDistribution:
    """Finite support with exact probabilities summing to 1."""

    support: tuple[SupportPoint, ...]

    def __post_init__(self) -> None:
        if not self.support:
            raise DomainError("An agent distribution needs at least one support point")
        if any(pt.prob <= 0 for pt in self.support):
            raise DomainError("Support probabilities must be positive")
        total = sum((pt.prob for pt in self.support), start=Fraction(0))
        if total != 1:
            raise DomainError(f"Support probabilities sum to {format_rational(total)}, not 1")

    @property
    def resolution(self) -> int:
        # common denominator; one integer draw in [0, resolution) picks a point exactly
        return math.lcm(*(pt.prob.denominator for pt in self.support))

    def draw(self, rng: np.random.Generator) -> SymmetricValuation:
        res = self.resolution
        u = int(rng.integers(0, res))
        acc = 0
        for pt in self.support:
            acc += pt.prob.numerator * (res // pt.prob.denominator)
            if u < acc:
                return pt.valuation
        return self.support[-1].valuation


@dataclass(frozen=True)
class ValuationDistribution:
    """Independent agents over m identical items."""

    m: int
    agents: tuple[AgentDistribution, ...]
    name: str = "custom"

    def __post_init__(self) -> None:
        for idx, agent in enumerate(self.agents):
            for pt in agent.support:
                if pt.valuation.m != self.m:
                    raise DomainError(f"Agent {idx}: support valuation has m={pt.valuation.m}, expected {self.m}")

    @property
    def n(self) -> int:
        return len(self.agents)

    @property
    def declared_class(self) -> ValuationClass:
        # loosest class over the whole support
        classes = [classify(pt.valuation) for a in self.agents for pt in a.support]
        return max(classes, key=lambda c: c.rank, default=ValuationClass.ADDITIVE)

    @property
    def support_size(self) -> int:
        return math.prod(len(a.support) for a in self.agents)

    def sample(self, seed: int, index: int) -> Market:
        """Deterministic in (seed, index)."""
        rng = np.random.default_rng([seed, index])
        return Market(self.m, tuple(a.draw(rng) for a in self.agents))

    def profiles(self) -> Iterator[tuple[Fraction, Market]]:
        for combo in itertools.product(*(a.support for a in self.agents)):
            prob = math.prod((pt.prob for pt in combo), start=Fraction(1))
            yield prob, Market(self.m, tuple(pt.valuation for pt in combo))


def point_mass(market: Market, name: str = "point-mass") -> ValuationDistribution:
    agents = tuple(AgentDistribution((SupportPoint(Fraction(1), v),)) for v in market.agents)
    return ValuationDistribution(market.m, agents, name)


def iid(agent: AgentDistribution, n: int, m: int, name: str = "iid") -> ValuationDistribution:
    return ValuationDistribution(m, (agent,) * n, name)


# -----------------------
# Generators
# -----------------------
def bayes_lower(n: int) -> ValuationDistribution:
    """
    n i.i.d. agents on m = n^2 items: unit-demand with value 1 w.p. 1-1/n,
    single-minded for the grand bundle with value m w.p. 1/n.
    """
    if n < 2:
        raise BadParams(f"bayes-lower needs n >= 2, got {n}")
    m = n * n
    agent = AgentDistribution(
        (
            SupportPoint(1 - Fraction(1, n), unit_demand(1, m)),
            SupportPoint(Fraction(1, n), single_minded(m, m)),
        )
    )
    return iid(agent, n, m, name=f"bayes-lower(n={n})")


GENERATORS: dict[str, Callable[..., ValuationDistribution]] = {
    "bayes-lower": bayes_lower,
}


# -----------------------
# JSON
# -----------------------
def distribution_from_dict(data: dict[str, Any]) -> ValuationDistribution:
    """
    {"m": int, "agents": [{"support": [{"prob": "1/2", "values": [...]}, ...]}]}
    or {"generator": "bayes-lower", "params": {"n": 4}}.
    """
    if "generator" in data:
        gen = GENERATORS.get(data["generator"])
        if gen is None:
            raise UnknownId(f"Unknown distribution generator '{data['generator']}'")
        return gen(**data.get("params", {}))
    try:
        m = int(data["m"])
        agents = tuple(
            AgentDistribution(
                tuple(
                    SupportPoint(to_rational(pt["prob"]), make_valuation(pt["values"]))
                    for pt in entry["support"]
                )
            )
            for entry in data["agents"]
        )
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"Malformed distribution: {e}") from e
    return ValuationDistribution(m, agents, name=data.get("name", "custom"))


def distribution_to_dict(dist: ValuationDistribution) -> dict[str, Any]:
    return {
        "name": dist.name,
        "m": dist.m,
        "agents": [
            {
                "support": [
                    {"prob": format_rational(pt.prob), "values": pt.valuation.to_strings()}
                    for pt in agent.support
                ]
            }
            for agent in dist.agents
        ],
    }


def load_distribution(path: Path | str) -> ValuationDistribution:
    p = Path(path)
    if not p.exists():
        raise ParseError(f"Missing distribution file: {p}")
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as e:
        raise ParseError(f"{p}: not valid JSON ({e})") from e
    return distribution_from_dict(data)
