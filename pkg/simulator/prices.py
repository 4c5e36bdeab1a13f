from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence

from valuations.errors import DomainError, ParseError, PolicyDomainError
from valuations.rationals import RationalLike, format_rational, to_rational


@dataclass(frozen=True)
class PriceVector:
    """Static per-item prices, kept sorted ascending."""

    prices: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if any(p < 0 for p in self.prices):
            raise DomainError("Prices must be non-negative")
        if list(self.prices) != sorted(self.prices):
            object.__setattr__(self, "prices", tuple(sorted(self.prices)))

    @property
    def m(self) -> int:
        return len(self.prices)

    @property
    def uniform(self) -> bool:
        return len(set(self.prices)) <= 1

    def suffix(self, start: int) -> tuple[Fraction, ...]:
        return self.prices[start:]

    def to_strings(self) -> list[str]:
        return [format_rational(p) for p in self.prices]

    def __str__(self) -> str:
        if self.uniform and self.prices:
            return f"uniform {format_rational(self.prices[0])} x {self.m}"
        return "(" + ", ".join(self.to_strings()) + ")"


def price_vector(prices: Iterable[RationalLike]) -> PriceVector:
    return PriceVector(tuple(sorted(to_rational(p) for p in prices)))


def uniform_prices(price: RationalLike, m: int) -> PriceVector:
    return PriceVector((to_rational(price),) * m)


def from_counts(levels: Sequence[tuple[int, RationalLike]]) -> PriceVector:
    """[(count, price), ...] -> PriceVector; counts of 0 are allowed."""
    out: list[Fraction] = []
    for count, price in levels:
        if count < 0:
            raise DomainError(f"Negative item count {count}")
        out.extend([to_rational(price)] * count)
    return PriceVector(tuple(sorted(out)))


# -----------------------
# Dynamic policies
# -----------------------
Rule = Callable[[frozenset, int], PriceVector]


@dataclass(frozen=True)
class DynamicPolicy:
    """
    Re-posts prices every round from (remaining agents, remaining items).
    The seller learns which agent arrived from the purchase it makes.
    """

    rule: Rule
    name: str = "policy"

    def prices_for(self, remaining: frozenset, items_left: int) -> PriceVector:
        try:
            pv = self.rule(remaining, items_left)
        except PolicyDomainError:
            raise
        except (KeyError, LookupError) as e:
            raise PolicyDomainError(
                f"{self.name}: undefined on agents={sorted(remaining)}, items={items_left}"
            ) from e
        if pv is None:
            raise PolicyDomainError(
                f"{self.name}: undefined on agents={sorted(remaining)}, items={items_left}"
            )
        if pv.m != items_left:
            raise PolicyDomainError(
                f"{self.name}: posted {pv.m} prices for {items_left} remaining items"
            )
        return pv


def constant_policy(prices: PriceVector) -> DynamicPolicy:
    """Replays a static vector: the unsold stock is always its expensive suffix."""

    def rule(_remaining: frozenset, items_left: int) -> PriceVector:
        return PriceVector(prices.prices[prices.m - items_left:])

    return DynamicPolicy(rule, name="constant")


# -----------------------
# JSON
# -----------------------
def prices_from_dict(data: dict[str, Any], m: int | None = None) -> PriceVector:
    """{"prices": [...]} or {"uniform": "x"} (the latter needs m)."""
    if "prices" in data:
        return price_vector(data["prices"])
    if "uniform" in data:
        if m is None:
            raise ParseError("Uniform price file needs the market's item count")
        return uniform_prices(data["uniform"], m)
    raise ParseError("Price file needs a 'prices' list or a 'uniform' value")


def prices_to_dict(prices: PriceVector) -> dict[str, Any]:
    return {"prices": prices.to_strings()}


def load_prices(path: Path | str, m: int | None = None) -> PriceVector:
    p = Path(path)
    if not p.exists():
        raise ParseError(f"Missing prices file: {p}")
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as e:
        raise ParseError(f"{p}: not valid JSON ({e})") from e
    pv = prices_from_dict(data, m=m)
    if m is not None and pv.m != m:
        raise ParseError(f"{p}: {pv.m} prices for a market with {m} items")
    return pv


def save_prices(prices: PriceVector, path: Path | str) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(json.dumps(prices_to_dict(prices), indent=2) + "\n")
    return p
