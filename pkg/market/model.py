from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from valuations.errors import DomainError
from valuations.symmetric import SymmetricValuation


@dataclass(frozen=True)
class Market:
    m: int
    agents: tuple[SymmetricValuation, ...]

    def __post_init__(self) -> None:
        if self.m < 0:
            raise DomainError(f"Item count must be non-negative, got {self.m}")
        for idx, v in enumerate(self.agents):
            if v.m != self.m:
                raise DomainError(
                    f"Agent {idx} has {v.m + 1} values; a market with m={self.m} needs {self.m + 1}"
                )

    @property
    def n(self) -> int:
        return len(self.agents)


@dataclass(frozen=True)
class Allocation:
    quantities: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.quantities)

    def welfare(self, market: Market) -> Fraction:
        return sum((v(q) for v, q in zip(market.agents, self.quantities)), start=Fraction(0))
