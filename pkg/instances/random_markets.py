from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterator

import numpy as np

from market.model import Market
from valuations.errors import UnknownId
from valuations.symmetric import (
    SymmetricValuation,
    additive,
    from_marginals,
    is_subadditive,
    make_valuation,
    unit_demand,
)

MAX_VALUE = 10


def _ints(rng: np.random.Generator, low: int, high: int, size: int) -> list[int]:
    return [int(x) for x in rng.integers(low, high + 1, size=size)]


def random_additive(rng: np.random.Generator, m: int) -> SymmetricValuation:
    return additive(int(rng.integers(0, MAX_VALUE + 1)), m)


def random_unit_demand(rng: np.random.Generator, m: int) -> SymmetricValuation:
    return unit_demand(int(rng.integers(0, MAX_VALUE + 1)), m)


def random_submodular(rng: np.random.Generator, m: int) -> SymmetricValuation:
    return from_marginals(sorted(_ints(rng, 0, MAX_VALUE, m), reverse=True))


def random_xos(rng: np.random.Generator, m: int) -> SymmetricValuation:
    """Max of a few capped additive clauses, min(i, cap) * weight."""
    clauses = int(rng.integers(1, 4))
    caps = _ints(rng, 1, m, clauses)
    weights = [Fraction(w, 2) for w in _ints(rng, 1, 2 * MAX_VALUE, clauses)]
    return make_valuation(
        [max(min(i, c) * w for c, w in zip(caps, weights)) for i in range(m + 1)]
    )


def random_subadditive(rng: np.random.Generator, m: int) -> SymmetricValuation:
    """
    Rejection sampling: monotone draws with v(1) >= 1 and every later step
    at most v(1), kept once they pass is_subadditive.
    """
    while True:
        base = int(rng.integers(1, MAX_VALUE + 1))
        steps = _ints(rng, 0, base, m - 1) if m > 1 else []
        values = [0, base]
        for s in steps:
            values.append(values[-1] + s)
        v = make_valuation(values[: m + 1])
        if is_subadditive(v):
            return v


def random_general(rng: np.random.Generator, m: int) -> SymmetricValuation:
    steps = _ints(rng, 0, MAX_VALUE, m)
    # zero out a random prefix so complementarities show up
    gate = int(rng.integers(0, m))
    values = [Fraction(0)]
    for i, s in enumerate(steps, start=1):
        values.append(values[-1] + s)
    return make_valuation([Fraction(0) if i <= gate and i < m else x for i, x in enumerate(values)])


GENERATORS: dict[str, Callable[[np.random.Generator, int], SymmetricValuation]] = {
    "additive": random_additive,
    "unit-demand": random_unit_demand,
    "submodular": random_submodular,
    "xos": random_xos,
    "subadditive": random_subadditive,
    "general": random_general,
}


def random_market(rng: np.random.Generator, kind: str, n: int, m: int) -> Market:
    gen = GENERATORS.get(kind)
    if gen is None:
        raise UnknownId(f"Unknown valuation kind '{kind}'. Known: {', '.join(GENERATORS)}")
    return Market(m, tuple(gen(rng, m) for _ in range(n)))


def random_markets(kind: str, trials: int, n: int, m: int, seed: int) -> Iterator[Market]:
    """One market per trial, each from its own rng stream [seed, trial]."""
    for trial in range(trials):
        yield random_market(np.random.default_rng([seed, trial]), kind, n, m)
