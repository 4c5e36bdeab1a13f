from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

from simulator.prices import PriceVector, from_counts, uniform_prices
from valuations.rationals import RationalLike, to_rational


def _levels(levels: Iterable[RationalLike]) -> list[Fraction]:
    return sorted({to_rational(x) for x in levels if to_rational(x) >= 0})


def _dedupe(vectors: Iterable[PriceVector]) -> list[PriceVector]:
    seen: set[tuple[Fraction, ...]] = set()
    out: list[PriceVector] = []
    for pv in vectors:
        if pv.prices not in seen:
            seen.add(pv.prices)
            out.append(pv)
    return out


def uniform_grid(levels: Iterable[RationalLike], m: int) -> list[PriceVector]:
    return [uniform_prices(p, m) for p in _levels(levels)]


def default_counts(m: int) -> list[int]:
    return sorted({c for c in (0, 1, m // 2, m - 1, m) if 0 <= c <= m})


def two_level_grid(
    levels: Iterable[RationalLike],
    m: int,
    counts: Sequence[int] | None = None,
) -> list[PriceVector]:
    """
    Every vector with `c` items at a high level and m-c at a lower one,
    for each pair of levels and each c in counts.
    """
    lv = _levels(levels)
    counts = default_counts(m) if counts is None else sorted({c for c in counts if 0 <= c <= m})
    vectors = uniform_grid(lv, m)
    for lo_idx, lo in enumerate(lv):
        for hi in lv[lo_idx + 1:]:
            for c in counts:
                vectors.append(from_counts([(m - c, lo), (c, hi)]))
    return _dedupe(vectors)


def all_sorted_vectors(levels: Iterable[RationalLike], m: int) -> list[PriceVector]:
    """Every sorted vector over the levels; small m only."""
    lv = _levels(levels)
    return [PriceVector(tuple(combo)) for combo in combinations_with_replacement(lv, m)]


def around(values: Iterable[RationalLike], eps: RationalLike) -> list[Fraction]:
    """Each threshold together with threshold +- eps."""
    e = to_rational(eps)
    out: list[Fraction] = []
    for x in values:
        q = to_rational(x)
        out.extend([q - e, q, q + e])
    return [x for x in out if x >= 0]
