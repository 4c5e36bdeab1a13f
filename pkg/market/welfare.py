from __future__ import annotations

from fractions import Fraction
from itertools import product

from market.model import Allocation, Market


def optimal_welfare(market: Market) -> tuple[Fraction, Allocation]:
    """
    Max of sum_i v_i(q_i) subject to sum_i q_i <= m.

    best[i][r] is the best welfare of agents i.. with r items left. The
    witness is rebuilt front to back taking the smallest optimal q_i, so
    ties resolve lexicographically.
    """
    n, m = market.n, market.m
    if n == 0:
        return Fraction(0), Allocation(())

    best = [[Fraction(0)] * (m + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        v = market.agents[i]
        row, nxt = best[i], best[i + 1]
        for r in range(m + 1):
            row[r] = max(v(q) + nxt[r - q] for q in range(r + 1))

    quantities: list[int] = []
    r = m
    for i in range(n):
        v = market.agents[i]
        target = best[i][r]
        for q in range(r + 1):
            if v(q) + best[i + 1][r - q] == target:
                quantities.append(q)
                r -= q
                break
    return best[0][m], Allocation(tuple(quantities))


def brute_force_optimal_welfare(market: Market) -> Fraction:
    """Enumerates every allocation; small markets only."""
    best = Fraction(0)
    for qs in product(range(market.m + 1), repeat=market.n):
        if sum(qs) > market.m:
            continue
        total = sum((v(q) for v, q in zip(market.agents, qs)), start=Fraction(0))
        best = max(best, total)
    return best
