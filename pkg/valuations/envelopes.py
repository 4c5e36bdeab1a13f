from __future__ import annotations

from fractions import Fraction

from valuations.errors import DomainError
from valuations.rationals import format_rational
from valuations.symmetric import SymmetricValuation


def minimal_xos_envelope(v: SymmetricValuation) -> SymmetricValuation:
    """
    w(i) = i * max_{j >= i} v(j)/j, computed with a suffix maximum of the
    per-item averages. w is XOS, dominates v and is pointwise minimal.
    """
    m = v.m
    out = [Fraction(0)] * (m + 1)
    best_avg = Fraction(0)
    for i in range(m, 0, -1):
        best_avg = max(best_avg, v(i) / i)
        out[i] = best_avg * i
    return SymmetricValuation(tuple(out))


def _upper_hull(v: SymmetricValuation) -> list[int]:
    # monotone chain over (i, v(i)), keeping only right turns
    hull: list[int] = []
    for i in range(v.m + 1):
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            # drop b when it lies on or below the segment a -> i
            if (v(b) - v(a)) * (i - a) <= (v(i) - v(a)) * (b - a):
                hull.pop()
            else:
                break
        hull.append(i)
    return hull


def minimal_submodular_envelope(v: SymmetricValuation) -> SymmetricValuation:
    """Upper concave envelope of the points (i, v(i)) at integer arguments."""
    if v.m == 0:
        return v
    hull = _upper_hull(v)
    out = [Fraction(0)] * (v.m + 1)
    for a, b in zip(hull, hull[1:]):
        slope = (v(b) - v(a)) / (b - a)
        for i in range(a, b + 1):
            out[i] = v(a) + slope * (i - a)
    return SymmetricValuation(tuple(out))


def submodular_envelope_by_formula(v: SymmetricValuation) -> SymmetricValuation:
    """
    u(i) = max_{k <= i <= j, k < j} ((i-k)/(j-k)) (v(j)-v(k)) + v(k).
    O(m^3); kept as the oracle for the hull sweep.
    """
    m = v.m
    out = [Fraction(0)] * (m + 1)
    for i in range(m + 1):
        best = v(i)
        for k in range(0, i + 1):
            for j in range(i, m + 1):
                if j == k:
                    continue
                cand = Fraction(i - k, j - k) * (v(j) - v(k)) + v(k)
                if cand > best:
                    best = cand
        out[i] = best
    return SymmetricValuation(tuple(out))


def closeness_factor(v: SymmetricValuation, w: SymmetricValuation) -> Fraction:
    """max_{i>=1} w(i)/v(i), counting 0/0 as 1."""
    if v.m != w.m:
        raise DomainError(f"Length mismatch: m={v.m} vs m={w.m}")
    factor = Fraction(1)
    for i in range(1, v.m + 1):
        if w(i) < v(i):
            raise DomainError(
                f"w({i})={format_rational(w(i))} is below v({i})={format_rational(v(i))}"
            )
        if v(i) == 0:
            if w(i) > 0:
                raise DomainError(f"w({i}) > 0 while v({i}) = 0: no finite factor")
            continue
        factor = max(factor, w(i) / v(i))
    return factor
