from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from valuations.errors import NotMonotone, NotNormalized
from valuations.rationals import RationalLike, format_rational, to_rational


class ValuationClass(Enum):
    ADDITIVE = "additive"
    SUBMODULAR = "submodular"
    XOS = "xos"
    SUBADDITIVE = "subadditive"
    GENERAL = "general"

    @property
    def rank(self) -> int:
        return _CLASS_ORDER.index(self)

    def within(self, other: "ValuationClass") -> bool:
        """True when every valuation of this class also belongs to `other`."""
        return self.rank <= other.rank


_CLASS_ORDER = [
    ValuationClass.ADDITIVE,
    ValuationClass.SUBMODULAR,
    ValuationClass.XOS,
    ValuationClass.SUBADDITIVE,
    ValuationClass.GENERAL,
]


@dataclass(frozen=True)
class SymmetricValuation:
    """
    v(0..m) for m identical items. Use make_valuation to build one;
    the constructor does not validate.
    """

    values: tuple[Fraction, ...]

    @property
    def m(self) -> int:
        return len(self.values) - 1

    def __call__(self, k: int) -> Fraction:
        return self.values[k]

    def marginal(self, k: int) -> Fraction:
        # value of the k-th unit, k >= 1
        return self.values[k] - self.values[k - 1]

    def marginals(self) -> list[Fraction]:
        return [self.marginal(k) for k in range(1, self.m + 1)]

    def to_strings(self) -> list[str]:
        return [format_rational(x) for x in self.values]

    def __repr__(self) -> str:
        return f"SymmetricValuation({', '.join(self.to_strings())})"


def make_valuation(values: Sequence[RationalLike]) -> SymmetricValuation:
    vals = tuple(to_rational(x) for x in values)
    if len(vals) < 1:
        raise NotNormalized("A valuation needs at least v(0)")
    if vals[0] != 0:
        raise NotNormalized(f"v(0) must be 0, got {format_rational(vals[0])}")
    for k in range(1, len(vals)):
        if vals[k] < vals[k - 1]:
            raise NotMonotone(
                f"v({k})={format_rational(vals[k])} < v({k - 1})={format_rational(vals[k - 1])}"
            )
    return SymmetricValuation(vals)


def monotone_closure(values: Sequence[RationalLike]) -> SymmetricValuation:
    """Running maximum of a normalized, possibly non-monotone vector."""
    vals = [to_rational(x) for x in values]
    if not vals or vals[0] != 0:
        raise NotNormalized("v(0) must be 0")
    out: list[Fraction] = []
    best = Fraction(0)
    for x in vals:
        best = max(best, x)
        out.append(best)
    return SymmetricValuation(tuple(out))


# -----------------------
# Shapes
# -----------------------
def unit_demand(value: RationalLike, m: int) -> SymmetricValuation:
    x = to_rational(value)
    return make_valuation([0] + [x] * m)


def additive(value: RationalLike, m: int) -> SymmetricValuation:
    x = to_rational(value)
    return make_valuation([x * k for k in range(m + 1)])


def single_minded(value: RationalLike, m: int, size: int | None = None) -> SymmetricValuation:
    """Positive value only from `size` items on (default: the grand bundle)."""
    x = to_rational(value)
    size = m if size is None else size
    return make_valuation([x if k >= size else 0 for k in range(m + 1)])


def from_marginals(marginals: Iterable[RationalLike]) -> SymmetricValuation:
    vals = [Fraction(0)]
    for d in marginals:
        vals.append(vals[-1] + to_rational(d))
    return make_valuation(vals)


# -----------------------
# Class tests
# -----------------------
def is_additive(v: SymmetricValuation) -> bool:
    ms = v.marginals()
    return all(d == ms[0] for d in ms)


def is_submodular(v: SymmetricValuation) -> bool:
    ms = v.marginals()
    return all(ms[k] >= ms[k + 1] for k in range(len(ms) - 1))


def is_xos(v: SymmetricValuation) -> bool:
    # v(i)/i >= v(j)/j for i < j, i.e. average value per item never increases
    vals = v.values
    for i in range(1, v.m + 1):
        for j in range(i + 1, v.m + 1):
            if vals[i] * j < vals[j] * i:
                return False
    return True


def is_subadditive(v: SymmetricValuation) -> bool:
    vals = v.values
    for i in range(1, v.m + 1):
        for j in range(i, v.m + 1 - i):
            if vals[i] + vals[j] < vals[i + j]:
                return False
    return True


_TESTS = [
    (ValuationClass.ADDITIVE, is_additive),
    (ValuationClass.SUBMODULAR, is_submodular),
    (ValuationClass.XOS, is_xos),
    (ValuationClass.SUBADDITIVE, is_subadditive),
]


def classify(v: SymmetricValuation) -> ValuationClass:
    """Most restrictive class of v. m=0 is trivially additive."""
    for cls, test in _TESTS:
        if test(v):
            return cls
    return ValuationClass.GENERAL


def belongs_to(v: SymmetricValuation, cls: ValuationClass) -> bool:
    return classify(v).within(cls)
