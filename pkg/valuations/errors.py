from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class PricingError(RuntimeError):
    """Base class for every domain error raised by the workbench."""


# -----------------------
# Valuations
# -----------------------
class NotNormalized(PricingError):
    pass


class NotMonotone(PricingError):
    pass


class DomainError(PricingError):
    pass


class ParseError(PricingError):
    pass


# -----------------------
# Valuation classes
# -----------------------
class NotSubmodular(PricingError):
    pass


class NotSubadditive(PricingError):
    pass


class NotTwoIdentical(PricingError):
    pass


class ClassMismatch(PricingError):
    pass


# -----------------------
# Market / simulation
# -----------------------
class InsufficientDemand(PricingError):
    """
    Raised when fewer than m marginal values are positive (G(0) < m).
    Uniform price `epsilon` then sells every positive marginal.
    """

    def __init__(self, message: str, epsilon: Fraction):
        super().__init__(message)
        self.epsilon = epsilon


class SizeLimit(PricingError):
    pass


class InvalidTieChoice(PricingError):
    pass


class PolicyDomainError(PricingError):
    pass


# -----------------------
# Instances
# -----------------------
class UnknownId(PricingError):
    pass


class BadParams(PricingError):
    pass


class BoundViolated(PricingError):
    def __init__(self, message: str, prices: Sequence[Fraction]):
        super().__init__(message)
        self.prices = tuple(prices)
