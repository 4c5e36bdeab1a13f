"""Symmetric valuations over identical items: classes, envelopes, closeness."""

from valuations.envelopes import (
    closeness_factor,
    minimal_submodular_envelope,
    minimal_xos_envelope,
    submodular_envelope_by_formula,
)
from valuations.errors import PricingError
from valuations.rationals import format_rational, to_rational
from valuations.symmetric import (
    SymmetricValuation,
    ValuationClass,
    additive,
    belongs_to,
    classify,
    from_marginals,
    make_valuation,
    monotone_closure,
    single_minded,
    unit_demand,
)

__all__ = [
    "PricingError",
    "SymmetricValuation",
    "ValuationClass",
    "additive",
    "belongs_to",
    "classify",
    "closeness_factor",
    "format_rational",
    "from_marginals",
    "make_valuation",
    "minimal_submodular_envelope",
    "minimal_xos_envelope",
    "monotone_closure",
    "single_minded",
    "submodular_envelope_by_formula",
    "to_rational",
    "unit_demand",
]
