from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from strategies import general_valuations, submodular_valuations, subadditive_valuations, xos_valuations
from valuations.errors import NotMonotone, NotNormalized
from valuations.symmetric import (
    ValuationClass,
    additive,
    belongs_to,
    classify,
    from_marginals,
    is_subadditive,
    is_submodular,
    is_xos,
    make_valuation,
    monotone_closure,
    single_minded,
    unit_demand,
)


def test_make_valuation_requires_zero_at_empty_bundle():
    with pytest.raises(NotNormalized):
        make_valuation([1, 2, 3])


def test_make_valuation_requires_monotone_values():
    with pytest.raises(NotMonotone):
        make_valuation([0, 3, 2])


def test_monotone_closure_takes_running_max():
    assert monotone_closure([0, 3, 2, 5]).values == tuple(map(Fraction, (0, 3, 3, 5)))


def test_shapes():
    assert unit_demand(2, 3).values == tuple(map(Fraction, (0, 2, 2, 2)))
    assert additive("1/2", 2).values == (Fraction(0), Fraction(1, 2), Fraction(1))
    assert single_minded(5, 3).values == tuple(map(Fraction, (0, 0, 0, 5)))
    assert single_minded(5, 4, size=2).values == tuple(map(Fraction, (0, 0, 5, 5, 5)))
    assert from_marginals([3, 1]).values == tuple(map(Fraction, (0, 3, 4)))


def test_marginals():
    v = make_valuation([0, 5, 9, 11])
    assert v.marginals() == [5, 4, 2]
    assert v.marginal(2) == 4
    assert v.m == 3


@pytest.mark.parametrize(
    "values, expected",
    [
        ([0, 1, 2, 3], ValuationClass.ADDITIVE),
        ([0, 2, 2, 2], ValuationClass.SUBMODULAR),
        ([0, 4, 4, 6], ValuationClass.XOS),
        ([0, 1, 1, 2], ValuationClass.SUBADDITIVE),
        ([0, 0, 0, 3], ValuationClass.GENERAL),
        ([0], ValuationClass.ADDITIVE),
    ],
)
def test_classify_returns_most_restrictive_class(values, expected):
    assert classify(make_valuation(values)) is expected


def test_class_inclusions():
    assert ValuationClass.SUBMODULAR.within(ValuationClass.XOS)
    assert ValuationClass.XOS.within(ValuationClass.GENERAL)
    assert not ValuationClass.XOS.within(ValuationClass.SUBMODULAR)
    assert belongs_to(unit_demand(1, 3), ValuationClass.SUBADDITIVE)
    assert not belongs_to(single_minded(3, 3), ValuationClass.SUBADDITIVE)


@given(st.integers(1, 6).flatmap(submodular_valuations))
def test_submodular_is_xos_and_subadditive(v):
    assert is_submodular(v)
    assert is_xos(v)
    assert is_subadditive(v)


@given(st.integers(1, 6).flatmap(xos_valuations))
def test_xos_generator_is_xos_and_subadditive(v):
    assert is_xos(v)
    assert is_subadditive(v)


@given(st.integers(1, 6).flatmap(subadditive_valuations))
def test_subadditive_generator_is_subadditive(v):
    assert is_subadditive(v)


@given(st.integers(1, 6).flatmap(general_valuations))
def test_classify_agrees_with_belongs_to(v):
    cls = classify(v)
    assert belongs_to(v, cls)
    assert belongs_to(v, ValuationClass.GENERAL)
