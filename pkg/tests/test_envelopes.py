from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from strategies import general_valuations, subadditive_valuations
from valuations.envelopes import (
    closeness_factor,
    minimal_submodular_envelope,
    minimal_xos_envelope,
    submodular_envelope_by_formula,
)
from valuations.errors import DomainError
from valuations.symmetric import is_submodular, is_xos, make_valuation, unit_demand

valuations = st.integers(1, 7).flatmap(general_valuations)


def test_xos_envelope_of_step_valuation():
    v = make_valuation([0, 1, 1, 2])
    w = minimal_xos_envelope(v)
    assert w.values == (0, 1, Fraction(4, 3), 2)
    assert closeness_factor(v, w) == Fraction(4, 3)


def test_submodular_envelope_of_single_minded():
    v = make_valuation([0, 0, 0, 3])
    assert minimal_submodular_envelope(v).values == (0, 1, 2, 3)


def test_submodular_envelope_of_flat_then_linear():
    # 1 up to 3 items, then i/3 up to 9
    v = make_valuation([0, 1, 1, 1] + [Fraction(i, 3) for i in range(4, 10)])
    w = minimal_submodular_envelope(v)
    assert w.values[1:] == tuple(1 + Fraction(i - 1, 4) for i in range(1, 10))
    assert closeness_factor(v, w) == Fraction(3, 2)


def test_closeness_factor_rejects_bad_pairs():
    v = unit_demand(2, 3)
    with pytest.raises(DomainError):
        closeness_factor(v, unit_demand(2, 2))
    with pytest.raises(DomainError):
        closeness_factor(v, unit_demand(1, 3))
    with pytest.raises(DomainError):
        closeness_factor(make_valuation([0, 0, 1]), make_valuation([0, 1, 1]))


def test_closeness_of_identical_is_one():
    v = make_valuation([0, 0, 2])
    assert closeness_factor(v, v) == 1


@given(valuations)
def test_submodular_envelope_dominates_and_is_submodular(v):
    w = minimal_submodular_envelope(v)
    assert is_submodular(w)
    assert all(w(i) >= v(i) for i in range(v.m + 1))
    assert w(0) == 0


@given(valuations)
def test_hull_sweep_matches_formula(v):
    assert minimal_submodular_envelope(v) == submodular_envelope_by_formula(v)


@given(valuations)
def test_envelopes_are_idempotent(v):
    w = minimal_submodular_envelope(v)
    x = minimal_xos_envelope(v)
    assert minimal_submodular_envelope(w) == w
    assert minimal_xos_envelope(x) == x


@given(valuations)
def test_xos_envelope_is_xos_and_below_submodular_envelope(v):
    x = minimal_xos_envelope(v)
    w = minimal_submodular_envelope(v)
    assert is_xos(x)
    # every submodular function is XOS, so the XOS envelope is the tighter one
    assert all(v(i) <= x(i) <= w(i) for i in range(v.m + 1))


@given(st.integers(1, 8).flatmap(subadditive_valuations))
def test_subadditive_is_two_close_to_xos(v):
    assert closeness_factor(v, minimal_xos_envelope(v)) <= 2
