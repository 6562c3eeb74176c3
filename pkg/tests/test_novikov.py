from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from qhalg.novikov import (
    FloorTooHigh,
    NotAUnit,
    NovikovElement,
    ZeroElement,
    invert,
    multiply,
    parse_novikov,
    render,
)

from conftest import exponents, nonzero_fractions, small_fractions

terms = st.tuples(small_fractions, st.integers(-2, 2), exponents)
exact = st.lists(terms, max_size=5).map(NovikovElement)


def unit_like(a: NovikovElement) -> bool:
    return bool(a.terms) and (len(a.terms) == 1 or a.terms[1][2] != a.terms[0][2])


def naive_inverse(a: NovikovElement, floor) -> NovikovElement:
    """Geometric series ``sum (-z)^k`` for ``a = lead (1 + z)``."""
    c0, d0, k0 = a.lead()
    inv_lead = NovikovElement.monomial(1 / c0, -d0, -k0)
    z = multiply(a, inv_lead) - 1
    total, power = NovikovElement.one(), NovikovElement.one()
    while power.terms:
        power = multiply(power, -z, floor + k0).truncate(floor + k0)
        total = total + power
    return multiply(total.truncate(floor + k0), inv_lead)


def test_sorting_and_merging():
    a = NovikovElement([(1, 0, 1), (2, 0, 1), (3, 1, 5), (-3, 1, 5), (1, 0, -2)])
    assert a.terms == ((Fraction(3), 0, Fraction(1)), (Fraction(1), 0, Fraction(-2)))
    assert a.lead_t == 1


def test_q_power_must_be_integer():
    with pytest.raises(TypeError):
        NovikovElement([(1, Fraction(1, 2), 0)])


def test_floor_drops_terms_and_marks_inexact():
    a = NovikovElement([(1, 0, 0), (1, 0, -3)], floor=-1)
    assert a.terms == ((Fraction(1), 0, Fraction(0)),)
    assert not a.is_exact
    assert NovikovElement([(1, 0, 0)]).is_exact


def test_product_floor_rule():
    a = NovikovElement([(1, 0, 2)], floor=-1)
    b = NovikovElement([(1, 0, 3), (1, 0, 0)], floor=-4)
    p = a * b
    assert p.floor == max(-1 + 3, -4 + 2)
    assert p.terms == ((Fraction(1), 0, Fraction(5)), (Fraction(1), 0, Fraction(2)))


def test_render_and_parse_examples():
    a = parse_novikov("1 + 2*q*t^(1/2) - t^(-3)")
    assert render(a) == "2*q^1*t^(1/2) + 1 - 1*t^(-3)"
    assert render(NovikovElement()) == "0"


@given(exact)
def test_parse_render_round_trip(a):
    assert parse_novikov(render(a)) == a


@given(exact, exact, exact)
def test_ring_axioms(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == NovikovElement()


@given(st.lists(terms, min_size=1, max_size=4), st.integers(-15, -3))
def test_inverse_times_element_is_one(raw, floor):
    a = NovikovElement(raw)
    assume(unit_like(a))
    inv = invert(a, floor)
    prod = multiply(a, inv)
    assert prod.agrees_with(NovikovElement.one(), prod.floor)
    assert prod.floor <= a.lead_t + floor + 1


@given(st.lists(terms, min_size=1, max_size=4), st.integers(-10, -2))
def test_inverse_matches_geometric_series(raw, floor):
    a = NovikovElement(raw)
    assume(unit_like(a))
    assert invert(a, floor).agrees_with(naive_inverse(a, floor), floor)


@given(nonzero_fractions, st.integers(-3, 3), exponents)
def test_monomial_inverse_is_exact(c, d, k):
    inv = invert(NovikovElement.monomial(c, d, k))
    assert inv.is_exact
    assert inv == NovikovElement.monomial(1 / c, -d, -k)


def test_inverse_errors():
    with pytest.raises(ZeroElement):
        invert(NovikovElement())
    with pytest.raises(NotAUnit):
        invert(NovikovElement([(1, 0, 0), (1, 1, 0)]), -3)
    with pytest.raises(FloorTooHigh):
        invert(NovikovElement([(1, 0, 0)], floor=-1), -5)
    with pytest.raises(ValueError):
        invert(NovikovElement([(1, 0, 0), (1, 0, -1)]))
