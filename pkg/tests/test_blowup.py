import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qhalg.blowup import (
    RElement,
    RRing,
    ShapeViolation,
    default_floor,
    exceptional_table,
    f_homomorphism,
    idempotents,
    in_x,
    invert_generic,
    lemma_u_inverse,
    lemma_u_pattern,
    lemma_u_series,
    parse_relement,
    phi_e,
    r_mul,
    render_relement,
)
from qhalg.novikov import NotAUnit, NovikovElement, multiply
from qhalg.qring import QHElement, associativity_defects, quantum_product

DELTAS = (Fraction(1), Fraction(1, 2), Fraction(3, 7))
rings = st.builds(RRing, st.integers(2, 5), st.sampled_from(DELTAS))


def relements(ring, max_terms=4):
    term = st.tuples(st.integers(0, ring.n - 1), st.integers(-4, 4).filter(bool),
                     st.integers(-6, 4))
    return st.lists(term, max_size=max_terms).map(
        lambda ts: RElement(ring, _coeffs(ts, ring.delta / 2)))


def _coeffs(ts, unit):
    out = {}
    for k, c, e in ts:
        out.setdefault(k, []).append((c, 0, e * unit))
    return {k: NovikovElement(v) for k, v in out.items()}


def naive_y(pat, ring, floor):
    """``sum_{k>=1} (-x')^k`` by repeated multiplication."""
    xprime = pat.x + RElement.monomial(ring, 1 / pat.r, ring.n - 2, ring.delta - pat.kappa0)
    total, power = RElement(ring), RElement.one(ring)
    while True:
        power = r_mul(power, -xprime, ring, floor).truncate(floor)
        if power.is_zero():
            return total
        total = total + power


def test_reduction_rule():
    ring = RRing(3, 1)
    assert parse_relement("s^3", ring) == parse_relement("s*t^(-1)", ring)
    assert parse_relement("s^5", ring) == parse_relement("s*t^(-2)", ring)
    assert render_relement(parse_relement("2 - 1/2*s^2*t^(3/2)", ring)) == "2 - 1/2*s^2*t^(3/2)"


@pytest.mark.parametrize("n", [2, 3, 4, 6])
@pytest.mark.parametrize("delta", DELTAS)
def test_idempotents(n, delta):
    ring = RRing(n, delta)
    e1, e2 = idempotents(ring)
    s = RElement.monomial(ring, 1, 1)
    assert r_mul(e1, e1) == e1 and r_mul(e2, e2) == e2
    assert r_mul(e1, e2).is_zero() and r_mul(s, e1).is_zero()
    assert e1 + e2 == RElement.one(ring)
    assert f_homomorphism(e1).terms == ()
    assert f_homomorphism(e2) == NovikovElement.one()


@given(rings.flatmap(lambda R: st.tuples(st.just(R), relements(R), relements(R), relements(R))))
def test_ring_axioms_and_f(args):
    ring, a, b, c = args
    assert r_mul(a, b) == r_mul(b, a)
    assert r_mul(r_mul(a, b), c) == r_mul(a, r_mul(b, c))
    assert r_mul(a, b + c) == r_mul(a, b) + r_mul(a, c)
    assert f_homomorphism(r_mul(a, b)) == multiply(f_homomorphism(a), f_homomorphism(b))


def random_u(rng, ring):
    n, d = ring.n, ring.delta
    r = rng.choice((1, -1, 2, Fraction(1, 3)))
    k0 = d + Fraction(rng.randint(1, 8), 4) * d
    x = RElement(ring, _coeffs([(rng.randint(0, n), rng.randint(-2, 2) or 1, -rng.randint(1, 6))
                                for _ in range(rng.randint(0, 3))], d / 2))
    one = RElement.one(ring)
    return one + r_mul(RElement.monomial(ring, r, 1, k0), one + x), r, k0


@given(st.integers(0, 10_000), rings)
def test_closed_form_against_generic_and_naive(seed, ring):
    u, r, k0 = random_u(random.Random(seed), ring)
    pat = lemma_u_pattern(u, ring)
    assert (pat.r, pat.kappa0) == (r, k0) and in_x(pat.x)
    floor = k0 - 8 * ring.delta
    inv = lemma_u_inverse(u, ring, floor)
    assert inv.agrees_with(invert_generic(u, ring, floor), floor)
    prod = r_mul(u, inv, ring)
    assert prod.agrees_with(RElement.one(ring), floor + u.lead_t())
    _, y = lemma_u_series(u, ring, floor)
    assert y.agrees_with(naive_y(pat, ring, floor - 2 * ring.delta), floor)


def test_documented_inverse():
    ring = RRing(3, 1)
    u = parse_relement("1 + s*t^(5)", ring)
    assert default_floor(u, ring) == 5 - 20
    inv = lemma_u_inverse(u, ring, -15)
    assert inv.coefficient(1, -4) == 1
    assert inv.coefficient(2, 1) == -1
    assert r_mul(u, inv).agrees_with(RElement.one(ring), -10)


@given(st.integers(0, 10_000), rings)
def test_generic_inverse_of_random_units(seed, ring):
    rng = random.Random(seed)
    a = RElement(ring, _coeffs([(rng.randrange(ring.n), rng.randint(-3, 3) or 1, rng.randint(-4, 2))
                                for _ in range(rng.randint(1, 4))], ring.delta))
    try:
        inv = invert_generic(a, ring, -6)
    except NotAUnit:
        return
    prod = r_mul(a, inv, ring)
    assert prod.agrees_with(RElement.one(ring), prod.floor)


def test_shape_violations():
    ring = RRing(3, 1)
    for text in ("2 + s*t^(5)", "1 + t^(-1)", "1 + s*t^(1)", "1 + s*t^(5) + s^2*t^(6)"):
        with pytest.raises(ShapeViolation):
            lemma_u_pattern(parse_relement(text, ring), ring)
    assert default_floor(parse_relement("2 + s", ring), ring) == -20


def test_zero_divisors_are_not_units():
    ring = RRing(3, 1)
    e1, e2 = idempotents(ring)
    for z in (e1, e2, RElement.monomial(ring, 1, 1)):
        with pytest.raises(NotAUnit):
            invert_generic(z, ring, -5)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_exceptional_table_by_hand(n):
    spec = exceptional_table(n, Fraction(1, 2))
    assert associativity_defects(spec) == []
    e = QHElement.basis(n - 1)
    square = quantum_product(e, e, spec)
    if n == 2:
        assert square == QHElement.basis(0, -1) + QHElement.term(1, 1, -1, Fraction(-1, 2))
    else:
        assert square == QHElement.basis(n - 2)


def test_phi_e_is_multiplicative_on_powers():
    n, delta = 3, Fraction(1)
    spec, ring = exceptional_table(n, delta), RRing(n, delta)
    e = QHElement.term(n - 1, 1, 1, 0)  # E (x) q
    e2 = quantum_product(e, e, spec)
    e3 = quantum_product(e2, e, spec)
    s = RElement.monomial(ring, 1, 1)
    assert phi_e(e2, spec, ring) == r_mul(s, s)
    assert phi_e(e3, spec, ring) == r_mul(r_mul(s, s), s)
