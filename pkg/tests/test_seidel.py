import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qhalg.acceptance import conforming_pair
from qhalg.blowup import RRing, exceptional_table, parse_relement
from qhalg.qring import EffectiveClass, QHElement
from qhalg.seidel import (
    LoopData,
    NonPositiveEnergyTail,
    PatternViolation,
    WitnessAbsent,
    ZeroUnitCoefficient,
    check_maximal_shape,
    extract_inverse_witness,
    k2_relations_check,
    kappa0_extract,
    seidel_compose,
    seidel_from_leading,
    su_unit_normalize,
)
from qhalg.tables import projective_space, sphere


def test_assembly_follows_the_coupling_rule():
    spec = projective_space(2)
    loop = LoopData(3, 1)
    u = EffectiveClass("u", Fraction(1, 2), 1)
    s = seidel_from_leading({1: 1}, 1, loop, [("u", {2: 2})], {"u": u}, spec.unit)
    assert s.element == QHElement.term(1, 1, 1, 3) + QHElement.term(2, 2, 0, Fraction(5, 2))
    assert kappa0_extract(s) == Fraction(1, 2)
    assert check_maximal_shape(s)
    assert s.ledger.is_additive({"u": u})
    rebased = s.ledger.rebase(u)
    assert (rebased.coupling, rebased.vert_chern) == (Fraction(-5, 2), 0)


def test_tail_energy_must_be_positive():
    with pytest.raises(NonPositiveEnergyTail):
        seidel_from_leading(0, 1, LoopData(1, 0), [("z", 0)], {"z": EffectiveClass("z", 0, 1)}, 2)


def test_missing_unit_coefficient():
    s = seidel_from_leading(0, 1, LoopData(1, 0), unit=1)
    with pytest.raises(ZeroUnitCoefficient):
        kappa0_extract(s)


@given(st.sampled_from([Fraction(1), Fraction(2, 3)]), st.integers(-4, 4))
def test_rotation_of_sphere_composes_to_unit(omega, k):
    spec = sphere(omega=omega)
    loop = LoopData(Fraction(k, 3), Fraction(k, 3) - omega)
    s = seidel_from_leading(spec.point, 1, loop, unit=spec.unit)
    s_inv = seidel_from_leading(spec.point, 1, loop.inverse(), unit=spec.unit)
    assert seidel_compose(s, s_inv, spec) == QHElement.basis(spec.unit)


@given(st.integers(0, 10_000))
def test_conforming_pairs(seed):
    n, delta, k0, (s, s_inv, s_blow, s_blow_inv), blow, r = conforming_pair(random.Random(seed))
    report = k2_relations_check(s, s_inv, s_blow, s_blow_inv)
    assert report.all_hold and report.kappa0 == k0
    ring = RRing(n, delta)
    norm = su_unit_normalize(s_blow, ring, blow, k0 - 20 * delta)
    assert (norm.r, norm.kappa0) == (r, k0)
    w = extract_inverse_witness(norm.u, ring, s_blow.loop, norm.kappa0)
    assert w.coefficient == 1 / r
    assert w.class_energy == (k0 - delta if n >= 3 else k0 - 2 * delta)


def test_broken_identity_is_reported():
    n, delta, k0, (s, s_inv, s_blow, s_blow_inv), blow, r = conforming_pair(random.Random(3))
    report = k2_relations_check(s, s_inv, s_blow, s_blow)
    assert not report.all_hold
    assert "FAILS" in report.render()


def test_pattern_violation_without_s_term():
    n, delta = 3, Fraction(1)
    blow, ring = exceptional_table(n, delta), RRing(n, delta)
    s = seidel_from_leading({blow.unit: 1}, 0, LoopData(2, 0), unit=blow.unit)
    with pytest.raises(PatternViolation):
        su_unit_normalize(s, ring, blow)


def test_witness_requires_shape():
    ring = RRing(3, 1)
    with pytest.raises(WitnessAbsent):
        extract_inverse_witness(parse_relement("1 + s*t^(1/2)", ring), ring, LoopData(2, 0), Fraction(1, 2))
    with pytest.raises(WitnessAbsent):
        extract_inverse_witness(parse_relement("1 + s*t^(3)", ring), ring, LoopData(4, 0), 2)
