import random
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qhalg.blowup import exceptional_table
from qhalg.novikov import NovikovElement
from qhalg.qring import (
    AssociativityWarning,
    BasisClass,
    EffectiveClass,
    MissingTableEntry,
    QHElement,
    RingSpec,
    SpecError,
    associativity_defects,
    pt_annihilation_test,
    q_minus_ideal_test,
    quantum_product,
    three_point_allowed,
    unit_form_check,
)
from qhalg.tables import projective_space, random_admissible_table, sphere

BASIS = [BasisClass("pt", 0), BasisClass("h", 2), BasisClass("1", 4)]
PAIRING = [[0, 0, 1], [0, 1, 0], [1, 0, 0]]
CLASSES = [EffectiveClass("0", 0, 0), EffectiveClass("L", 1, 3)]
GW3 = [("0", 0, 2, 2, 1), ("0", 1, 1, 2, 1), ("L", 0, 0, 1, 1)]


def plane(**overrides):
    args = dict(n=2, basis=BASIS, pairing=PAIRING, classes=CLASSES, gw3=GW3)
    args.update(overrides)
    return RingSpec(**args)


def mono(i, c=1, q=0, t=0):
    return QHElement.term(i, c, q, t)


def test_projective_plane_products():
    spec = plane()
    pt, h, one = 0, 1, 2
    assert quantum_product(mono(h), mono(h), spec) == mono(pt)
    assert quantum_product(mono(h), mono(pt), spec) == mono(one, 1, -3, -1)
    assert quantum_product(mono(pt), mono(pt), spec) == mono(h, 1, -3, -1)
    assert quantum_product(mono(one), mono(h), spec) == mono(h)


def test_builtin_plane_matches_hand_table():
    spec, builtin = plane(), projective_space(2)
    for i in range(3):
        for j in range(3):
            assert quantum_product(mono(i), mono(j), spec) == quantum_product(mono(i), mono(j), builtin)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_projective_space_is_associative_and_h_power(n):
    spec = projective_space(n)
    assert associativity_defects(spec) == []
    h = mono(spec.index("h"))
    power = QHElement.basis(spec.unit)
    for _ in range(n + 1):
        power = quantum_product(power, h, spec)
    # h^(n+1) = q^-(n+1) t^-1 in the small quantum ring
    assert power == mono(spec.unit, 1, -(n + 1), -1)


def test_dimension_condition_rejects_entry():
    with pytest.raises(SpecError) as exc:
        plane(gw3=GW3 + [("L", 0, 2, 1, 1)])
    assert exc.value.location == "gw3[3]"


def test_fundamental_class_axiom():
    with pytest.raises(SpecError, match="fundamental-class"):
        plane(gw3=[("0", 0, 2, 2, 2)] + GW3[1:])


def test_pairing_must_be_symmetric():
    with pytest.raises(SpecError):
        plane(pairing=[[0, 0, 0], [0, 1, 0], [1, 0, 0]])


def test_missing_entry_raises_on_use():
    spec = plane(gw3=GW3[:2])
    with pytest.raises(MissingTableEntry):
        quantum_product(mono(0), mono(0), spec)


def test_associativity_modes():
    classes = CLASSES + [EffectiveClass("M", 2, 4)]
    gw3 = GW3 + [("M", 0, 0, 0, 1)]
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        plane(classes=classes, gw3=gw3)
    assert any(issubclass(w.category, AssociativityWarning) for w in caught)
    with pytest.raises(SpecError):
        plane(classes=classes, gw3=gw3, associativity="error")
    assert associativity_defects(plane(classes=classes, gw3=gw3, associativity="ignore"))


def test_three_point_dimension_rule():
    assert three_point_allowed(2, 3, [0, 0, 2])
    assert not three_point_allowed(2, 3, [0, 0, 0])


def test_ideal_and_annihilation_on_plane_and_blowup():
    verdict = q_minus_ideal_test(projective_space(2))
    assert not verdict.ideal and verdict.witness[2] == "L"
    blow = exceptional_table(3)
    assert q_minus_ideal_test(blow).describe() == "Q- ideal: yes; strong-uniruled witness: none"
    ann = pt_annihilation_test(blow)
    assert ann.annihilates and ann.agrees_with_ideal_test


def test_unit_form_on_blowup():
    blow = exceptional_table(3)
    form = unit_form_check(QHElement.basis(blow.unit), blow)
    assert form.conforming and form.lam == NovikovElement.one()
    with pytest.raises(ValueError):
        unit_form_check(QHElement.basis(2), projective_space(2))


@given(st.integers(0, 10_000))
def test_random_tables_unit_and_commutativity(seed):
    spec, _ = random_admissible_table(random.Random(seed))
    one = QHElement.basis(spec.unit)
    for i in range(len(spec.basis)):
        assert quantum_product(one, mono(i), spec) == mono(i)
        for j in range(i, len(spec.basis)):
            assert quantum_product(mono(i), mono(j), spec) == quantum_product(mono(j), mono(i), spec)


def test_sphere_square_of_point():
    spec = sphere(omega=Fraction(1, 2))
    pt = spec.point
    assert quantum_product(mono(pt), mono(pt), spec) == mono(spec.unit, 1, -2, Fraction(-1, 2))
