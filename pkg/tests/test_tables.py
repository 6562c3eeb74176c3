import random

from hypothesis import given, settings, strategies as st

from qhalg.qring import QHElement, associativity_defects, q_minus_ideal_test, quantum_product
from qhalg.tables import product, projective_factor, projective_space, random_admissible_table, zero_table


def test_zero_table_is_classical():
    spec = zero_table(2)
    h = QHElement.basis(spec.index("h"))
    pt = QHElement.basis(spec.point)
    assert quantum_product(h, pt, spec).is_zero()
    assert q_minus_ideal_test(spec).ideal


def test_scaled_relation():
    spec = projective_space(1, scale=3)
    pt = QHElement.basis(spec.point)
    assert quantum_product(pt, pt, spec) == QHElement.term(spec.unit, 3, -2, -1)


def test_product_of_lines_is_associative():
    spec = product(projective_factor(1, 1, 1, "A"), projective_factor(1, 2, 3, "B")).spec()
    assert len(spec.basis) == 4
    assert associativity_defects(spec) == []


@settings(max_examples=25)
@given(st.integers(0, 10_000))
def test_random_tables_are_associative_and_flagged(seed):
    spec, strongly = random_admissible_table(random.Random(seed))
    assert len(spec.basis) <= 12
    assert associativity_defects(spec) == []
    assert strongly == (not q_minus_ideal_test(spec).ideal)
