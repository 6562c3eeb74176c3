import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qhalg.catalog import base_algebras, catalog, named_examples, with_data
from qhalg.frobenius import (
    AlgebraError,
    AlgebraSpec,
    HypothesisViolation,
    analyze,
    decompose,
    direct_sum,
    frob_equivalence_check,
    frobenius_uniruled_verdict,
    gram_nondegeneracy,
    hypothesis_failures,
    minimal_polynomial,
    nilradical,
    q_minus_unit_search,
    quotient_algebra,
    reconstruct_m,
    socle,
    table_algebra,
)
from qhalg.qring import q_minus_ideal_test
from qhalg.tables import projective_space, random_admissible_table, sphere
from qhalg.blowup import exceptional_table


def F(*xs):
    return [Fraction(x) for x in xs]


HALF = Fraction(1, 2)


def test_dual_numbers():
    alg = quotient_algebra([0, 0, 1], [0, 1], p=1)
    assert nilradical(alg) == [F(0, 1)]
    assert gram_nondegeneracy(alg)
    verdict = frob_equivalence_check(alg)
    assert verdict.p_annihilates and not verdict.has_unit
    assert socle(alg, alg.one) == [F(0, 1)]


def test_field_extension_has_unit_in_q_minus():
    alg = quotient_algebra([-3, 0, 1], [0, 1], p=1)
    assert nilradical(alg) == []
    assert decompose(alg).residue_degrees == [2]
    witness = q_minus_unit_search(alg)
    assert witness is not None and alg.mul(witness.unit, witness.inverse) == alg.one
    assert minimal_polynomial(alg, F(0, 1)) == F(-3, 0, 1)


def test_split_algebra_idempotents():
    alg = quotient_algebra([-1, 0, 1], [0, 1], p=1)
    dec = decompose(alg)
    assert sorted(map(tuple, dec.idempotents)) == [(HALF, -HALF), (HALF, HALF)]
    assert dec.residue_degrees == [1, 1]


def test_named_examples_report():
    for alg in named_examples():
        report = analyze(alg)
        assert report.frob_verdict is not None, alg.name
        p_ann, has_unit = report.frob_verdict
        assert p_ann == (not has_unit)
        assert "unit criterion: holds" in report.render(alg)


def test_catalog_size_and_criterion():
    algs = catalog()
    assert len(algs) >= 500
    rng = random.Random(0)
    for alg in rng.sample(algs, 60):
        assert frob_equivalence_check(alg).holds()


def test_structure_validation():
    with pytest.raises(AlgebraError):
        quotient_algebra([0, 0, 2], [0, 1])
    # non-commutative table
    with pytest.raises(AlgebraError):
        AlgebraSpec(2, {(0, 0, 0): 1, (0, 1, 1): 1, (1, 0, 1): 1, (1, 1, 0): 1, (1, 1, 1): 0,
                        (0, 1, 0): 1}, 0, [0, 1])


def test_reconstruct_m_and_hypotheses():
    alg = quotient_algebra([0, 0, 0, 1], [0, 0, 1])
    m = reconstruct_m(alg, F(0, 0, 1))
    assert len(m) == 1 and alg.apply_f(m[0]) == 0
    with pytest.raises(HypothesisViolation) as exc:
        reconstruct_m(alg, F(0, 1, 0))
    assert exc.value.failures == ["f(p) != 1"]
    bad = quotient_algebra([0, 0, 0, 1], [0, 0, 1], p=F(0, 0, 1), m_subspace=[F(1, 0, 0)])
    assert hypothesis_failures(bad)
    with pytest.raises(HypothesisViolation):
        frob_equivalence_check(bad)


def test_non_frobenius_socle_is_two_dimensional():
    base = base_algebras()[-1]
    alg = with_data(base, [0, 1, 1])
    assert not gram_nondegeneracy(alg)
    assert len(socle(alg, alg.one)) == 2


@settings(max_examples=30)
@given(st.integers(0, 10_000))
def test_tables_verdict_agrees_with_ideal_scan(seed):
    spec, _ = random_admissible_table(random.Random(seed))
    assert frobenius_uniruled_verdict(spec).agree
    assert frobenius_uniruled_verdict(spec).strongly_uniruled == (not q_minus_ideal_test(spec).ideal)


def test_table_bridge_examples():
    verdict = frobenius_uniruled_verdict(projective_space(2))
    assert verdict.unit_in_q_minus and verdict.strongly_uniruled
    verdict = frobenius_uniruled_verdict(exceptional_table(3))
    assert not verdict.unit_in_q_minus and not verdict.strongly_uniruled
    alg = table_algebra(sphere(), 2)
    assert alg.dim == 2 and gram_nondegeneracy(alg)


def test_direct_sum_unit():
    a = quotient_algebra([0, 0, 1], [0, 0])
    s = direct_sum(a, a, [0, 0, 1, 1])
    assert s.mul(s.one, s.basis_vector(2)) == s.basis_vector(2)
    assert len(nilradical(s)) == 2
