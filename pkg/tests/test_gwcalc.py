import random

import pytest
from hypothesis import given, settings, strategies as st

from qhalg import oracles
from qhalg.cases import absolute_case, eps2_case, random_toy_case
from qhalg.gwcalc import (
    CurveClass,
    DescendentUnderflow,
    Expression,
    ForcedZero,
    HomologyBasis,
    Insertion,
    InvariantSymbol,
    MissingPairing,
    OracleUnavailable,
    Skeleton,
    Space,
    Tail,
    ZERO_CLASS,
    admissible_skeletons,
    canonical_key,
    cut_down_dimension,
    decomposition_enumerate,
    lp1_expand,
    relative_dimension,
    ring_intersection_oracle,
    vanishing_by_dimension,
    zero_class_evaluate,
)
from qhalg.tables import projective_space

P2 = Space("P2", 2, codims={"pt": 2, "h": 1, "1": 0})
LINE = CurveClass("L", 1, 3)


def test_relative_dimension_formula():
    assert relative_dimension(3, 4, 2) == 3 + 4 + 2 - 3
    assert relative_dimension(3, 4, 2, [1, 2]) == 3 + 4 + 2 + 4 - 3 - 3
    with pytest.raises(ValueError):
        relative_dimension(3, 4, 0, [0])


def test_cut_down_dimension_of_lines_through_points():
    assert cut_down_dimension(InvariantSymbol("P2", LINE, ["pt", "pt"]), P2) == 0
    assert not vanishing_by_dimension(InvariantSymbol("P2", LINE, ["pt", "pt"]), P2)
    verdict = vanishing_by_dimension(InvariantSymbol("P2", LINE, ["pt", "h"]), P2)
    assert isinstance(verdict, ForcedZero) and verdict.rule == "dimension"
    assert not vanishing_by_dimension(InvariantSymbol("P2", LINE, [(1, "pt"), "h", "h"]), P2)


def test_tail_rule_and_rule_order():
    space = Space("X", 3, codims={"pt": 3}, divisor_dims={"D": 1})
    beta = CurveClass("b", 1, 2, divisor_degree=2)
    sym = InvariantSymbol("X", beta, ["pt"], [Tail(1, "D")])
    v = vanishing_by_dimension(sym, space)
    assert v.rule == "tails" and "sum to 1" in v.reason
    neg = InvariantSymbol("X", CurveClass("c", 1, 2, divisor_degree=-1), ["pt"])
    assert vanishing_by_dimension(neg, space).rule == "tails"
    assert vanishing_by_dimension(sym, space, rules=("dimension",)).rule == "dimension"


def test_exceptional_rule():
    n = 3
    space = Space("B", n, codims={f"E^{k}": k for k in range(1, n)},
                  exceptional_powers={f"E^{k}": k for k in range(1, n)})
    line = CurveClass("eps", 1, n - 1, exceptional=1)
    alive = InvariantSymbol("B", line, ["E^1", "E^2", "E^2"])
    assert not vanishing_by_dimension(alive, space, rules=("exceptional",))
    dead = InvariantSymbol("B", line, ["E^1", "E^1", "E^2"])
    assert vanishing_by_dimension(dead, space).rule == "exceptional"
    double = InvariantSymbol("B", CurveClass("2eps", 2, 2 * (n - 1), exceptional=2), ["E^1", "E^2", "E^2"])
    assert vanishing_by_dimension(double, space).rule == "exceptional"


def test_fiber_rule():
    space = Space("W", 3, codims={"pt": 3, "F": 2}, fiber_constraints=frozenset({"pt", "F"}), fibered=True)
    fiber = CurveClass("f", 1, 2, fiber=True)
    assert vanishing_by_dimension(InvariantSymbol("W", fiber, ["pt", "F"]), space).rule == "fiber"
    assert not vanishing_by_dimension(InvariantSymbol("W", fiber, ["pt"]), space)


def test_zero_class_values():
    oracle = ring_intersection_oracle(projective_space(2))
    assert zero_class_evaluate(InvariantSymbol("P2", ZERO_CLASS, ["pt", "1", "1"]), oracle, P2) == 1
    assert zero_class_evaluate(InvariantSymbol("P2", ZERO_CLASS, [(1, "h"), "h", "1", "1"]), oracle, P2) == 1
    # (p-3)!/prod k_i! with p = 5, k = (2, 0, ...)
    sym = InvariantSymbol("P2", ZERO_CLASS, [(2, "h"), "h", "1", "1", "1"])
    assert zero_class_evaluate(sym, oracle, P2) == 1
    sym = InvariantSymbol("P2", ZERO_CLASS, [(1, "h"), (1, "h"), "1", "1", "1"])
    assert zero_class_evaluate(sym, oracle, P2) == 2
    assert zero_class_evaluate(InvariantSymbol("P2", ZERO_CLASS, [(1, "pt"), "h", "1"]), oracle, P2)
    with pytest.raises(OracleUnavailable):
        zero_class_evaluate(InvariantSymbol("P2", ZERO_CLASS, ["pt", "1", "1"]))


def test_missing_pairing():
    with pytest.raises(MissingPairing):
        LINE.pairing("H")
    assert ZERO_CLASS.pairing("H") == 0


def test_expression_collects_terms():
    a = InvariantSymbol("M", LINE, ["pt", "h"])
    b = InvariantSymbol("M", LINE, ["h", "pt"])
    e = Expression()
    e.add_term(2, (a,))
    e.add_term(-2, (b,))
    assert e.items() == []


@settings(max_examples=40)
@given(st.integers(0, 10_000))
def test_lp1_matches_brute_force(seed):
    sym, (i, j, k), splits, labels, pairing = oracles.random_lp1_instance(random.Random(seed))
    got = oracles.expression_table(lp1_expand(sym, i, j, k, splits, HomologyBasis(labels, pairing)))
    assert got == oracles.brute_lp1(sym, i, j, k, splits, labels, pairing)


def test_lp1_needs_a_descendent():
    sym = InvariantSymbol("M", LINE, ["h", "h", "pt"])
    with pytest.raises(DescendentUnderflow):
        lp1_expand(sym, 0, 1, 2, [(ZERO_CLASS, LINE)], HomologyBasis(["a"], [[1]]))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_eps2_instance_has_one_survivor(n):
    target, case = eps2_case(n)
    result = decomposition_enumerate(target, case)
    assert len(result.survivors) == 1
    assert all(reason for _, reason in result.discarded)


def test_absolute_pattern_instance():
    target, case = absolute_case(3)
    result = decomposition_enumerate(target, case)
    (survivor,) = result.survivors
    assert survivor.edges == () and survivor.y_components == ()
    assert survivor.x_components[0].canonical().render() == "<H, H, pt>^Mt_beta"


@settings(max_examples=25)
@given(st.integers(0, 10_000))
def test_toy_skeletons_match_brute_force(seed):
    target, case = random_toy_case(random.Random(seed))
    mine = admissible_skeletons(target, case)
    brute = oracles.brute_skeletons(target, case)
    assert {oracles.skeleton_form(s.x_components, s.y_components, s.edges) for s in mine} == set(brute)
    assert len(mine) == len(brute)


def test_canonical_key_ignores_component_order():
    a = InvariantSymbol("X", CurveClass("x0"), [], [Tail(1, "b")])
    b = InvariantSymbol("X", CurveClass("x1"), [], [Tail(1, "b")])
    y = InvariantSymbol("Y", CurveClass("y0"), [], [Tail(1, "b*"), Tail(1, "b*")])
    s1 = Skeleton((a, b), (y,), ((0, 0, 1, "b"), (1, 0, 1, "b")))
    s2 = Skeleton((b, a), (y,), ((1, 0, 1, "b"), (0, 0, 1, "b")))
    assert canonical_key(s1) == canonical_key(s2)
    s3 = Skeleton((a, a), (y,), ((0, 0, 1, "b"), (1, 0, 1, "b")))
    assert canonical_key(s1) != canonical_key(s3)


def test_insertion_validation():
    with pytest.raises(ValueError):
        Insertion(-1, "pt")
    with pytest.raises(ValueError):
        Tail(0, "D")
    assert InvariantSymbol("M", LINE, [(1, "pt"), "h"], [(2, "D")]).render() == "<h, tau1 pt | D@2>^M_L"


@pytest.mark.parametrize("n", [2, 3, 4])
def test_descendent_point_with_one_contact(n):
    space = Space("Pn", n, codims={"pt": n}, divisor_dims={f"D^{j}": n - j for j in range(1, n + 1)})
    for d in range(1, 4):
        beta = CurveClass(f"{d}f", d, d * (n + 1), divisor_degree=d)
        for j in range(1, n + 1):
            for k in range(0, n * d + 2):
                sym = InvariantSymbol("Pn", beta, [(k, "pt")], [Tail(d, f"D^{j}")])
                assert (not vanishing_by_dimension(sym, space)) == (k == n * d - j)
