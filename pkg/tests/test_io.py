import json
import random

import pytest

from qhalg import io
from qhalg.acceptance import conforming_pair
from qhalg.blowup import exceptional_table
from qhalg.catalog import named_examples
from qhalg.qring import QHElement, quantum_product
from qhalg.tables import projective_space


def write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data))
    return path


def same_products(a, b):
    size = len(a.basis)
    assert [x.name for x in a.basis] == [x.name for x in b.basis]
    for i in range(size):
        for j in range(size):
            assert quantum_product(QHElement.basis(i), QHElement.basis(j), a) == \
                quantum_product(QHElement.basis(i), QHElement.basis(j), b)


@pytest.mark.parametrize("spec", [projective_space(2), exceptional_table(3)])
def test_ring_round_trip(spec):
    same_products(spec, io.ring_from_data(json.loads(json.dumps(io.ring_to_data(spec)))))


def test_builtin_ring(tmp_path):
    path = write(tmp_path, "r.json", {"builtin": {"kind": "exceptional", "n": 4, "delta": "1/2"}})
    same_products(io.load_ring(path), exceptional_table(4, "1/2"))


def test_json_error_has_line_and_column(tmp_path):
    path = write(tmp_path, "bad.json", '{\n  "n": 2,\n  oops\n}')
    with pytest.raises(io.InputError) as exc:
        io.load_ring(path)
    assert exc.value.location == f"{path}:3:3"


def test_ring_error_locations(tmp_path):
    data = io.ring_to_data(projective_space(2))
    data["gw3"].append(["L", "pt", "1", "h", 1])
    with pytest.raises(io.InputError) as exc:
        io.ring_from_data(data)
    assert exc.value.location == "ring.gw3[3]"
    data = io.ring_to_data(projective_space(2))
    data["gw3"][0][1] = "nope"
    with pytest.raises(io.InputError, match="unknown basis class"):
        io.ring_from_data(data)
    with pytest.raises(io.InputError, match="missing"):
        io.ring_from_data({"n": 2})


def test_numbers_accept_rational_strings():
    assert io._num("3/7", "x") == io._num([3, 7][0], "x") * io._num("1/7", "x")
    with pytest.raises(io.InputError):
        io._num("abc", "x")
    with pytest.raises(io.InputError):
        io._int(1.5, "x")


def test_algebra_round_trip():
    for alg in named_examples():
        back = io.algebra_from_data(json.loads(json.dumps(io.algebra_to_data(alg))))
        assert back.table == alg.table and back.f == alg.f and back.p == alg.p


def test_algebra_errors():
    with pytest.raises(io.InputError, match="index out of range"):
        io.algebra_from_data({"dim": 2, "unit_index": 0, "structure": [[0, 0, 5, 1]], "f": [0, 1]})
    with pytest.raises(io.InputError, match="cannot reconstruct M"):
        io.algebra_from_data({"dim": 2, "unit_index": 0, "structure": [[0, 0, 0, 1], [0, 1, 1, 1]],
                              "f": [1, 1], "p": 1})


def test_seidel_round_trip(tmp_path):
    n, delta, k0, els, blow, r = conforming_pair(random.Random(11))
    names = ("s", "s_inv", "s_blow", "s_blow_inv")
    data = {"blowup": {"n": n, "delta": io.fraction_json(delta)},
            "elements": {k: io.seidel_to_data(e) for k, e in zip(names, els)}}
    loaded = io.load_seidel_file(write(tmp_path, "s.json", data))
    assert loaded["blowup"] == (n, delta)
    for k, e in zip(names, els):
        got = loaded["elements"][k]
        assert got.unit == e.unit and got.loop == e.loop and got.ledger == e.ledger
        assert got.element.agrees_with(e.element, min(t for _, c in e.element.coeffs for _, _, t in c.terms))


def test_seidel_term_must_match_ledger():
    data = {"loop": {"k_max": 1, "k_min": 0}, "reference": {"label": "r", "coupling": -1, "vert_chern": -1},
            "terms": [[0, 1, 1, 1], [0, 1, "1/2", 1]]}
    with pytest.raises(io.InputError, match="matches no section class"):
        io.seidel_from_data(data, 0, "s")


def test_case_and_dimension_files(tmp_path):
    target, case = io.load_case(write(tmp_path, "c.json", {"builtin": {"kind": "eps2", "n": 3}}))
    assert target.render() == "<tau1 pt>^P'_sigma"
    space, syms = io.load_dimension_file(write(tmp_path, "d.json", {
        "space": {"label": "P2", "dim": 2, "codims": {"pt": 2}},
        "symbols": [{"space": "P2", "class": {"label": "L", "omega": 1, "chern": 3},
                     "absolute": ["pt", "pt"], "relative": []}]}))
    assert space.dim == 2 and syms[0].render() == "<pt, pt>^P2_L"
    with pytest.raises(io.InputError, match="contact multiplicities"):
        io.symbol_from_data({"space": "X", "class": {"label": "b"}, "relative": [[0, "D"]]}, "s")
