import json
import io as stdio
from pathlib import Path

import pytest

from qhalg.cli import EXIT_INPUT, EXIT_OK, run

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def call(*argv):
    out, err = stdio.StringIO(), stdio.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_analyze_exceptional_table():
    code, out, _ = call("analyze", str(SAMPLES / "exceptional_n3.json"))
    assert code == EXIT_OK
    assert out.splitlines()[0] == "Q- ideal: yes; strong-uniruled witness: none"
    assert "verdicts agree" in out


def test_analyze_projective_plane():
    code, out, _ = call("analyze", str(SAMPLES / "projective_plane.json"))
    assert code == EXIT_OK
    assert "strong-uniruled witness: <pt, h, pt>_L" in out
    assert "unit in Q-: yes; strongly uniruled: yes" in out


def test_invert_documented_example():
    code, out, _ = call("invert", "--n", "3", "--delta", "1", "1 + s*t^(5)")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "closed form: r = 1, k0 = 5"
    assert "floor: -15" in lines
    assert lines[-1] == "u * inverse = 1 above the floor: yes"


def test_invert_generic_branch_and_floor():
    code, out, _ = call("invert", "--n", "2", "--floor", "-3", "2 + s")
    assert code == EXIT_OK
    assert out.startswith("closed form: not applicable")
    assert "floor: -3" in out


def test_seidel_report():
    code, out, _ = call("seidel", str(SAMPLES / "seidel_pair.json"))
    assert code == EXIT_OK
    assert "FAILS" not in out
    assert "witness: -6*s^1*t^(-5/2) forces <E^2>_(sigma-eps) with energy 5/2" in out


def test_dim_and_decompose():
    code, out, _ = call("dim", str(SAMPLES / "dimension.json"))
    assert code == EXIT_OK
    assert "<pt, pt>^P3_line: dimension 0; undetermined" in out
    code, out, _ = call("decompose", str(SAMPLES / "case_eps2.json"))
    assert code == EXIT_OK
    assert "surviving terms: 1" in out


def test_frobenius_structured():
    code, out, _ = call("frobenius", str(SAMPLES / "algebra_x2_minus_3.json"), "--format", "structured")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["unit_criterion_holds"] is True
    assert payload["residue_degrees"] == [2]


def test_input_errors_exit_one(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, out, err = call("frobenius", str(bad))
    assert code == EXIT_INPUT and out == "" and f"{bad}:1:2" in err
    code, _, err = call("invert", "--n", "3", "1 + s*t^(")
    assert code == EXIT_INPUT
    code, _, err = call("analyze", str(tmp_path / "missing.json"))
    assert code == EXIT_INPUT


def test_bad_floor_is_rejected():
    with pytest.raises(SystemExit):
        call("invert", "--n", "3", "--floor", "x", "1")


def test_output_is_stable():
    first = call("decompose", str(SAMPLES / "case_eps2.json"), "--format", "structured")
    second = call("decompose", str(SAMPLES / "case_eps2.json"), "--format", "structured")
    assert first == second
