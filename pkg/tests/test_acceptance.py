"""Acceptance suite: each criterion at its stated tolerance and time budget."""

import shutil
import subprocess
import sys
import time

import pytest

from qhalg.acceptance import CRITERIA, DEFAULT_SEED

BUDGETS = {1: 1.0, 2: 5.0, 3: 30.0, 4: 10.0, 5: 5.0, 6: 5.0, 7: 30.0, 8: 60.0}


def report(capsys, number, passed, text):
    with capsys.disabled():
        print(f"\ncriterion {number}: {'PASS' if passed else 'FAIL'} {text}")


@pytest.mark.parametrize("number", sorted(BUDGETS))
def test_criterion(number, capsys):
    start = time.perf_counter()
    result = CRITERIA[number - 1](DEFAULT_SEED)
    elapsed = time.perf_counter() - start
    budget = BUDGETS[number]
    in_time = elapsed < budget
    report(capsys, number, result.passed and in_time,
           f"{result.title} ({result.detail}; {elapsed:.2f} s of {budget:.0f} s)")
    assert result.number == number
    assert result.passed, result.detail
    assert in_time, f"took {elapsed:.2f} s, budget {budget} s"


def _selftest_command():
    exe = shutil.which("qhalg")
    return [exe, "selftest"] if exe else [sys.executable, "-m", "qhalg.cli", "selftest"]


def test_criterion_9_determinism(capsys):
    runs = [subprocess.run(_selftest_command(), capture_output=True, timeout=600) for _ in range(2)]
    identical = runs[0].stdout == runs[1].stdout
    ok = identical and all(r.returncode == 0 for r in runs)
    report(capsys, 9, ok, f"selftest twice, {len(runs[0].stdout)} bytes, byte-identical: {identical}")
    assert all(r.returncode == 0 for r in runs), runs[0].stderr.decode()
    assert identical
    assert runs[0].stdout.decode().count(": PASS ") == 8
