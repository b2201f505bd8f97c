"""Acceptance criteria 1-11, each checked exactly and against its runtime
budget.  Each test prints a PASS/FAIL line, and the lines are repeated
in the terminal summary."""

from conftest import ACCEPTANCE_LINES

from hkcert import verify


def _run(check):
    result = check()
    print(result.line())
    ACCEPTANCE_LINES.append(result.line())
    assert result.correct, result.detail
    assert result.within_budget, f"{result.elapsed:.3f}s exceeds budget {result.budget}s"
    return result


def test_01_todd_identity():
    _run(verify.check_todd_identity)


def test_02_h_polynomial_cross_check():
    _run(verify.check_h_cross)


def test_03_negative_coefficient():
    _run(verify.check_negative_coefficient)


def test_04_sign_profiles():
    _run(verify.check_sign_profiles)


def test_05_hilbert_polynomial():
    _run(verify.check_hilbert)


def test_06_mcm_window():
    _run(verify.check_mcm_window)


def test_07_coverage():
    _run(verify.check_coverage)


def test_08_test_modules():
    r = _run(verify.check_test_modules)
    assert "(1, 1, 1)" in r.detail


def test_09_planner():
    _run(verify.check_planner)


def test_10_hilbert_kunz():
    _run(verify.check_hilbert_kunz)


def test_11_cone():
    _run(verify.check_cone)


def test_all_checks_registered():
    assert [c().number for c in verify.CHECKS] == list(range(1, 12))
