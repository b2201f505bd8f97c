from fractions import Fraction as F

import pytest

from hkcert.hkcount import (
    MonomialIdeal,
    box_colength,
    frobenius_colength,
    hk_table,
    maximal_ideal,
    parse_preset,
    poly_fit_check,
    polynomial,
    quadric,
    quadric_colength_closed_form,
    segre,
)


def test_examples():
    P2 = polynomial(2)
    assert frobenius_colength(P2, maximal_ideal(P2), 4) == 16
    R = quadric()
    assert frobenius_colength(R, maximal_ideal(R), 1) == 1
    assert frobenius_colength(R, maximal_ideal(R), 2) == 10


def test_tables():
    R = quadric()
    assert hk_table(R, maximal_ideal(R), 2, 3) == [(1, 1), (2, 10), (4, 84), (8, 680)]
    P3 = polynomial(3)
    assert hk_table(P3, maximal_ideal(P3), 2, 2) == [(1, 1), (2, 8), (4, 64)]
    S = segre(1, 1, 1)
    assert hk_table(S, maximal_ideal(S), 3, 2) == hk_table(R, maximal_ideal(R), 3, 2)


def test_quadric_closed_form():
    R = quadric()
    for q_ in range(1, 9):
        want = (4 * q_**3 - q_) // 3
        assert quadric_colength_closed_form(q_) == want
        assert frobenius_colength(R, maximal_ideal(R), q_) == want


@pytest.mark.parametrize("preset", [quadric(), segre(2, 1, 1)])
def test_box_oracle(preset):
    I = maximal_ideal(preset)
    for q_ in (1, 2, 3, 4):
        assert frobenius_colength(preset, I, q_) == box_colength(preset, I, q_, 3 * q_)


def test_fit():
    R = quadric()
    fit = poly_fit_check(hk_table(R, maximal_ideal(R), 2, 4), 3)
    assert fit.verified and fit.coeffs == (0, F(-1, 3), 0, F(4, 3))
    assert fit.checked == ((16, 5456),)
    assert fit.coeffs[3] > 1 and fit.coeffs[1] != 0
    P3 = polynomial(3)
    fit = poly_fit_check(hk_table(P3, maximal_ideal(P3), 2, 4), 3)
    assert fit.verified and fit.coeffs == (0, 0, 0, 1)
    with pytest.raises(ValueError, match="insufficient data"):
        poly_fit_check(hk_table(R, maximal_ideal(R), 2, 2), 3)


def test_unverified_fit():
    fit = poly_fit_check([(1, 1), (2, 4), (3, 10)], 1)
    assert not fit.verified


def test_non_primary_ideal_hits_cap():
    P2 = polynomial(2)
    with pytest.raises(ValueError, match="complement not finite"):
        frobenius_colength(P2, MonomialIdeal(((1, 0),)), 1, cap=200)


def test_presets():
    assert quadric().dimension == 3
    assert segre(2, 1, 2).dimension == 4
    assert parse_preset("polynomial(3)") == polynomial(3)
    assert parse_preset("polynomial:2") == polynomial(2)
    assert parse_preset("segre(2,1,1)") == segre(2, 1, 1)
    assert parse_preset("quadric") == quadric()
    with pytest.raises(ValueError):
        parse_preset("torus(2)")
    assert len(segre(1, 2, 2).generators) == 2 * 6
