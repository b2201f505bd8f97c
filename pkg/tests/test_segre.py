from fractions import Fraction as F

import pytest

from hkcert.chow import GradedClass, is_test_class
from hkcert.errors import SearchExhausted
from hkcert.exactalg import exp_series
from hkcert.segre import (
    SegreDescriptor,
    coverage_report,
    dims_from_d,
    min_ell,
    nq_class,
    nq_is_mcm,
    nq_is_mcm_by_windows,
    nq_todd,
    rank_one_summands,
    rank_one_todd,
    segre_hilbert,
    test_module_search,
    weighted_todd_sum,
)
from hkcert.todd import coeff_av_via_h, todd_series


def test_dims_from_d():
    assert dims_from_d(4) == (2, 1)
    assert dims_from_d(5) == (2, 2)
    assert dims_from_d(7) == (3, 3)
    with pytest.raises(ValueError, match="dimension too small"):
        dims_from_d(2)


def test_segre_hilbert():
    assert segre_hilbert(SegreDescriptor(2, 1, 2), 1) == 9
    assert segre_hilbert(SegreDescriptor(3, 2, 4), 0) == 1
    assert segre_hilbert(SegreDescriptor(1, 1, 1), 2) == 9


def test_mcm_examples():
    desc = SegreDescriptor(2, 1, 3)
    assert nq_is_mcm(desc, -2)
    assert not nq_is_mcm(desc, -3)
    assert not nq_is_mcm(desc, 1)


def test_mcm_matches_window_scan():
    for m in range(1, 5):
        for n in range(1, 5):
            for ell in range(1, 11):
                desc = SegreDescriptor(m, n, ell)
                for q_ in range(-m - 2, m + 3):
                    assert nq_is_mcm(desc, q_) == nq_is_mcm_by_windows(desc, q_)


def test_nq_todd_examples():
    c = nq_todd(SegreDescriptor(1, 1, 1), 0)
    assert (c[3], c[2]) == (1, 0)
    assert is_test_class(c)
    c = nq_todd(SegreDescriptor(2, 1, 1), -1)
    assert (c[4], c[3]) == (1, F(1, 2))
    for m, n, ell, q_ in [(2, 2, 3, -2), (3, 1, 2, 0), (1, 1, 5, -1)]:
        assert nq_todd(SegreDescriptor(m, n, ell), q_).top == 1
    cls = nq_class(SegreDescriptor(2, 1, 1), -1)
    assert cls.mcm and cls.todd == c


def test_nq_todd_uses_beta_formula():
    # b^1 slot = coefficient of b minus ell times the coefficient of a
    for ell in (1, 2, 5):
        desc = SegreDescriptor(3, 1, ell)
        for q_ in range(-3, 1):
            want = F(2, 2) - ell * coeff_av_via_h(3, q_, 1)  # f(b)^2 has b-coefficient 1
            assert nq_todd(desc, q_)[desc.d - 1] == want


def test_chow_profile():
    for d in (4, 5, 6, 7):
        desc = SegreDescriptor.from_dimension(d, 2)
        supp = set()
        for q_ in range(-desc.m, 1):
            supp |= set(nq_todd(desc, q_).support())
        assert supp <= set(range(desc.m + 1, d + 1))
        assert desc.m + 1 > d / 2


def test_rank_one_examples():
    assert rank_one_todd(1, 1, "P", 1) == GradedClass(3, (0, 0, 1, 1))
    assert rank_one_todd(1, 1, "Q", 1) == GradedClass(3, (0, 0, -1, 1))
    for m, n in [(1, 1), (2, 1), (3, 2)]:
        assert rank_one_todd(m, n, "B", 0) == nq_todd(SegreDescriptor(m, n, 1), 0)
        assert rank_one_todd(m, n, "P", 0) == rank_one_todd(m, n, "B", 0)
    with pytest.raises(ValueError, match="not in the MCM list"):
        rank_one_todd(2, 1, "Q", 2)
    labels = [s.label for s in rank_one_summands(2, 2)]
    assert labels == ["P^(2)", "P^(1)", "B", "Q^(1)", "Q^(2)"]


def test_coverage_quadric_is_not_covered():
    rep = coverage_report(SegreDescriptor(1, 1, 1))
    row = rep.rows[0]
    assert dict(row.values) == {-1: 1, 0: 0}
    assert not rep.covered


def test_coverage_large_ell():
    assert coverage_report(SegreDescriptor(2, 1, 50)).rows[0].covered
    rep = coverage_report(SegreDescriptor(2, 2, 50))
    row = rep.rows[1]
    vals = dict(row.values)
    assert vals[0] * vals[-1] < 0 and row.top_pattern


def test_min_ell():
    assert min_ell(1, 1).ell == 2
    res = min_ell(2, 1)
    assert res.report.covered and res.report.desc.ell == res.ell
    res = min_ell(2, 2)
    assert res.report.rows[-1].top_pattern
    with pytest.raises(SearchExhausted, match="no ell"):
        min_ell(1, 1, ell_max=1)


def _series_check(m, n, weights):
    d = m + n + 1
    f = todd_series(n)
    tot = [F(0)] * (n + 1)
    for w, s in zip(weights, rank_one_summands(m, n)):
        i = {"P": m + 1 - s.power, "Q": m + 1 + s.power, "B": m + 1}[s.side]
        j = m + n + 2 - i
        ser = exp_series(-i, n) * f ** (i + j)
        for v in range(n + 1):
            tot[v] += w * ser[v]
    return tot


def test_test_module_11():
    res = test_module_search(1, 1)
    assert res.feasible and res.weights == (1, 1, 1) and res.contains_B and res.verified
    assert res.weighted_sum == GradedClass.top_only(3, 3)
    assert weighted_todd_sum(1, 1, (2, 2, 2)) == GradedClass.top_only(3, 6)


def test_test_module_22():
    res = test_module_search(2, 2)
    assert res.feasible and res.verified and res.contains_B
    assert [list(r) for r in res.constraints] == [
        [2, 1, 0, -1, -2],
        [F(7, 4), F(1, 4), F(-1, 4), F(1, 4), F(7, 4)],
    ]
    tot = _series_check(2, 2, res.weights)
    assert tot[1:] == [0, 0] and tot[0] == sum(res.weights)
    assert (0, 1, 2, 1, 0) in res.rays
    assert _series_check(2, 2, (0, 1, 2, 1, 0)) == [4, 0, 0]


def test_test_module_rejects_m_less_than_n():
    with pytest.raises(ValueError):
        test_module_search(1, 2)


@pytest.mark.parametrize("m,n", [(2, 1), (3, 1), (3, 2), (3, 3)])
def test_test_module_certificates(m, n):
    res = test_module_search(m, n)
    assert res.verified
    if res.feasible:
        tot = _series_check(m, n, res.weights)
        assert all(x == 0 for x in tot[1:])
