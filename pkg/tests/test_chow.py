from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hkcert.chow import GradedClass, beta_map, is_test_class, psi_ell
from hkcert.exactalg import BivariateChowClass

rationals = st.fractions(min_value=-10, max_value=10, max_denominator=8)


def graded(d):
    return st.lists(rationals, min_size=d + 1, max_size=d + 1).map(lambda cs: GradedClass(d, tuple(cs)))


def bivariate(m, n):
    size = (m + 1) * (n + 1)
    return st.lists(rationals, min_size=size, max_size=size).map(
        lambda cs: BivariateChowClass.from_terms(
            m, n, {(s, t): cs[s * (n + 1) + t] for s in range(m + 1) for t in range(n + 1)}
        )
    )


def test_beta_examples():
    m, n = 2, 2
    d = m + n + 1
    a = BivariateChowClass.monomial(m, n, 1, 0)
    assert beta_map(a, 3, d)[d - 1] == -3
    b = BivariateChowClass.monomial(m, n, 0, 1)
    assert beta_map(a + b.scale(3), 3, d) == GradedClass.zero(d)
    ab = BivariateChowClass.monomial(m, n, 1, 1)
    assert beta_map(ab, 2, d) == GradedClass.unit(d, d - 2, -2)


def test_beta_requires_matching_dimension():
    with pytest.raises(ValueError):
        beta_map(BivariateChowClass.one(1, 1), 1, 4)


def test_psi_examples():
    c = GradedClass(3, (0, 0, 1, 1))
    assert psi_ell(c, 2) == GradedClass(3, (0, 0, 4, 8))
    assert psi_ell(c, 1) == c
    assert psi_ell(GradedClass.top_only(4, F(3, 2)), 5) == GradedClass.top_only(4, F(3, 2) * 5**4)


def test_is_test_class_examples():
    assert is_test_class(GradedClass(3, (0, 0, 0, 2)))
    assert not is_test_class(GradedClass(3, (0, 0, F(1, 2), 1)))
    assert not is_test_class(GradedClass.zero(3))


def test_json_round_trip():
    c = GradedClass(3, (F(-1, 3), 0, 2, 1))
    data = c.to_json()
    assert list(data) == ["3", "2", "1", "0"]
    assert data["0"] == "-1/3"
    assert GradedClass.from_json(3, data) == c


@settings(max_examples=40, deadline=None)
@given(graded(4), st.integers(1, 6), st.integers(1, 6))
def test_psi_composition(c, l1, l2):
    assert psi_ell(psi_ell(c, l1), l2) == psi_ell(c, l1 * l2)


@settings(max_examples=40, deadline=None)
@given(bivariate(2, 1), bivariate(2, 1), st.integers(1, 5), rationals)
def test_beta_linearity(x, y, ell, c):
    d = 4
    assert beta_map(x + y, ell, d) == beta_map(x, ell, d) + beta_map(y, ell, d)
    assert beta_map(x.scale(c), ell, d) == beta_map(x, ell, d).scale(c)


@settings(max_examples=30, deadline=None)
@given(st.fractions(min_value=-5, max_value=5, max_denominator=4), st.integers(1, 7))
def test_psi_preserves_test_classes(r, ell):
    c = GradedClass.top_only(3, r)
    assert is_test_class(psi_ell(c, ell)) == is_test_class(c)
