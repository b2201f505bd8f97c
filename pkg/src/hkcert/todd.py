"""Todd-class calculus on X = P^m x P^n.

The univariate Todd series is f(x) = x / (1 - e^{-x}); the Todd class of
O_X(s, t) is e^{sa} f(a)^{m+1} e^{tb} f(b)^{n+1} in Q[a,b]/(a^{m+1}, b^{n+1}).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import NamedTuple

from .exactalg import (
    BivariateChowClass,
    TruncatedSeries,
    exp_series,
    fmt_q,
    invert_unit_series,
    q,
    sign,
)


@lru_cache(maxsize=None)
def todd_series(order: int) -> TruncatedSeries:
    """f(x) = x/(1 - e^{-x}) to the given order."""
    if order < 0:
        raise ValueError("order must be non-negative")
    e = exp_series(-1, order + 1)
    # (1 - e^{-x})/x: drop the constant term and shift down
    u = TruncatedSeries(order, tuple(-c for c in e.coeffs[1:]))
    return invert_unit_series(u)


@lru_cache(maxsize=None)
def twisted_factor(dim: int, twist: int) -> TruncatedSeries:
    """e^{qx} f(x)^{dim+1} truncated at x^dim: the Todd class of O(q) on P^dim."""
    return exp_series(twist, dim) * todd_series(dim) ** (dim + 1)


def todd_twist(m: int, n: int, s: int, t: int) -> BivariateChowClass:
    """Todd class of O_X(s, t) on P^m x P^n."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    return BivariateChowClass.from_factors(twisted_factor(m, s), twisted_factor(n, t))


# ---------------------------------------------------------------------------
# h_{m,q}(x) = (x+q+m)(x+q+m-1)...(x+q+1)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntegerShiftPolynomial:
    m: int
    q: int
    coeffs: tuple[Fraction, ...]  # index = power of x

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __call__(self, x) -> Fraction:
        x = q(x)
        return sum((c * x**k for k, c in enumerate(self.coeffs)), Fraction(0))

    def to_json(self) -> list[str]:
        return [fmt_q(c) for c in self.coeffs]


@lru_cache(maxsize=None)
def h_poly(m: int, q_: int) -> IntegerShiftPolynomial:
    if m < 1:
        raise ValueError("m must be positive")
    coeffs = [Fraction(1)]
    for r in range(1, m + 1):
        root_shift = q_ + r  # multiply by (x + q + r)
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for k, c in enumerate(coeffs):
            nxt[k + 1] += c
            nxt[k] += root_shift * c
        coeffs = nxt
    return IntegerShiftPolynomial(m, q_, tuple(coeffs))


def coeff_av_via_h(m: int, q_: int, v: int) -> Fraction:
    """Coefficient of a^v in e^{qa} f(a)^{m+1}, read off h_{m,q}.

    Equals ((m-v)!/m!) * [x^{m-v}] h_{m,q}(x), since h_{m,q}/m! is the
    Hilbert polynomial of O(q) on P^m.
    """
    if not 0 <= v <= m:
        raise IndexError("index error: need 0 <= v <= m")
    return Fraction(factorial(m - v), factorial(m)) * h_poly(m, q_).coeff(m - v)


def lemma_neg_coeff_check(m: int, u: int) -> tuple[bool, int | None]:
    """Search q = -1, ..., -m for a negative x^u coefficient of h_{m,q}.

    Returns (found, first witness q in that scan order).
    """
    if m < 2 or not 0 < u < m:
        raise ValueError("range error: need m >= 2 and 0 < u < m")
    for q_ in range(-1, -m - 1, -1):
        if h_poly(m, q_).coeff(u) < 0:
            return True, q_
    return False, None


class SignEntry(NamedTuple):
    q: int
    sign: int
    value: Fraction


def twist_sign_profile(m: int, n: int, v: int) -> list[SignEntry]:
    """Signs of the a^v coefficient of todd_twist(m, n, q, 0) for q = -m..0."""
    if not 1 <= v <= n <= m:
        raise ValueError("range error: need 1 <= v <= n <= m")
    out = []
    for q_ in range(-m, 1):
        val = todd_twist(m, n, q_, 0).coeff(v, 0)
        out.append(SignEntry(q_, sign(val), val))
    return out


def profile_has_both_signs(profile) -> bool:
    signs = {e.sign for e in profile}
    return 1 in signs and -1 in signs


class TopPattern(NamedTuple):
    """Coefficients checked when v = m = n."""

    top_at_0: Fraction  # a^m in todd_twist(m, m, 0, 0), expected > 0
    top_at_minus1: Fraction  # a^m in todd_twist(m, m, -1, 0), expected 0
    mixed_at_minus1: Fraction  # a^{m-1} b in todd_twist(m, m, -1, 0), expected > 0

    @property
    def holds(self) -> bool:
        return self.top_at_0 > 0 and self.top_at_minus1 == 0 and self.mixed_at_minus1 > 0


def top_pattern(m: int) -> TopPattern:
    if m < 1:
        raise ValueError("m must be positive")
    c0 = todd_twist(m, m, 0, 0)
    c1 = todd_twist(m, m, -1, 0)
    return TopPattern(c0.coeff(m, 0), c1.coeff(m, 0), c1.coeff(m - 1, 1))


# ---------------------------------------------------------------------------
# Hilbert polynomials from pushforward degrees
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HilbertPolynomial:
    """P(t) = sum_i ell_i t^i / i!, with ``ell[i]`` the dimension-i degree."""

    ell: tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return len(self.ell) - 1

    def __call__(self, t: int) -> Fraction:
        return hilbert_eval(self, t)

    def to_json(self) -> list[str]:
        return [fmt_q(c) for c in self.ell]


def pushforward_degrees(c: BivariateChowClass, ell: int) -> HilbertPolynomial:
    """Degrees of the graded pieces of ``c`` against the very ample a + ell*b."""
    if ell < 1:
        raise ValueError("ell must be positive")
    m, n = c.m, c.n
    out = [Fraction(0)] * (m + n + 1)
    for (s, t), coef in c.terms():
        i = (m - s) + (n - t)
        out[i] += coef * comb(i, m - s) * ell ** (n - t)
    return HilbertPolynomial(tuple(out))


def hilbert_eval(h: HilbertPolynomial, t: int) -> Fraction:
    return sum((c * Fraction(t) ** i / factorial(i) for i, c in enumerate(h.ell)), Fraction(0))
