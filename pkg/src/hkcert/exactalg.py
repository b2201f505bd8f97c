"""Exact rational arithmetic: truncated univariate series, the truncated
bivariate ring Q[a,b]/(a^{m+1}, b^{n+1}), and small dense linear algebra.

Everything here works over :class:`fractions.Fraction`; nothing is ever
rounded.  Values are immutable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, gcd
from typing import Iterable, Sequence, Union

Rational = Fraction
RationalLike = Union[int, Fraction, str]


def q(x: RationalLike) -> Fraction:
    """Coerce ints, Fractions and "num/den" strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def fmt_q(x: RationalLike) -> str:
    """Serialize as "num/den", or "k" when the denominator is 1."""
    x = q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def sign(x: RationalLike) -> int:
    x = q(x)
    return (x > 0) - (x < 0)


# ---------------------------------------------------------------------------
# Truncated univariate series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TruncatedSeries:
    """Power series c_0 + c_1 x + ... + c_K x^K modulo x^{K+1}."""

    order: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("order must be non-negative")
        if len(self.coeffs) != self.order + 1:
            raise ValueError("series needs exactly order+1 coefficients")
        object.__setattr__(self, "coeffs", tuple(q(c) for c in self.coeffs))

    @classmethod
    def from_list(cls, coeffs: Iterable[RationalLike], order: int | None = None):
        cs = [q(c) for c in coeffs]
        if order is None:
            order = len(cs) - 1
        cs = (cs + [Fraction(0)] * (order + 1))[: order + 1]
        return cls(order, tuple(cs))

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls.from_list([1], order)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k]

    def __len__(self) -> int:
        return len(self.coeffs)

    def _check(self, other: "TruncatedSeries"):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        if other.order != self.order:
            raise ValueError(
                f"order mismatch: {self.order} vs {other.order} (truncate explicitly)"
            )
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return TruncatedSeries(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return TruncatedSeries(self.order, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return TruncatedSeries(self.order, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if self._check(other) is NotImplemented:
            return NotImplemented
        K = self.order
        out = [Fraction(0)] * (K + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j in range(K + 1 - i):
                    b = other.coeffs[j]
                    if b:
                        out[i + j] += a * b
        return TruncatedSeries(K, tuple(out))

    __rmul__ = __mul__

    def scale(self, c: RationalLike) -> "TruncatedSeries":
        c = q(c)
        return TruncatedSeries(self.order, tuple(c * a for a in self.coeffs))

    def __pow__(self, k: int) -> "TruncatedSeries":
        if k < 0:
            return invert_unit_series(self) ** (-k)
        result = TruncatedSeries.one(self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def truncate(self, order: int) -> "TruncatedSeries":
        """Re-truncate to a lower order, or pad with zeros.

        Padding is only exact when the caller knows the higher terms vanish.
        """
        return TruncatedSeries.from_list(self.coeffs[: order + 1], order)

    def negate_variable(self) -> "TruncatedSeries":
        """Return s(-x)."""
        return TruncatedSeries(
            self.order, tuple(c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs))
        )

    def to_json(self) -> list[str]:
        return [fmt_q(c) for c in self.coeffs]


def exp_series(c: RationalLike, order: int) -> TruncatedSeries:
    """e^{cx} truncated at x^order."""
    if order < 0:
        raise ValueError("order must be non-negative")
    c = q(c)
    return TruncatedSeries(order, tuple(c**k / factorial(k) for k in range(order + 1)))


def invert_unit_series(u: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse of a series with nonzero constant term."""
    if u.coeffs[0] == 0:
        raise ValueError("non-unit series")
    K = u.order
    inv0 = 1 / u.coeffs[0]
    out = [inv0] + [Fraction(0)] * K
    for k in range(1, K + 1):
        acc = sum((u.coeffs[j] * out[k - j] for j in range(1, k + 1)), Fraction(0))
        out[k] = -acc * inv0
    return TruncatedSeries(K, tuple(out))


# ---------------------------------------------------------------------------
# Q[a,b]/(a^{m+1}, b^{n+1})
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BivariateChowClass:
    """Element sum q_{st} a^s b^t of Q[a,b]/(a^{m+1}, b^{n+1}).

    ``coeffs[s][t]`` is the coefficient of a^s b^t; on P^m x P^n that
    monomial is a cycle of dimension (m - s) + (n - t).
    """

    m: int
    n: int
    coeffs: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError("m and n must be non-negative")
        if len(self.coeffs) != self.m + 1 or any(len(r) != self.n + 1 for r in self.coeffs):
            raise ValueError("coefficient matrix must be (m+1) x (n+1)")
        object.__setattr__(
            self, "coeffs", tuple(tuple(q(c) for c in row) for row in self.coeffs)
        )

    @classmethod
    def zero(cls, m: int, n: int) -> "BivariateChowClass":
        return cls(m, n, tuple((Fraction(0),) * (n + 1) for _ in range(m + 1)))

    @classmethod
    def monomial(cls, m: int, n: int, s: int, t: int, c: RationalLike = 1):
        rows = [[Fraction(0)] * (n + 1) for _ in range(m + 1)]
        if s <= m and t <= n:
            rows[s][t] = q(c)
        return cls(m, n, tuple(tuple(r) for r in rows))

    @classmethod
    def one(cls, m: int, n: int) -> "BivariateChowClass":
        return cls.monomial(m, n, 0, 0, 1)

    @classmethod
    def from_terms(cls, m: int, n: int, terms: dict[tuple[int, int], RationalLike]):
        rows = [[Fraction(0)] * (n + 1) for _ in range(m + 1)]
        for (s, t), c in terms.items():
            if s < 0 or t < 0:
                raise ValueError("exponents must be non-negative")
            if s <= m and t <= n:
                rows[s][t] += q(c)
        return cls(m, n, tuple(tuple(r) for r in rows))

    @classmethod
    def from_factors(cls, sa: TruncatedSeries, sb: TruncatedSeries) -> "BivariateChowClass":
        """Product g(a) h(b) for g truncated at a^m and h at b^n."""
        return cls(
            sa.order, sb.order, tuple(tuple(x * y for y in sb.coeffs) for x in sa.coeffs)
        )

    def coeff(self, s: int, t: int) -> Fraction:
        if 0 <= s <= self.m and 0 <= t <= self.n:
            return self.coeffs[s][t]
        return Fraction(0)

    def terms(self):
        """Yield ((s, t), coefficient) for the nonzero terms."""
        for s, row in enumerate(self.coeffs):
            for t, c in enumerate(row):
                if c:
                    yield (s, t), c

    def _same_ring(self, other: "BivariateChowClass"):
        if (self.m, self.n) != (other.m, other.n):
            raise ValueError(f"ring mismatch: ({self.m},{self.n}) vs ({other.m},{other.n})")

    def __add__(self, other):
        if not isinstance(other, BivariateChowClass):
            return NotImplemented
        self._same_ring(other)
        return BivariateChowClass(
            self.m,
            self.n,
            tuple(tuple(x + y for x, y in zip(r1, r2)) for r1, r2 in zip(self.coeffs, other.coeffs)),
        )

    def __neg__(self):
        return BivariateChowClass(self.m, self.n, tuple(tuple(-x for x in r) for r in self.coeffs))

    def __sub__(self, other):
        if not isinstance(other, BivariateChowClass):
            return NotImplemented
        return self + (-other)

    def scale(self, c: RationalLike) -> "BivariateChowClass":
        c = q(c)
        return BivariateChowClass(self.m, self.n, tuple(tuple(c * x for x in r) for r in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, BivariateChowClass):
            return NotImplemented
        return bivariate_mul(self, other)

    __rmul__ = __mul__

    def to_json(self) -> list[list[str]]:
        return [[fmt_q(c) for c in row] for row in self.coeffs]


def bivariate_mul(p: BivariateChowClass, r: BivariateChowClass) -> BivariateChowClass:
    """Product in Q[a,b]/(a^{m+1}, b^{n+1})."""
    p._same_ring(r)
    m, n = p.m, p.n
    out = [[Fraction(0)] * (n + 1) for _ in range(m + 1)]
    rterms = list(r.terms())
    for (s1, t1), c1 in p.terms():
        for (s2, t2), c2 in rterms:
            s, t = s1 + s2, t1 + t2
            if s <= m and t <= n:
                out[s][t] += c1 * c2
    return BivariateChowClass(m, n, tuple(tuple(row) for row in out))


# ---------------------------------------------------------------------------
# Dense exact linear algebra
# ---------------------------------------------------------------------------


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    A = [list(r) for r in rows]
    pivots: list[int] = []
    if not A:
        return A, pivots
    ncols = len(A[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        pv = A[r][c]
        A[r] = [x / pv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A, pivots


def rank(matrix: Sequence[Sequence[RationalLike]]) -> int:
    return len(_rref([[q(x) for x in row] for row in matrix])[1])


def nullspace(matrix: Sequence[Sequence[RationalLike]], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : A x = 0}, one vector per free column."""
    rows = [[q(x) for x in row] for row in matrix]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    R, pivots = _rref(rows)
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -R[i][free]
        basis.append(v)
    return basis


def solve(matrix: Sequence[Sequence[RationalLike]], rhs: Sequence[RationalLike]) -> list[Fraction]:
    """Unique solution of a square nonsingular system A x = b."""
    n = len(matrix)
    aug = [[q(x) for x in row] + [q(b)] for row, b in zip(matrix, rhs)]
    if any(len(row) != n + 1 for row in aug):
        raise ValueError("solve() needs a square system")
    R, pivots = _rref(aug)
    if pivots != list(range(n)):
        raise ValueError("singular system")
    return [R[i][n] for i in range(n)]


def primitive_integer_vector(v: Sequence[RationalLike]) -> list[int]:
    """Scale a rational vector to coprime integers, keeping its direction."""
    v = [q(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g == 0:
        return ints
    return [x // g for x in ints]
