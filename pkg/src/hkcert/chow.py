"""Graded class spaces indexed by geometric dimension, the projection
from Q[a,b]/(a^{m+1}, b^{n+1}) to Q[b]/(b^{n+1}), and the rescaling psi^ell."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .exactalg import BivariateChowClass, RationalLike, fmt_q, q


@dataclass(frozen=True)
class GradedClass:
    """Vector (s_0, ..., s_d) with ``components[i]`` the dimension-i part."""

    d: int
    components: tuple[Fraction, ...]

    def __post_init__(self):
        if self.d < 0:
            raise ValueError("dimension must be non-negative")
        if len(self.components) != self.d + 1:
            raise ValueError("need exactly d+1 components")
        object.__setattr__(self, "components", tuple(q(c) for c in self.components))

    @classmethod
    def zero(cls, d: int) -> "GradedClass":
        return cls(d, (Fraction(0),) * (d + 1))

    @classmethod
    def from_dict(cls, d: int, comps: Mapping[int, RationalLike]) -> "GradedClass":
        vals = [Fraction(0)] * (d + 1)
        for i, c in comps.items():
            i = int(i)
            if not 0 <= i <= d:
                raise ValueError(f"dimension {i} outside 0..{d}")
            vals[i] = q(c)
        return cls(d, tuple(vals))

    @classmethod
    def top_only(cls, d: int, r: RationalLike) -> "GradedClass":
        return cls.from_dict(d, {d: r})

    @classmethod
    def unit(cls, d: int, i: int, c: RationalLike = 1) -> "GradedClass":
        return cls.from_dict(d, {i: c})

    def __getitem__(self, i: int) -> Fraction:
        return self.components[i]

    @property
    def top(self) -> Fraction:
        return self.components[self.d]

    def support(self) -> list[int]:
        return [i for i, c in enumerate(self.components) if c != 0]

    def is_homogeneous(self) -> bool:
        return len(self.support()) == 1

    def _check(self, other):
        if self.d != other.d:
            raise ValueError(f"dimension mismatch: {self.d} vs {other.d}")

    def __add__(self, other):
        if not isinstance(other, GradedClass):
            return NotImplemented
        self._check(other)
        return GradedClass(self.d, tuple(x + y for x, y in zip(self.components, other.components)))

    def __neg__(self):
        return GradedClass(self.d, tuple(-x for x in self.components))

    def __sub__(self, other):
        if not isinstance(other, GradedClass):
            return NotImplemented
        return self + (-other)

    def scale(self, c: RationalLike) -> "GradedClass":
        c = q(c)
        return GradedClass(self.d, tuple(c * x for x in self.components))

    def __mul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    def to_json(self) -> dict[str, str]:
        """Map of dimension -> "num/den", highest dimension first."""
        return {str(i): fmt_q(self.components[i]) for i in range(self.d, -1, -1)}

    @classmethod
    def from_json(cls, d: int, data: Mapping[str, str]) -> "GradedClass":
        return cls.from_dict(d, {int(k): q(v) for k, v in data.items()})


def beta_map(c: BivariateChowClass, ell: int, d: int) -> GradedClass:
    """Image of ``c`` in Q[b]/(b^{n+1}) with a -> -ell*b.

    a^s b^t lands on b^{s+t} with weight (-1)^s ell^s; b^v sits in
    dimension d - v.
    """
    if ell < 1:
        raise ValueError("ell must be positive")
    if d != c.m + c.n + 1:
        raise ValueError(f"d must equal m+n+1 = {c.m + c.n + 1}")
    vals = [Fraction(0)] * (d + 1)
    for (s, t), coef in c.terms():
        v = s + t
        if v <= c.n:
            vals[d - v] += (-1) ** s * ell**s * coef
    return GradedClass(d, tuple(vals))


def psi_ell(c: GradedClass, ell: int) -> GradedClass:
    """Multiply the dimension-i component by ell^i."""
    if ell < 1:
        raise ValueError("ell must be positive")
    return GradedClass(c.d, tuple(x * ell**i for i, x in enumerate(c.components)))


def is_test_class(c: GradedClass) -> bool:
    """True iff the class is concentrated in the top dimension and nonzero there."""
    return c.top > 0 and all(x == 0 for x in c.components[: c.d])
