"""Brute-force Hilbert-Kunz functions of toric rings.

A preset is a pointed affine semigroup cut out of N^r by linear equalities,
with an explicit list of degree-one generators.  The colength of the
Frobenius power I^[q] of a monomial ideal I is the number of semigroup
elements x such that x - q*g is outside the semigroup for every generator
g of I.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .exactalg import fmt_q, rank, solve

DEFAULT_CAP = 10**7

Vector = tuple[int, ...]


def _compositions(total: int, parts: int):
    """All vectors of ``parts`` non-negative integers summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class SemigroupPreset:
    """{x in N^rank : A x = 0} for the integer rows in ``equalities``."""

    name: str
    rank: int
    equalities: tuple[Vector, ...]
    generators: tuple[Vector, ...]

    def contains(self, x: Sequence[int]) -> bool:
        if len(x) != self.rank or any(c < 0 for c in x):
            return False
        return all(sum(a * c for a, c in zip(row, x)) == 0 for row in self.equalities)

    @property
    def dimension(self) -> int:
        """Krull dimension of the semigroup ring."""
        return self.rank - (rank(self.equalities) if self.equalities else 0)


def polynomial(k: int) -> SemigroupPreset:
    if k < 1:
        raise ValueError("need k >= 1")
    gens = tuple(tuple(int(i == j) for j in range(k)) for i in range(k))
    return SemigroupPreset(f"polynomial({k})", k, (), gens)


def segre(m: int, n: int, ell: int = 1) -> SemigroupPreset:
    """Monomials x^u y^v of S # T^(ell): u in N^{m+1}, v in N^{n+1}, ell|u| = |v|."""
    if m < 1 or n < 1 or ell < 1:
        raise ValueError("need m, n, ell >= 1")
    r = m + n + 2
    eq = tuple([ell] * (m + 1) + [-1] * (n + 1))
    gens = []
    for i in range(m + 1):
        u = tuple(int(i == j) for j in range(m + 1))
        for v in _compositions(ell, n + 1):
            gens.append(u + v)
    return SemigroupPreset(f"segre({m},{n},{ell})", r, (eq,), tuple(sorted(gens, reverse=True)))


def quadric() -> SemigroupPreset:
    """k[x,y,z,w]/(xy - zw) as the Segre product of two copies of k[s,t]."""
    p = segre(1, 1, 1)
    return SemigroupPreset("quadric", p.rank, p.equalities, p.generators)


_PRESET_RE = re.compile(r"^\s*(\w+)\s*(?:[(:]\s*([\d,\s]*)\)?)?\s*$")


def parse_preset(text: str) -> SemigroupPreset:
    """Parse "quadric", "polynomial(3)", "polynomial:3", "segre(2,1,1)"."""
    mt = _PRESET_RE.match(text)
    if not mt:
        raise ValueError(f"cannot parse preset {text!r}")
    name, args = mt.group(1).lower(), mt.group(2)
    nums = [int(a) for a in args.split(",") if a.strip()] if args else []
    if name == "quadric" and not nums:
        return quadric()
    if name == "polynomial" and len(nums) == 1:
        return polynomial(nums[0])
    if name == "segre" and len(nums) in (2, 3):
        return segre(*nums)
    raise ValueError(f"unknown preset {text!r}")


@dataclass(frozen=True)
class MonomialIdeal:
    generators: tuple[Vector, ...]

    def __post_init__(self):
        if not self.generators:
            raise ValueError("ideal needs at least one generator")
        if any(all(c == 0 for c in g) for g in self.generators):
            raise ValueError("generators must be nonzero")


def maximal_ideal(preset: SemigroupPreset) -> MonomialIdeal:
    return MonomialIdeal(preset.generators)


def _in_frobenius_power(preset: SemigroupPreset, ideal: MonomialIdeal, q: int, x: Vector) -> bool:
    for g in ideal.generators:
        if preset.contains(tuple(a - q * b for a, b in zip(x, g))):
            return True
    return False


def frobenius_colength(
    preset: SemigroupPreset, ideal: MonomialIdeal, q: int, cap: int = DEFAULT_CAP
) -> int:
    """Length of R / I^[q], by breadth-first search over the complement of I^[q].

    The complement is closed under subtracting semigroup generators, so
    every element of it is reachable from 0 through the complement.
    """
    if q < 1:
        raise ValueError("q must be positive")
    start = (0,) * preset.rank
    if _in_frobenius_power(preset, ideal, q, start):
        return 0
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for g in preset.generators:
            y = tuple(a + b for a, b in zip(x, g))
            if y in seen or _in_frobenius_power(preset, ideal, q, y):
                continue
            seen.add(y)
            if len(seen) > cap:
                raise ValueError(f"complement not finite within cap ({cap} points)")
            queue.append(y)
    return len(seen)


def box_colength(preset: SemigroupPreset, ideal: MonomialIdeal, q: int, bound: int) -> int:
    """Count complement points of I^[q] with every coordinate <= bound.

    A plain scan of the box, used to cross-check the search; ``bound``
    must exceed every coordinate of the complement.
    """
    count = 0
    for x in product(range(bound + 1), repeat=preset.rank):
        if preset.contains(x) and not _in_frobenius_power(preset, ideal, q, x):
            count += 1
    return count


def hk_table(
    preset: SemigroupPreset, ideal: MonomialIdeal, p: int, n_max: int, cap: int = DEFAULT_CAP
) -> list[tuple[int, int]]:
    """[(p^n, length(R/I^[p^n])) for n = 0..n_max]."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    return [(p**n, frobenius_colength(preset, ideal, p**n, cap)) for n in range(n_max + 1)]


@dataclass(frozen=True)
class PolyFit:
    coeffs: tuple[Fraction, ...]  # coeffs[i] multiplies q^i
    verified: bool
    checked: tuple[tuple[int, int], ...]  # points beyond the interpolation set

    def __call__(self, x: int) -> Fraction:
        return sum((c * Fraction(x) ** i for i, c in enumerate(self.coeffs)), Fraction(0))

    def to_json(self) -> dict:
        return {
            "coefficients": {f"q^{i}": fmt_q(c) for i, c in enumerate(self.coeffs)},
            "verified": self.verified,
            "checked_points": [list(pt) for pt in self.checked],
        }


def poly_fit_check(table: Sequence[tuple[int, int]], d: int) -> PolyFit:
    """Interpolate the first d+1 points by a degree-d polynomial in q and
    test it on the remaining points."""
    if len(table) < d + 2:
        raise ValueError("insufficient data: need at least d+2 points")
    head, rest = table[: d + 1], table[d + 1 :]
    coeffs = solve([[x**i for i in range(d + 1)] for x, _ in head], [y for _, y in head])
    fit = PolyFit(tuple(coeffs), False, tuple(tuple(pt) for pt in rest))
    ok = all(fit(x) == y for x, y in rest)
    return PolyFit(fit.coeffs, ok, fit.checked)


def quadric_colength_closed_form(q: int) -> int:
    """sum over degrees s of 2(s+1)P(s) - P(s)^2, P(s) = #{i+j = s : i, j < q}."""
    total = 0
    for s in range(2 * q - 1):
        P = sum(1 for i in range(s + 1) if i < q and s - i < q)
        total += 2 * (s + 1) * P - P * P
    return total

