"""Segre products B = S # T^(ell) of polynomial rings in m+1 and n+1
variables: Hilbert functions, the MCM window for the twisted modules N_q,
their Todd classes, sign coverage, and the search for test modules among
the rank-one MCM modules of the determinantal (ell = 1) ring.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import NamedTuple

from .chow import GradedClass, beta_map
from .errors import InvariantViolation, SearchExhausted
from .exactalg import fmt_q, nullspace, primitive_integer_vector, rank, sign
from .lp import linprog_exact
from .todd import todd_series, todd_twist

DEFAULT_ELL_MAX = 10_000


@dataclass(frozen=True)
class SegreDescriptor:
    m: int
    n: int
    ell: int = 1

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("m and n must be positive")
        if self.ell < 1:
            raise ValueError("ell must be positive")

    @property
    def d(self) -> int:
        return self.m + self.n + 1

    @classmethod
    def from_dimension(cls, d: int, ell: int = 1) -> "SegreDescriptor":
        m, n = dims_from_d(d)
        return cls(m, n, ell)

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "ell": self.ell, "d": self.d}


def dims_from_d(d: int) -> tuple[int, int]:
    """(m, n) with m + n + 1 = d and m = n or m = n + 1."""
    if d < 3:
        raise ValueError("dimension too small: need d >= 3")
    if d % 2 == 0:
        return d // 2, d // 2 - 1
    return (d - 1) // 2, (d - 1) // 2


def segre_hilbert(desc: SegreDescriptor, t: int) -> int:
    """dim_k B_t = C(t+m, m) * C(ell*t + n, n)."""
    if t < 0:
        raise ValueError("t must be non-negative")
    return comb(t + desc.m, desc.m) * comb(desc.ell * t + desc.n, desc.n)


# ---------------------------------------------------------------------------
# MCM window for N_q = S(q) # T^(ell)
# ---------------------------------------------------------------------------


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def lc_nonzero_S(i: int, s: int, m: int, q: int) -> bool:
    """Whether the degree-s part of H^i(S(q)) is nonzero (i = 0 means S(q) itself)."""
    return (i == 0 and s >= -q) or (i == m + 1 and s <= -q - m - 1)


def lc_nonzero_T(i: int, s: int, n: int, ell: int) -> bool:
    """Same for the Veronese T^(ell) of a polynomial ring in n+1 variables."""
    return (i == 0 and s >= 0) or (i == n + 1 and s <= -_ceil_div(n + 1, ell))


def mcm_windows(desc: SegreDescriptor, q: int) -> dict:
    """Degree supports of the modules whose Segre products obstruct depth."""
    m, n, ell = desc.m, desc.n, desc.ell
    c = _ceil_div(n + 1, ell)
    return {
        "S(q)": f"s >= {-q}",
        f"H^{m + 1}(S(q))": f"s <= {-q - m - 1}",
        "T^(ell)": "s >= 0",
        f"H^{n + 1}(T^(ell))": f"s <= {-c}",
        "inequality": f"{-m - 1} < q < {c}",
    }


def nq_is_mcm(desc: SegreDescriptor, q: int) -> bool:
    """-m-1 < q < ceil((n+1)/ell)."""
    return -desc.m - 1 < q < _ceil_div(desc.n + 1, desc.ell)


def nq_is_mcm_by_windows(desc: SegreDescriptor, q: int) -> bool:
    """Scan degrees for an overlap of S(q) with H^{n+1}(T^(ell)) or of
    H^{m+1}(S(q)) with T^(ell); N_q is MCM iff neither overlap occurs."""
    m, n, ell = desc.m, desc.n, desc.ell
    bound = abs(q) + m + n + 2
    for s in range(-bound, bound + 1):
        if lc_nonzero_S(0, s, m, q) and lc_nonzero_T(n + 1, s, n, ell):
            return False
        if lc_nonzero_S(m + 1, s, m, q) and lc_nonzero_T(0, s, n, ell):
            return False
    return True


@dataclass(frozen=True)
class SegreModuleClass:
    desc: SegreDescriptor
    q: int
    todd: GradedClass
    mcm: bool


def nq_todd(desc: SegreDescriptor, q: int) -> GradedClass:
    """Todd class of N_q: beta applied to the Todd class of O_X(q, 0)."""
    return beta_map(todd_twist(desc.m, desc.n, q, 0), desc.ell, desc.d)


def nq_class(desc: SegreDescriptor, q: int) -> SegreModuleClass:
    return SegreModuleClass(desc, q, nq_todd(desc, q), nq_is_mcm(desc, q))


# ---------------------------------------------------------------------------
# Rank-one MCM modules of the determinantal ring (ell = 1)
# ---------------------------------------------------------------------------


class RankOneClass(NamedTuple):
    side: str  # "P", "B" or "Q"
    power: int
    todd: GradedClass

    @property
    def label(self) -> str:
        return "B" if self.side == "B" else f"{self.side}^({self.power})"


def _rank_one_exponents(m: int, n: int, side: str, s: int) -> tuple[int, int]:
    if side == "P" and 0 <= s <= m:
        return m + 1 - s, n + 1 + s
    if side == "Q" and 0 <= s <= n:
        return m + 1 + s, n + 1 - s
    if side == "B" and s == 0:
        return m + 1, n + 1
    raise ValueError(f"not in the MCM list: side={side!r}, s={s}")


def rank_one_todd(m: int, n: int, side: str, s: int) -> GradedClass:
    """Todd class f(-b)^i f(b)^j of P^(s), B or Q^(s), truncated at b^{n+1}.

    The coefficient of b^v is placed in dimension d - v.
    """
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    i, j = _rank_one_exponents(m, n, side, s)
    f = todd_series(n)
    series = f.negate_variable() ** i * f**j
    d = m + n + 1
    return GradedClass.from_dict(d, {d - v: series[v] for v in range(n + 1)})


def rank_one_class(m: int, n: int, side: str, s: int) -> RankOneClass:
    return RankOneClass(side, s, rank_one_todd(m, n, side, s))


def rank_one_summands(m: int, n: int) -> list[RankOneClass]:
    """P^(m), ..., P^(1), B, Q^(1), ..., Q^(n), in weight-index order k = 0..m+n."""
    out = [rank_one_class(m, n, "P", m - k) for k in range(m)]
    out.append(rank_one_class(m, n, "B", 0))
    out.extend(rank_one_class(m, n, "Q", t) for t in range(1, n + 1))
    return out


# ---------------------------------------------------------------------------
# Sign coverage
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoverageRow:
    v: int
    values: tuple[tuple[int, Fraction], ...]  # (q, b^v component) for q = -m..0
    both_signs: bool
    top_pattern: bool | None  # only meaningful when v = m = n
    covered: bool

    def to_json(self) -> dict:
        out = {
            "v": self.v,
            "values": [{"q": q_, "value": fmt_q(x), "sign": sign(x)} for q_, x in self.values],
            "both_signs": self.both_signs,
            "covered": self.covered,
        }
        if self.top_pattern is not None:
            out["top_pattern"] = self.top_pattern
        return out


@dataclass(frozen=True)
class CoverageReport:
    desc: SegreDescriptor
    rows: tuple[CoverageRow, ...]

    @property
    def covered(self) -> bool:
        return all(r.covered for r in self.rows)

    def to_json(self) -> dict:
        return {
            "descriptor": self.desc.to_json(),
            "covered": self.covered,
            "verdict": "covered" if self.covered else "not covered",
            "rows": [r.to_json() for r in self.rows],
        }


def _coverage_from_classes(desc: SegreDescriptor, classes: dict[int, GradedClass]) -> CoverageReport:
    m, n, d = desc.m, desc.n, desc.d
    rows = []
    for v in range(1, n + 1):
        vals = tuple((q_, classes[q_][d - v]) for q_ in range(-m, 1))
        signs = {sign(x) for _, x in vals}
        both = 1 in signs and -1 in signs
        pattern = None
        if v == m == n:
            s0, s1 = sign(classes[0][d - v]), sign(classes[-1][d - v])
            pattern = s0 != 0 and s1 != 0 and s0 != s1
        covered = both and (pattern is None or pattern)
        rows.append(CoverageRow(v, vals, both, pattern, covered))
    return CoverageReport(desc, tuple(rows))


def coverage_report(desc: SegreDescriptor) -> CoverageReport:
    """Signs of the b^v components of the Todd classes of N_q, q = -m..0."""
    classes = {q_: nq_todd(desc, q_) for q_ in range(-desc.m, 1)}
    return _coverage_from_classes(desc, classes)


@dataclass(frozen=True)
class MinEllResult:
    ell: int
    report: CoverageReport

    def to_json(self) -> dict:
        return {"ell": self.ell, "report": self.report.to_json()}


def min_ell(m: int, n: int, ell_max: int = DEFAULT_ELL_MAX) -> MinEllResult:
    """Smallest ell <= ell_max whose coverage report is fully covered."""
    if ell_max < 1:
        raise ValueError("ell_max must be positive")
    twists = {q_: todd_twist(m, n, q_, 0) for q_ in range(-m, 1)}
    d = m + n + 1
    for ell in range(1, ell_max + 1):
        desc = SegreDescriptor(m, n, ell)
        classes = {q_: beta_map(c, ell, d) for q_, c in twists.items()}
        report = _coverage_from_classes(desc, classes)
        if report.covered:
            return MinEllResult(ell, report)
    raise SearchExhausted(f"no ell <= {ell_max} achieves coverage")


# ---------------------------------------------------------------------------
# Test modules built from rank-one MCM modules
# ---------------------------------------------------------------------------


def extreme_rays(constraints: list[list[Fraction]], ncols: int) -> list[list[int]]:
    """Primitive integer generators of the pointed cone {w >= 0 : C w = 0}.

    Rays are the non-negative elementary vectors: minimal supports on which
    the kernel is one-dimensional and the kernel vector is one-signed.
    """
    r = rank(constraints) if constraints else 0
    rays = []
    for size in range(1, r + 2):
        for support in combinations(range(ncols), size):
            sub = [[row[j] for j in support] for row in constraints]
            ns = nullspace(sub, size) if constraints else [[Fraction(1)]]
            if len(ns) != 1:
                continue
            vec = ns[0]
            if any(x == 0 for x in vec):
                continue
            if all(x < 0 for x in vec):
                vec = [-x for x in vec]
            elif not all(x > 0 for x in vec):
                continue
            full = [Fraction(0)] * ncols
            for j, x in zip(support, vec):
                full[j] = x
            rays.append(primitive_integer_vector(full))
    return rays


@dataclass(frozen=True)
class TestModuleResult:
    m: int
    n: int
    feasible: bool
    summands: tuple[str, ...]
    constraints: tuple[tuple[Fraction, ...], ...]  # rows v = 1..n, columns k
    weights: tuple[int, ...] | None = None
    rays: tuple[tuple[int, ...], ...] = ()
    witness: tuple[Fraction, ...] | None = None
    verified: bool = False
    weighted_sum: GradedClass | None = field(default=None, compare=False)

    __test__ = False  # not a pytest class

    @property
    def contains_B(self) -> bool:
        return bool(self.weights) and self.weights[self.m] > 0

    def to_json(self) -> dict:
        out = {
            "m": self.m,
            "n": self.n,
            "feasible": self.feasible,
            "summands": list(self.summands),
            "constraints": [[fmt_q(x) for x in row] for row in self.constraints],
            "verified": self.verified,
        }
        if self.feasible:
            out["weights"] = list(self.weights)
            out["contains_B"] = self.contains_B
            out["rays"] = [list(r) for r in self.rays]
            out["weighted_todd_sum"] = self.weighted_sum.to_json()
            out["verdict"] = (
                "test module containing B" if self.contains_B else "test module without B"
            )
        else:
            out["farkas_witness"] = [fmt_q(x) for x in self.witness]
            out["verdict"] = "no test module from rank-one summands"
        return out


def weighted_todd_sum(m: int, n: int, weights) -> GradedClass:
    total = GradedClass.zero(m + n + 1)
    for w, summand in zip(weights, rank_one_summands(m, n)):
        total = total + summand.todd.scale(w)
    return total


def test_module_search(m: int, n: int) -> TestModuleResult:
    """Non-negative weights on the rank-one MCM modules killing b^1..b^n.

    The returned weights are the primitive sum of the extreme rays of the
    solution cone, i.e. a point in its relative interior: every summand that
    can appear in some test module appears here.  When the cone is {0}, a
    functional y with y . column_k > 0 for all k is returned instead.
    """
    if not m >= n >= 1:
        raise ValueError("need m >= n >= 1")
    summands = rank_one_summands(m, n)
    d = m + n + 1
    N = len(summands)
    C = [[s.todd[d - v] for s in summands] for v in range(1, n + 1)]
    labels = tuple(s.label for s in summands)
    rays = extreme_rays(C, N)
    if rays:
        weights = primitive_integer_vector([sum(col) for col in zip(*rays)])
        total = weighted_todd_sum(m, n, weights)
        verified = total == GradedClass.top_only(d, sum(weights))
        return TestModuleResult(
            m, n, True, labels, tuple(map(tuple, C)), tuple(weights),
            tuple(map(tuple, rays)), None, verified, total,
        )
    # Gordan alternative: y with y . C_k >= 1 for every column k
    cols = [[C[v][k] for v in range(n)] for k in range(N)]
    res = linprog_exact(
        [0] * n, A_ub=[[-x for x in col] for col in cols], b_ub=[-1] * N, free=True
    )
    if not res.success:
        raise InvariantViolation("neither a solution nor a separating functional was found")
    y = res.x
    verified = all(sum(a * b for a, b in zip(y, col)) > 0 for col in cols)
    return TestModuleResult(m, n, False, labels, tuple(map(tuple, C)), None, (), tuple(y), verified)


test_module_search.__test__ = False  # keep pytest from collecting it on import
