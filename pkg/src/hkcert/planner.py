"""Symbolic execution of the Hilbert-Kunz construction.

Given a sign pattern eps_0..eps_d, a Chern-character functional lambda on
the graded class space, a seed class tau([A + N']) and the class of a test
module, this builds the class tau([A + N]) one dimension at a time so that
lambda_i * tau_i has sign eps_i, then assembles the resulting Hilbert-Kunz
polynomial

    l(R / I^[p^n]) = alpha p^{dn} + sum_{i<d} eps_i beta_i p^{in}

for the idealization R of A by N.  Modules, complexes and ideals are only
represented by their numerical shadows.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .chow import GradedClass, is_test_class, psi_ell
from .exactalg import RationalLike, fmt_q, q, sign, solve


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class SignPattern:
    eps: tuple[int, ...]  # eps[i] for i = 0..d

    def __post_init__(self):
        eps = tuple(int(e) for e in self.eps)
        object.__setattr__(self, "eps", eps)
        if len(eps) < 2:
            raise ValueError("invalid pattern: need at least eps_0 and eps_1")
        d = len(eps) - 1
        if eps[d] != 1:
            raise ValueError("invalid pattern: eps_d must be 1")
        for i, e in enumerate(eps[:d]):
            if e not in (-1, 0, 1):
                raise ValueError(f"invalid pattern: eps_{i} = {e} not in {{-1,0,1}}")
            if 2 * i <= d and e != 0:
                raise ValueError(f"invalid pattern: eps_{i} must be 0 for i <= d/2")

    @property
    def d(self) -> int:
        return len(self.eps) - 1

    @classmethod
    def parse(cls, text: str) -> "SignPattern":
        return cls(tuple(int(x) for x in text.replace(" ", "").split(",") if x))

    def __str__(self) -> str:
        return ",".join(str(e) for e in self.eps)


def free_dimensions(d: int) -> list[int]:
    """Dimensions i with d/2 < i < d."""
    return [i for i in range(d) if 2 * i > d]


def admissible_patterns(d: int) -> list[SignPattern]:
    free = free_dimensions(d)
    out = []
    for choice in product((-1, 0, 1), repeat=len(free)):
        eps = [0] * (d + 1)
        eps[d] = 1
        for i, e in zip(free, choice):
            eps[i] = e
        out.append(SignPattern(tuple(eps)))
    return out


@dataclass(frozen=True)
class ChernFunctional:
    """Values lambda_0..lambda_d of ch(F.) on the basis class of each dimension."""

    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(q(x) for x in self.values))

    @property
    def d(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]

    def __call__(self, c: GradedClass) -> Fraction:
        if c.d != self.d:
            raise ValueError("dimension mismatch between functional and class")
        return sum((a * b for a, b in zip(self.values, c.components)), Fraction(0))

    @classmethod
    def ones(cls, d: int) -> "ChernFunctional":
        return cls((Fraction(1),) * (d + 1))

    def check_pattern(self, pattern: SignPattern) -> None:
        if self.d != pattern.d:
            raise ValueError("functional and pattern have different dimensions")
        if self.values[self.d] <= 0:
            raise ValueError("functional must be positive on the top class")
        for i, e in enumerate(pattern.eps):
            if e != 0 and self.values[i] == 0:
                raise ValueError(f"functional cannot realize pattern: lambda_{i} = 0 but eps_{i} != 0")


# ---------------------------------------------------------------------------
# Combining complexes
# ---------------------------------------------------------------------------


def combine_functionals(
    fns: Sequence[ChernFunctional], targets: Sequence[int]
) -> tuple[list[int], ChernFunctional]:
    """Positive multiplicities n_k with sum n_k fns[k] nonzero at every target.

    Builds G_k = c_k G_{k-1} + fns[k] with the smallest c_k >= 1 keeping the
    targets seen so far nonzero; at most one value of c_k can cancel each
    target, so the search is finite.  Then n_k = c_{k+1} * ... * c_t.
    """
    if not fns or len(fns) != len(targets):
        raise ValueError("need one target dimension per functional")
    d = fns[0].d
    if any(f.d != d for f in fns):
        raise ValueError("functionals have different dimensions")
    if any(f[d] < 0 for f in fns) or all(f[d] == 0 for f in fns):
        raise ValueError("target not reachable: top values must be >= 0 with one positive")
    for f, i in zip(fns, targets):
        if f[i] == 0:
            raise ValueError(f"target not reachable: functional is zero at dimension {i}")
    acc = list(fns[0].values)
    factors = [1]
    for k in range(1, len(fns)):
        f = fns[k].values
        c = 1
        while any(c * acc[i] + f[i] == 0 for i in targets[: k + 1]):
            c += 1
        acc = [c * a + b for a, b in zip(acc, f)]
        factors.append(c)
    mults = []
    for k in range(len(fns)):
        nk = 1
        for c in factors[k + 1 :]:
            nk *= c
        mults.append(nk)
    combined = ChernFunctional(tuple(acc))
    if any(combined[i] == 0 for i in targets) or combined[d] <= 0:
        raise ValueError("target not reachable")
    return mults, combined


# ---------------------------------------------------------------------------
# Correction classes
# ---------------------------------------------------------------------------


LOWER_RANGE = 3


def correction_class(
    b: GradedClass,
    test_class: GradedClass,
    rng: random.Random | None = None,
) -> tuple[GradedClass, int]:
    """Class of an MCM module L with tau(L) = rank [Spec] + n b + (lower terms).

    ``n`` is the smallest positive integer making n*b integral.  The rank is
    taken from ``test_class`` (L = N_1 + M^{rank N_1} with rank N_1 = 1).
    Lower-dimensional terms are zero, or seeded random integers in
    [-3, 3] on the dimensions strictly between d/2 and that of b when an
    ``rng`` is supplied.
    """
    if not is_test_class(test_class):
        raise ValueError("test_class must be concentrated in the top dimension")
    if b.d != test_class.d:
        raise ValueError("dimension mismatch")
    supp = b.support()
    if len(supp) != 1 or supp[0] == b.d:
        raise ValueError("inhomogeneous target: b must be a nonzero class below the top")
    i_star = supp[0]
    n = b[i_star].denominator
    comps = {b.d: test_class.top, i_star: n * b[i_star]}
    if rng is not None:
        for i in range(i_star - 1, -1, -1):
            if 2 * i > b.d:
                comps[i] = rng.randint(-LOWER_RANGE, LOWER_RANGE)
    return GradedClass.from_dict(b.d, comps), n


# ---------------------------------------------------------------------------
# Inductive construction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PlannerStep:
    j: int
    dimension: int
    e: int
    f: int
    n: int
    b: GradedClass
    correction: GradedClass
    result: GradedClass

    def to_json(self) -> dict:
        return {
            "j": self.j,
            "dimension": self.dimension,
            "e": self.e,
            "f": self.f,
            "n": self.n,
            "b": self.b.to_json(),
            "correction": self.correction.to_json(),
            "result": self.result.to_json(),
        }

    @classmethod
    def from_json(cls, d: int, data: dict) -> "PlannerStep":
        return cls(
            data["j"], data["dimension"], data["e"], data["f"], data["n"],
            GradedClass.from_json(d, data["b"]),
            GradedClass.from_json(d, data["correction"]),
            GradedClass.from_json(d, data["result"]),
        )


@dataclass(frozen=True)
class Step2Result:
    pattern: SignPattern
    functional: ChernFunctional
    seed: GradedClass
    final: GradedClass
    steps: tuple[PlannerStep, ...]
    betas: tuple[Fraction, ...]


def default_test_class(d: int) -> GradedClass:
    return GradedClass.top_only(d, 2)


def step2_induct(
    pattern: SignPattern,
    lam: ChernFunctional,
    seed: GradedClass,
    test_class: GradedClass | None = None,
    rng: random.Random | None = None,
) -> Step2Result:
    """Correct the seed class dimension by dimension, from d-1 down to 0.

    At dimension i with the sign of lambda_i v_i wrong, a correction class
    L with component n*b at i is added: v <- e v + f tau(L).  For eps_i = 0
    we take b = -v_i, f = 1, e = n, which zeroes the slot; otherwise b is the
    basis class signed so that lambda(b) has sign eps_i, e = 1 and f is the
    least integer with f n |lambda(b)| > |lambda_i v_i|.
    """
    d = pattern.d
    lam.check_pattern(pattern)
    if seed.d != d:
        raise ValueError("seed has the wrong dimension")
    if seed.top <= 0:
        raise ValueError("seed must have a positive top component")
    if any(seed[i] != 0 for i in range(d) if 2 * i <= d):
        raise ValueError("seed has classes in dimensions <= d/2, where the Chow group vanishes")
    if test_class is None:
        test_class = default_test_class(d)

    v = seed
    steps = []
    for j in range(d):
        i = d - j - 1
        eps = pattern.eps[i]
        if sign(lam[i] * v[i]) == eps:
            continue
        if eps == 0:
            b = GradedClass.unit(d, i, -v[i])
            L, n = correction_class(b, test_class, rng)
            e, f = n, 1
        else:
            b = GradedClass.unit(d, i, eps * sign(lam[i]))
            L, n = correction_class(b, test_class, rng)
            e = 1
            f = int(abs(lam[i] * v[i]) // (n * abs(lam(b)))) + 1
        v = v.scale(e) + L.scale(f)
        steps.append(PlannerStep(j, i, e, f, n, b, L, v))

    betas = []
    for i in range(d + 1):
        if i == d:
            betas.append(lam[d] * v[d])
        elif pattern.eps[i] != 0:
            betas.append(pattern.eps[i] * lam[i] * v[i])
        else:
            betas.append(Fraction(1))
    return Step2Result(pattern, lam, seed, v, tuple(steps), tuple(betas))


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------


RING_NOTE = "R = idealization of A by N; I obtained from a parameter-ideal relation (numerical bookkeeping only)"


@dataclass(frozen=True)
class HKCertificate:
    pattern: SignPattern
    betas: tuple[Fraction, ...]
    alpha: Fraction
    colengths: tuple[int, ...]
    p: int
    functional: ChernFunctional | None = None
    seed: GradedClass | None = None
    final: GradedClass | None = None
    steps: tuple[PlannerStep, ...] = ()
    random_seed: int | None = None
    provenance: str = RING_NOTE
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def d(self) -> int:
        return self.pattern.d

    def coefficients(self) -> list[Fraction]:
        """Coefficients c_0..c_d of the polynomial in p^n."""
        out = [self.pattern.eps[i] * self.betas[i] for i in range(self.d)]
        out.append(self.alpha)
        return out

    def to_json(self) -> dict:
        d = self.d
        out = {
            "d": d,
            "p": self.p,
            "pattern": list(self.pattern.eps),
            "betas": [fmt_q(x) for x in self.betas],
            "alpha": fmt_q(self.alpha),
            "colengths": list(self.colengths),
            "coefficients": [fmt_q(x) for x in self.coefficients()],
            "provenance": self.provenance,
            "random_seed": self.random_seed,
        }
        if self.functional is not None:
            out["lambda"] = [fmt_q(x) for x in self.functional.values]
        if self.seed is not None:
            out["seed"] = self.seed.to_json()
        if self.final is not None:
            out["final_class"] = self.final.to_json()
        out["steps"] = [s.to_json() for s in self.steps]
        out.update(self.extra)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "HKCertificate":
        d = int(data["d"])
        pattern = SignPattern(tuple(data["pattern"]))
        lam = data.get("lambda")
        seed = data.get("seed")
        final = data.get("final_class")
        known = {
            "d", "p", "pattern", "betas", "alpha", "colengths", "coefficients",
            "provenance", "random_seed", "lambda", "seed", "final_class", "steps",
        }
        return cls(
            pattern=pattern,
            betas=tuple(q(x) for x in data["betas"]),
            alpha=q(data["alpha"]),
            colengths=tuple(int(x) for x in data["colengths"]),
            p=int(data["p"]),
            functional=ChernFunctional(tuple(q(x) for x in lam)) if lam is not None else None,
            seed=GradedClass.from_json(d, seed) if seed is not None else None,
            final=GradedClass.from_json(d, final) if final is not None else None,
            steps=tuple(PlannerStep.from_json(d, s) for s in data.get("steps", [])),
            random_seed=data.get("random_seed"),
            provenance=data.get("provenance", RING_NOTE),
            extra={k: v for k, v in data.items() if k not in known},
        )


def step3_assemble(
    trace: Step2Result,
    colengths: Sequence[int] | None = None,
    p: int = 2,
    random_seed: int | None = None,
) -> HKCertificate:
    """alpha = eps_d beta_d + sum of parameter-ideal colengths."""
    if colengths is None:
        colengths = (1,)
    colengths = tuple(int(c) for c in colengths)
    if any(c <= 0 for c in colengths):
        raise ValueError("colengths must be positive integers")
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if any(b <= 0 for b in trace.betas):
        raise ValueError("all betas must be positive")
    alpha = trace.pattern.eps[trace.pattern.d] * trace.betas[-1] + sum(colengths)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    return HKCertificate(
        trace.pattern, trace.betas, alpha, colengths, p,
        trace.functional, trace.seed, trace.final, trace.steps, random_seed,
    )


def hk_eval(cert: HKCertificate, n: int) -> Fraction:
    """alpha p^{dn} + sum_{i<d} eps_i beta_i p^{in}."""
    if n < 1:
        raise ValueError("n must be positive")
    qn = cert.p**n
    return sum((c * qn**i for i, c in enumerate(cert.coefficients())), Fraction(0))


def hk_eval_via_psi(cert: HKCertificate, n: int) -> Fraction:
    """The same value as lambda(psi^{p^n}(final class)) + colengths * p^{dn}."""
    if cert.functional is None or cert.final is None:
        raise ValueError("certificate has no functional/final class recorded")
    qn = cert.p**n
    return cert.functional(psi_ell(cert.final, qn)) + sum(cert.colengths) * qn**cert.d


def recover_coefficients(values: Sequence[RationalLike], p: int, d: int) -> list[Fraction]:
    """Solve the Vandermonde system sum_i c_i (p^n)^i = values[n-1], n = 1..d+1."""
    if len(values) != d + 1:
        raise ValueError("need exactly d+1 values")
    rows = [[(p**n) ** i for i in range(d + 1)] for n in range(1, d + 2)]
    return solve(rows, values)


def plan(
    pattern: SignPattern,
    p: int,
    lam: ChernFunctional | None = None,
    seed: GradedClass | None = None,
    colengths: Sequence[int] | None = None,
    random_seed: int | None = None,
    test_class: GradedClass | None = None,
) -> HKCertificate:
    """Full pipeline with the Segre-derived defaults.

    The default seed is tau([A + N_{-1}]) over S # T^(1) in dimension d
    (2[Spec A] when d < 3), and the default functional is all ones.
    """
    from .segre import SegreDescriptor, nq_todd

    d = pattern.d
    if lam is None:
        lam = ChernFunctional.ones(d)
    if seed is None and d >= 3:
        desc = SegreDescriptor.from_dimension(d, 1)
        seed = nq_todd(desc, 0) + nq_todd(desc, -1)
    elif seed is None:
        seed = GradedClass.top_only(d, 2)
    rng = random.Random(random_seed) if random_seed is not None else None
    trace = step2_induct(pattern, lam, seed, test_class, rng)
    return step3_assemble(trace, colengths, p, random_seed)
