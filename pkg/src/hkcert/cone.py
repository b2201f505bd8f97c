"""A finite cone model of module classes: membership with exact Farkas
certificates, nef-functional checks and psi^p stability.

Classes are rational vectors in Q^rho.  For the quadric preset the two
coordinates are the top-dimensional and the next Todd components of the
rank-one modules over the Segre product of two projective lines.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactalg import RationalLike, fmt_q, q, rank, solve
from .errors import InvariantViolation
from .lp import linprog_exact
from .segre import rank_one_todd

Vector = tuple[Fraction, ...]


def _vec(v: Sequence[RationalLike]) -> Vector:
    return tuple(q(x) for x in v)


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def parse_vector(text: str) -> Vector:
    """Parse "1,0" or "1/2,-3" into a rational vector."""
    try:
        return _vec(part.strip() for part in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse vector {text!r}") from exc


@dataclass(frozen=True)
class ConeModel:
    """The cone spanned by ``generators`` in Q^rho.

    ``dims[k]`` is the geometric dimension carried by coordinate k (used by
    psi^p); ``classes`` holds named classes that are not generators.
    """

    generators: tuple[Vector, ...]
    labels: tuple[str, ...]
    dims: tuple[int, ...]
    classes: dict[str, Vector] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(_vec(g) for g in self.generators))
        if not self.generators:
            raise ValueError("need at least one generator")
        if len(self.labels) != len(self.generators):
            raise ValueError("one label per generator")
        if any(len(g) != self.rho for g in self.generators) or len(self.dims) != self.rho:
            raise ValueError("generators and dims must share one length")

    @property
    def rho(self) -> int:
        return len(self.dims)

    def full_dimensional(self) -> bool:
        return rank(self.generators) == self.rho

    def to_json(self) -> dict:
        return {
            "generators": {lab: [fmt_q(x) for x in g] for lab, g in zip(self.labels, self.generators)},
            "dims": list(self.dims),
            "classes": {k: [fmt_q(x) for x in v] for k, v in self.classes.items()},
        }


def quadric_model() -> ConeModel:
    """Cone spanned by the two non-free rank-one modules P, Q of the quadric.

    Coordinates (top component, next component) are read off the Todd
    classes of the rank-one modules at m = n = 1.
    """
    m = n = 1
    d = m + n + 1

    def coords(side: str, s: int) -> Vector:
        c = rank_one_todd(m, n, side, s)
        return (c[d], c[d - 1])

    B, P, Q = coords("B", 0), coords("P", 1), coords("Q", 1)
    return ConeModel((P, Q), ("P", "Q"), (d, d - 1), {"B": B, "P": P, "Q": Q})


QUADRIC_FUNCTIONALS: tuple[Vector, ...] = tuple(_vec(f) for f in ((1, 0), (2, 1), (2, -1)))


@dataclass(frozen=True)
class ConeVerdict:
    """Membership verdict with a certificate.

    If ``contains``: ``weights`` are non-negative (positive when strict)
    with sum(w_i g_i) = query.  Otherwise ``witness`` y satisfies
    y.g >= 0 for every generator and y.query < 0; when strict, instead
    sum(y.g) >= 1 and y.query <= 0.
    """

    query: Vector
    strict: bool
    contains: bool
    weights: Vector | None = None
    witness: Vector | None = None

    def to_json(self) -> dict:
        out = {
            "query": [fmt_q(x) for x in self.query],
            "strict": self.strict,
            "contains": self.contains,
        }
        if self.weights is not None:
            out["weights"] = [fmt_q(x) for x in self.weights]
        if self.witness is not None:
            out["witness"] = [fmt_q(x) for x in self.witness]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "ConeVerdict":
        def opt(key):
            return _vec(data[key]) if key in data else None

        return cls(_vec(data["query"]), bool(data["strict"]), bool(data["contains"]), opt("weights"), opt("witness"))


def verify_verdict(model: ConeModel, v: ConeVerdict) -> bool:
    """Re-check a verdict's certificate by direct arithmetic."""
    if v.contains:
        if v.weights is None or len(v.weights) != len(model.generators):
            return False
        if any(w < 0 or (v.strict and w == 0) for w in v.weights):
            return False
        combo = tuple(sum((w * g[k] for w, g in zip(v.weights, model.generators)), Fraction(0)) for k in range(model.rho))
        return combo == v.query
    y = v.witness
    if y is None or len(y) != model.rho:
        return False
    vals = [_dot(y, g) for g in model.generators]
    yc = _dot(y, v.query)
    if v.strict:
        return all(x >= 0 for x in vals) and sum(vals) >= 1 and yc <= 0
    return all(x >= 0 for x in vals) and yc < 0


def _square_verdict(model: ConeModel, c: Vector, strict: bool) -> ConeVerdict:
    """Square nonsingular generator matrix: solve for the unique weights;
    a bad weight's dual-basis vector is the witness."""
    rho = model.rho
    G_T = [[g[k] for g in model.generators] for k in range(rho)]
    w = solve(G_T, c)
    bad = next((j for j, x in enumerate(w) if x < 0 or (strict and x == 0)), None)
    if bad is None:
        return ConeVerdict(c, strict, True, tuple(w))
    # row ``bad`` of G^{-T}: y with y.g_i = delta_{i,bad}
    G = [list(g) for g in model.generators]
    y = solve(G, [int(i == bad) for i in range(rho)])
    return ConeVerdict(c, strict, False, witness=tuple(y))


def _lp_verdict(model: ConeModel, c: Vector, strict: bool) -> ConeVerdict:
    gens, rho, k = model.generators, model.rho, len(model.generators)
    G_T = [[g[i] for g in gens] for i in range(rho)]
    if strict:
        # variables (w_1..w_k, t): maximize t, w_j >= t, t <= 1
        A_ub = [[Fraction(-int(i == j)) for i in range(k)] + [Fraction(1)] for j in range(k)]
        A_ub.append([Fraction(0)] * k + [Fraction(1)])
        res = linprog_exact(
            [0] * k + [-1], A_ub, [0] * k + [1], [row + [Fraction(0)] for row in G_T], list(c)
        )
        if res.success and -res.fun > 0:
            return ConeVerdict(c, strict, True, res.x[:k])
    else:
        res = linprog_exact([0] * k, A_eq=G_T, b_eq=list(c))
        if res.success:
            return ConeVerdict(c, strict, True, res.x)
    # Farkas: y free with y.g >= 0 and y.c <= -1, or, when strict,
    # sum(y.g) >= 1 and y.c <= 0
    A_ub = [[-x for x in g] for g in gens]
    b_ub = [Fraction(0)] * k
    if strict:
        A_ub.append([-sum((g[i] for g in gens), Fraction(0)) for i in range(rho)])
        b_ub.append(Fraction(-1))
    A_ub.append(list(c))
    b_ub.append(Fraction(0) if strict else Fraction(-1))
    res = linprog_exact([0] * rho, A_ub, b_ub, free=True)
    if not res.success:
        raise InvariantViolation("Farkas alternative failed: no weights and no witness")
    return ConeVerdict(c, strict, False, witness=res.x)


def cone_contains(model: ConeModel, c: Sequence[RationalLike], strict: bool = False) -> ConeVerdict:
    """Decide whether ``c`` lies in the cone (its interior when ``strict``)."""
    c = _vec(c)
    if len(c) != model.rho:
        raise ValueError(f"query must have {model.rho} coordinates")
    full = model.full_dimensional()
    if strict and not full:
        raise ValueError("interior undefined: generators are not full-dimensional")
    if full and len(model.generators) == model.rho:
        return _square_verdict(model, c, strict)
    return _lp_verdict(model, c, strict)


@dataclass(frozen=True)
class NefReport:
    ok: bool
    values: tuple[tuple[Fraction, ...], ...]  # values[f][g] = functional f on generator g
    violations: tuple[tuple[int, str, Fraction], ...]  # (functional index, generator label, value)

    def to_json(self, model: ConeModel) -> dict:
        return {
            "nef": self.ok,
            "values": [{lab: fmt_q(x) for lab, x in zip(model.labels, row)} for row in self.values],
            "violations": [{"functional": i, "generator": lab, "value": fmt_q(x)} for i, lab, x in self.violations],
        }


def nef_check(model: ConeModel, functionals: Sequence[Sequence[RationalLike]]) -> NefReport:
    """Every functional must be non-negative on the cone, i.e. on each
    generator; negative values are returned as violation witnesses."""
    fns = [_vec(f) for f in functionals]
    if any(len(f) != model.rho for f in fns):
        raise ValueError(f"functionals must have {model.rho} coordinates")
    values = tuple(tuple(_dot(f, g) for g in model.generators) for f in fns)
    violations = tuple(
        (i, lab, x) for i, row in enumerate(values) for lab, x in zip(model.labels, row) if x < 0
    )
    return NefReport(not violations, values, violations)


def nef_lineality_trivial(model: ConeModel, functionals: Sequence[Sequence[RationalLike]]) -> bool:
    """True iff the only c with c and -c nef (f(c) = 0 for every functional)
    is 0: maximize +-c_k over the box |c| <= 1 by exact LP."""
    fns = [list(_vec(f)) for f in functionals]
    rho = model.rho
    bounds = [[Fraction(int(i == k)) for i in range(rho)] for k in range(rho)]
    A_ub = bounds + [[-x for x in row] for row in bounds]
    b_ub = [1] * (2 * rho)
    for k in range(rho):
        for s in (1, -1):
            obj = [Fraction(-s * int(i == k)) for i in range(rho)]
            res = linprog_exact(obj, A_ub, b_ub, fns, [0] * len(fns), free=True)
            if not res.success or res.fun != 0:
                return False
    return True


@dataclass(frozen=True)
class PsiReport:
    ell: int
    ok: bool
    images: tuple[ConeVerdict, ...]

    def to_json(self, model: ConeModel) -> dict:
        return {
            "ell": self.ell,
            "stable": self.ok,
            "images": {lab: v.to_json() for lab, v in zip(model.labels, self.images)},
        }


def psi_image(model: ConeModel, c: Sequence[RationalLike], ell: int) -> Vector:
    """Scale coordinate k by ell^dims[k]."""
    if ell < 1:
        raise ValueError("ell must be positive")
    return tuple(q(x) * ell**dk for x, dk in zip(c, model.dims))


def psi_stability(model: ConeModel, ell: int) -> PsiReport:
    """True iff psi^ell maps every generator back into the cone."""
    images = tuple(cone_contains(model, psi_image(model, g, ell)) for g in model.generators)
    return PsiReport(ell, all(v.contains for v in images), images)
