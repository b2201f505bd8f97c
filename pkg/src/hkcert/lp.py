"""A small exact linear-programming solver over Fractions.

Two-phase tableau simplex with Bland's rule (so it cannot cycle).  It is
meant for the tiny systems that come up in cone membership and Farkas
certificates, not for performance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactalg import RationalLike, q


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: tuple[Fraction, ...] | None = None
    fun: Fraction | None = None

    @property
    def success(self) -> bool:
        return self.status == "optimal"


def _pivot(T: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    pv = T[r][c]
    T[r] = [x / pv for x in T[r]]
    for i in range(len(T)):
        if i != r and T[i][c] != 0:
            f = T[i][c]
            row = T[r]
            T[i] = [x - f * y for x, y in zip(T[i], row)]
    basis[r] = c


def _run(T: list[list[Fraction]], basis: list[int], allowed: int) -> bool:
    """Minimize the objective stored in the last row; False if unbounded."""
    m = len(T) - 1
    while True:
        obj = T[m]
        col = next((j for j in range(allowed) if obj[j] < 0), None)
        if col is None:
            return True
        best = None
        for i in range(m):
            a = T[i][col]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return False
        _pivot(T, basis, best[1], col)


def _standard_min(c: list[Fraction], A: list[list[Fraction]], b: list[Fraction]) -> LPResult:
    """min c.x  s.t.  A x = b, x >= 0."""
    nvar = len(c)
    A = [list(r) for r in A]
    b = list(b)
    for i in range(len(A)):
        if b[i] < 0:
            A[i] = [-x for x in A[i]]
            b[i] = -b[i]
    m = len(A)
    # phase 1 with one artificial per row
    T = [A[i] + [Fraction(int(i == k)) for k in range(m)] + [b[i]] for i in range(m)]
    basis = [nvar + i for i in range(m)]
    obj = [Fraction(0)] * (nvar + m + 1)
    for i in range(m):
        for j in range(nvar):
            obj[j] -= T[i][j]
        obj[-1] -= T[i][-1]
    T.append(obj)
    _run(T, basis, nvar + m)
    if T[m][-1] != 0:
        return LPResult("infeasible")
    # drive remaining artificials out of the basis
    for i in range(m):
        if basis[i] >= nvar:
            col = next((j for j in range(nvar) if T[i][j] != 0), None)
            if col is not None:
                _pivot(T, basis, i, col)
    keep = [i for i in range(m) if basis[i] < nvar]
    T2 = [T[i][:nvar] + [T[i][-1]] for i in keep]
    basis2 = [basis[i] for i in keep]
    obj2 = list(c) + [Fraction(0)]
    for i, bi in enumerate(basis2):
        if obj2[bi] != 0:
            f = obj2[bi]
            obj2 = [x - f * y for x, y in zip(obj2, T2[i])]
    T2.append(obj2)
    if not _run(T2, basis2, nvar):
        return LPResult("unbounded")
    x = [Fraction(0)] * nvar
    for i, bi in enumerate(basis2):
        x[bi] = T2[i][-1]
    return LPResult("optimal", tuple(x), sum((ci * xi for ci, xi in zip(c, x)), Fraction(0)))


def linprog_exact(
    c: Sequence[RationalLike],
    A_ub: Sequence[Sequence[RationalLike]] | None = None,
    b_ub: Sequence[RationalLike] | None = None,
    A_eq: Sequence[Sequence[RationalLike]] | None = None,
    b_eq: Sequence[RationalLike] | None = None,
    free: bool = False,
) -> LPResult:
    """min c.x subject to A_ub x <= b_ub, A_eq x = b_eq.

    Variables are non-negative unless ``free`` is set, in which case each
    is split into a difference of two non-negative parts.
    """
    c = [q(x) for x in c]
    n = len(c)
    A_ub = [[q(x) for x in r] for r in (A_ub or [])]
    b_ub = [q(x) for x in (b_ub or [])]
    A_eq = [[q(x) for x in r] for r in (A_eq or [])]
    b_eq = [q(x) for x in (b_eq or [])]

    def expand(row):
        return row + [-x for x in row] if free else row

    cc = expand(c)
    nv = len(cc)
    n_slack = len(A_ub)
    rows, rhs = [], []
    for k, (r, bb) in enumerate(zip(A_ub, b_ub)):
        rows.append(expand(r) + [Fraction(int(k == j)) for j in range(n_slack)])
        rhs.append(bb)
    for r, bb in zip(A_eq, b_eq):
        rows.append(expand(r) + [Fraction(0)] * n_slack)
        rhs.append(bb)
    res = _standard_min(cc + [Fraction(0)] * n_slack, rows, rhs)
    if not res.success:
        return res
    x = res.x[:nv]
    if free:
        x = tuple(x[i] - x[n + i] for i in range(n))
    return LPResult("optimal", tuple(x), res.fun)
