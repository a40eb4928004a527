"""Exact two-phase tableau simplex over ``Fraction`` with Bland's rule.

Solves ``min c.x  s.t.  A x = b, x >= 0``. Bland's rule guarantees
termination on degenerate problems. Infeasible problems return a Farkas
certificate ``y`` with ``y.A <= 0`` componentwise and ``y.b > 0``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


class LPError(RuntimeError):
    """The simplex could not finish (iteration limit)."""


@dataclass
class LPResult:
    status: str
    x: list[Fraction] | None = None
    value: Fraction | None = None
    duals: list[Fraction] | None = None
    farkas: list[Fraction] | None = None
    basis: list[int] = field(default_factory=list)
    iterations: int = 0


def _pivot(T, obj, basis, row, col):
    prow = T[row]
    inv = 1 / prow[col]
    prow = [v * inv for v in prow]
    T[row] = prow
    nz = [j for j, v in enumerate(prow) if v != 0]
    for i, r in enumerate(T):
        if i != row:
            f = r[col]
            if f != 0:
                for j in nz:
                    r[j] -= f * prow[j]
    f = obj[col]
    if f != 0:
        for j in nz:
            obj[j] -= f * prow[j]
    basis[row] = col


def _objective_row(T, basis, cost):
    width = len(T[0]) if T else len(cost) + 1
    obj = [Fraction(cost[j]) if j < len(cost) else Fraction(0) for j in range(width)]
    for i, bi in enumerate(basis):
        cb = cost[bi]
        if cb != 0:
            obj = [o - cb * t for o, t in zip(obj, T[i])]
    return obj


def _run(T, obj, basis, allowed, max_iter):
    """Bland's-rule iterations; returns (status, iterations)."""
    it = 0
    while True:
        col = next((j for j in allowed if obj[j] < 0), None)
        if col is None:
            return "optimal", it
        best = None
        for i, r in enumerate(T):
            a = r[col]
            if a > 0:
                ratio = r[-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded", it
        _pivot(T, obj, basis, best[1], col)
        it += 1
        if it > max_iter:
            raise LPError(f"simplex exceeded {max_iter} iterations")


def solve_standard_form(A, b, c, max_iter: int = 200_000) -> LPResult:
    m = len(A)
    n = len(c)
    b = [Fraction(v) for v in b]
    sign = [1 if v >= 0 else -1 for v in b]
    T = []
    for i in range(m):
        row = [Fraction(v) * sign[i] for v in A[i]]
        if len(row) != n:
            raise ValueError("row length mismatch")
        row += [Fraction(int(i == k)) for k in range(m)]
        row.append(b[i] * sign[i])
        T.append(row)
    basis = [n + i for i in range(m)]

    cost1 = [0] * n + [1] * m
    obj = _objective_row(T, basis, cost1)
    status, it1 = _run(T, obj, basis, range(n + m), max_iter)
    infeas = sum(T[i][-1] for i in range(m) if basis[i] >= n)
    if infeas > 0:
        binv_y = [sum(cost1[basis[i]] * T[i][n + k] for i in range(m)) for k in range(m)]
        farkas = [y * s for y, s in zip(binv_y, sign)]
        return LPResult("infeasible", farkas=farkas, basis=list(basis), iterations=it1)

    # drive zero-level artificials out of the basis; drop redundant rows
    i = 0
    while i < len(T):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0), None)
            if col is None:
                del T[i]
                del basis[i]
                continue
            _pivot(T, obj, basis, i, col)
        i += 1

    cost2 = [Fraction(v) for v in c] + [0] * m
    obj = _objective_row(T, basis, cost2)
    status, it2 = _run(T, obj, basis, range(n), max_iter)
    if status == "unbounded":
        return LPResult("unbounded", basis=list(basis), iterations=it1 + it2)
    x = [Fraction(0)] * n
    for i, bi in enumerate(basis):
        if bi < n:
            x[bi] = T[i][-1]
    value = sum(cv * xv for cv, xv in zip(cost2, x))
    duals = [sign[k] * sum(cost2[basis[i]] * T[i][n + k] for i in range(len(T))) for k in range(m)]
    return LPResult("optimal", x=x, value=value, duals=duals, basis=list(basis), iterations=it1 + it2)
