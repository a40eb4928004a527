"""Small exact-rational linear algebra helpers."""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Sequence


def as_fraction_rows(rows) -> list[list[Fraction]]:
    return [[Fraction(v) for v in row] for row in rows]


def rref(rows) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = as_fraction_rows(rows)
    pivots: list[int] = []
    if not m:
        return m, pivots
    n_cols = len(m[0])
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def solve(matrix, rhs) -> list[Fraction]:
    """Solve a square nonsingular system exactly."""
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    red, piv = rref(aug)
    n = len(matrix)
    if piv != list(range(n)):
        raise ValueError("singular system")
    return [red[i][n] for i in range(n)]


def inverse(matrix) -> list[list[Fraction]]:
    n = len(matrix)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(matrix)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ValueError("singular matrix")
    return [row[n:] for row in red]


def integer_normalize(vec: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to coprime integers, preserving sign."""
    fr = [Fraction(v) for v in vec]
    den = reduce(lcm, (f.denominator for f in fr), 1)
    ints = [int(f * den) for f in fr]
    g = reduce(gcd, ints, 0)
    if g == 0:
        return tuple(ints)
    return tuple(v // g for v in ints)


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def format_fraction(v) -> str:
    f = Fraction(v)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
