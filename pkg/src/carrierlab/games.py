"""Hyperplanes over behaviors as oracle games, and the fingerprinting game.

Only maximisation of the winning probability is exposed. A lower bound on
a hyperplane's left-hand side is the same game with ``b0`` and ``b1``
exchanged.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .behavior import Behavior, hamming_weight
from .exact import format_fraction
from .juntas import BooleanFunction, junta_tables

NORM_TOL = 1e-12


def _is_exact(values) -> bool:
    return all(isinstance(v, (int, Fraction, np.integer)) for v in values)


def _coerce(values, exact: bool):
    if exact:
        return [Fraction(v) for v in values]
    return [float(v) for v in values]


@dataclass(frozen=True)
class Hyperplane:
    """``sum_x b1[x] P(1|x) + b0[x] P(0|x) = offset``."""

    n_inputs: int
    b0: tuple
    b1: tuple
    offset: object

    def __post_init__(self):
        size = 1 << self.n_inputs
        if len(self.b0) != size or len(self.b1) != size:
            raise ValueError(f"coefficient vectors must have length {size}")
        exact = _is_exact(list(self.b0) + list(self.b1) + [self.offset])
        object.__setattr__(self, "b0", tuple(_coerce(self.b0, exact)))
        object.__setattr__(self, "b1", tuple(_coerce(self.b1, exact)))
        object.__setattr__(self, "offset", Fraction(self.offset) if exact else float(self.offset))

    def lhs(self, beh: Behavior):
        return sum(c1 * p1 + c0 * (1 - p1) for c0, c1, p1 in zip(self.b0, self.b1, beh.p1))


@dataclass(frozen=True, eq=False)
class OracleGame:
    """Win by answering ``target(x)`` on input ``x``, drawn with probability ``weights[x]``."""

    n_inputs: int
    target: BooleanFunction
    weights: tuple
    constant: object

    def __post_init__(self):
        size = 1 << self.n_inputs
        if self.target.n_inputs != self.n_inputs or len(self.weights) != size:
            raise ValueError("target/weights do not match n_inputs")
        exact = _is_exact(self.weights)
        w = _coerce(self.weights, exact)
        if any(v < 0 for v in w):
            raise ValueError("weights must be nonnegative")
        total = sum(w)
        if (total != 1) if exact else abs(total - 1) > NORM_TOL:
            raise ValueError(f"weights sum to {total}, not 1")
        object.__setattr__(self, "weights", tuple(w))

    @property
    def exact(self) -> bool:
        return isinstance(self.weights[0], Fraction)

    def prior(self, a: int):
        """Total weight of the inputs whose correct answer is ``a``."""
        return sum(w for w, v in zip(self.weights, self.target.truth_table) if v == a)

    def to_dict(self) -> dict:
        fmt = format_fraction if self.exact else float
        return {
            "n_inputs": self.n_inputs,
            "v_truth_table_hex": self.target.to_hex(),
            "weights": [fmt(w) for w in self.weights],
            "bound": fmt(self.constant),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "OracleGame":
        n = int(data["n_inputs"])
        weights = [Fraction(w) if isinstance(w, str) else w for w in data["weights"]]
        bound = Fraction(data["bound"]) if isinstance(data["bound"], str) else data["bound"]
        return cls(n, BooleanFunction.from_hex(n, data["v_truth_table_hex"]), tuple(weights), bound)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def hyperplane_to_game(h: Hyperplane) -> OracleGame:
    """Rewrite a hyperplane as a game; ties ``b0 == b1`` get ``v = 1`` and weight 0."""
    v = [0 if c0 > c1 else 1 for c0, c1 in zip(h.b0, h.b1)]
    gaps = [abs(c1 - c0) for c0, c1 in zip(h.b0, h.b1)]
    denom = sum(gaps)
    if denom == 0:
        raise ValueError("degenerate hyperplane: b0 == b1 everywhere")
    weights = tuple(g / denom for g in gaps)
    constant = (h.offset - sum(min(c0, c1) for c0, c1 in zip(h.b0, h.b1))) / denom
    return OracleGame(h.n_inputs, BooleanFunction(h.n_inputs, v), weights, constant)


def game_value(g: OracleGame, beh: Behavior):
    """Winning probability ``sum_x w[x] P(v(x) | x)``."""
    if beh.n_inputs != g.n_inputs:
        raise ValueError("behavior and game have different N")
    total = 0
    for w, v, p1 in zip(g.weights, g.target.truth_table, beh.p1):
        if w:
            total = total + w * (p1 if v else 1 - p1)
    return total


def fingerprinting_game(N: int) -> OracleGame:
    """Weight ``1/(N+1)`` on ``0...0`` (answer 0) and on each weight-one input (answer 1).

    The target is ``OR``: it agrees with the required answers on every
    weighted input, and it is exactly what ``hyperplane_to_game`` returns for
    the fingerprinting facet. Its value on unweighted inputs is irrelevant.
    """
    if N < 1:
        raise ValueError("N must be positive")
    size = 1 << N
    w = Fraction(1, N + 1)
    weights = [w if k == 0 or hamming_weight(k) == 1 else Fraction(0) for k in range(size)]
    target = BooleanFunction(N, [int(k != 0) for k in range(size)])
    return OracleGame(N, target, tuple(weights), Fraction(N, N + 1))


def fingerprinting_hyperplane(N: int) -> Hyperplane:
    size = 1 << N
    w = Fraction(1, N + 1)
    b0 = [w if k == 0 else 0 for k in range(size)]
    b1 = [w if hamming_weight(k) == 1 else 0 for k in range(size)]
    return Hyperplane(N, tuple(b0), tuple(b1), Fraction(N, N + 1))


def violation(g: OracleGame, beh: Behavior, bound=None):
    """``game_value - bound`` (positive means the bound is violated)."""
    return game_value(g, beh) - (g.constant if bound is None else bound)


def classical_bound(g: OracleGame, N: int, K: int, budget: int | None = None):
    """Best winning probability over C_{N,K} (attained at a K-junta vertex)."""
    if N != g.n_inputs:
        raise ValueError("game and N disagree")
    tables = junta_tables(N, K, budget)
    hits = tables == g.target.truth_table[None, :]
    if g.exact:
        best = Fraction(0)
        for row in hits:
            val = sum((w for w, h in zip(g.weights, row) if h), Fraction(0))
            best = max(best, val)
        return best
    return float((hits @ np.asarray(g.weights, dtype=float)).max())


def random_hyperplane(N: int, rng: np.random.Generator, exact: bool = False) -> Hyperplane:
    size = 1 << N
    if exact:
        b0 = [Fraction(int(v), 7) for v in rng.integers(-20, 21, size)]
        b1 = [Fraction(int(v), 7) for v in rng.integers(-20, 21, size)]
        off = Fraction(int(rng.integers(-20, 21)), 3)
    else:
        b0, b1, off = rng.normal(size=size), rng.normal(size=size), float(rng.normal())
    return Hyperplane(N, tuple(b0), tuple(b1), off)
