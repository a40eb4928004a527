"""Second-order interference LP over permutation-symmetric spectra.

A behavior in J_{N,2} that is invariant under permutations of the inputs
has one spectral value per weight 0, 1, 2. Writing these as ``z0, z1, z2``,

    P(1 | k) = z0 + z1 (N - 2h) + z2 c(h),   h = |k|,
    c(h)     = N(N-1)/2 - 2 h (N - h),

where ``c(h)`` is the sum of ``(-1)^(k_i + k_j)`` over pairs ``i < j``: the
``C(h,2) + C(N-h,2)`` equal-bit pairs count +1 and the ``h (N-h)`` mixed
pairs count -1. The fingerprinting violation is linear in ``z`` and
``0 <= P(1|k) <= 1`` for ``h = 0..N`` cuts out a bounded polytope in R^3.
Everything here is exact.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .behavior import Behavior, hamming_weight, is_member_J, mask_weights
from .exact import dot, format_fraction, solve
from .games import fingerprinting_game, game_value
from .kernels import plane_vertices
from .polytope import HyperoctahedralElement, apply_symmetry
from .simplex import solve_standard_form


class LPInternalError(RuntimeError):
    """The LP came out infeasible or unbounded, which the geometry rules out."""


@dataclass(frozen=True)
class SymmetricSpectrum:
    n_inputs: int
    z: tuple[Fraction, Fraction, Fraction]

    def __post_init__(self):
        if len(self.z) != 3:
            raise ValueError("a symmetric second-order spectrum has three components")
        object.__setattr__(self, "z", tuple(Fraction(v) for v in self.z))


@dataclass(frozen=True)
class LPConstraint:
    weight: int
    coefficients: tuple[int, int, int]
    bounds: tuple[int, int] = (0, 1)


def pair_character(N: int, h: int) -> int:
    """``c(h)``: sum over pairs of ``(-1)^(k_i + k_j)`` at Hamming weight ``h``."""
    return N * (N - 1) // 2 - 2 * h * (N - h)


def lp_constraints(N: int) -> list[LPConstraint]:
    if N < 2:
        raise ValueError("N must be at least 2")
    return [LPConstraint(h, (1, N - 2 * h, pair_character(N, h))) for h in range(N + 1)]


def objective_coefficients(N: int) -> tuple[tuple[Fraction, Fraction, Fraction], Fraction]:
    """``delta = coeffs . z + constant`` for the fingerprinting game."""
    s = Fraction(1, N + 1)
    coeffs = (s * (N - 1), s * N * (N - 3), s * Fraction((N - 5) * N * (N - 1), 2))
    return coeffs, -s * (N - 1)


def objective_value(N: int, z) -> Fraction:
    coeffs, const = objective_coefficients(N)
    return dot(coeffs, z) + const


def constraint_values(N: int, z) -> list[Fraction]:
    """``P(1|k)`` at each Hamming weight ``h = 0..N``."""
    return [dot(c.coefficients, z) for c in lp_constraints(N)]


def is_feasible(N: int, z) -> bool:
    return all(0 <= v <= 1 for v in constraint_values(N, z))


def tight_constraints(N: int, z) -> list[tuple[int, int]]:
    """``(h, a)`` for every weight where ``P(1|k)`` is pinned to the answer ``a``."""
    out = []
    for h, v in enumerate(constraint_values(N, z)):
        if v == 0:
            out.append((h, 0))
        elif v == 1:
            out.append((h, 1))
    return out


@dataclass
class LPSolution:
    n_inputs: int
    delta: Fraction
    z: SymmetricSpectrum
    tight: list[tuple[int, int]] = field(default_factory=list)
    backend: str = "vertices"

    def to_dict(self) -> dict:
        return {
            "N": self.n_inputs,
            "delta": format_fraction(self.delta),
            "z": [format_fraction(v) for v in self.z.z],
            "tight_constraints": [{"weight": h, "answer": a} for h, a in self.tight],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _solve_by_vertices(N: int) -> tuple[Fraction, tuple]:
    cons = lp_constraints(N)
    rows = np.array([c.coefficients for c in cons], dtype=np.int64)
    lo = np.zeros(len(cons), dtype=np.int64)
    hi = np.ones(len(cons), dtype=np.int64)
    found = plane_vertices(rows, lo, hi)
    if len(found) == 0:
        raise LPInternalError(f"no vertices found for N={N}")
    coeffs, const = objective_coefficients(N)
    best = None
    for n0, n1, n2, den, *_ in found.tolist():
        z = (Fraction(n0, den), Fraction(n1, den), Fraction(n2, den))
        val = dot(coeffs, z) + const
        if best is None or val > best[0] or (val == best[0] and z < best[1]):
            best = (val, z)
    return best


def _solve_by_simplex(N: int) -> tuple[Fraction, tuple]:
    # z = u - v; rows: r.z - s_h = 0 and r.z + t_h = 1
    cons = lp_constraints(N)
    m = len(cons)
    n_vars = 6 + 2 * m
    A, b = [], []
    for h, c in enumerate(cons):
        r = list(c.coefficients)
        lower = r + [-v for v in r] + [0] * (2 * m)
        lower[6 + h] = -1
        upper = r + [-v for v in r] + [0] * (2 * m)
        upper[6 + m + h] = 1
        A += [lower, upper]
        b += [0, 1]
    coeffs, const = objective_coefficients(N)
    cost = [-v for v in coeffs] + list(coeffs) + [0] * (2 * m)
    res = solve_standard_form(A, b, cost)
    if res.status != "optimal" or len(res.x) != n_vars:
        raise LPInternalError(f"simplex returned {res.status} for N={N}")
    z = tuple(res.x[i] - res.x[i + 3] for i in range(3))
    return -res.value + const, z


def solve_second_order_lp(N: int, backend: str = "vertices") -> LPSolution:
    """Exact optimum of the symmetric second-order interference LP.

    ``backend="vertices"`` intersects every triple of bounding planes and keeps
    the feasible points (ties go to the lexicographically smallest ``z``);
    ``backend="simplex"`` runs the exact tableau simplex. Very large N, where
    the integer vertex kernel would overflow, falls back to the simplex.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    if backend == "vertices":
        try:
            delta, z = _solve_by_vertices(N)
        except OverflowError:
            delta, z = _solve_by_simplex(N)
            backend = "simplex"
    elif backend == "simplex":
        delta, z = _solve_by_simplex(N)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    if not is_feasible(N, z):
        raise LPInternalError("optimum is not feasible")
    return LPSolution(N, delta, SymmetricSpectrum(N, z), tight_constraints(N, z), backend)


def zstar_closed_form(N: int) -> SymmetricSpectrum:
    den = 2 * N * N - 6 * N + 4
    return SymmetricSpectrum(N, (Fraction(3 * N * N - 7 * N, 2 * den), Fraction(N - 3, den), Fraction(-1, den)))


def theorem2_delta(N: int) -> Fraction:
    """Largest fingerprinting violation in J_{N,2}, valid for N > 3."""
    if N <= 3:
        raise ValueError("the closed form holds for N > 3 only")
    return Fraction(2, (N - 2) * (N - 1) * (N + 1))


def optimal_behavior_entry(N: int, h: int) -> Fraction:
    """``P(1|k)`` of the optimal symmetric behavior at Hamming weight ``h``."""
    return Fraction((N - h) * (h + N - 3), (N - 2) * (N - 1))


MAX_DENSE_N = 16


def weight_profile(z: SymmetricSpectrum) -> list[Fraction]:
    """``P(1|k)`` for ``|k| = 0..N``: the symmetric behavior without its 2^N copies."""
    return constraint_values(z.n_inputs, z.z)


def reconstruct_behavior(z: SymmetricSpectrum) -> Behavior:
    N = z.n_inputs
    if N > MAX_DENSE_N:
        raise ValueError(f"dense behavior for N={N} has 2^{N} entries; use weight_profile")
    vals = weight_profile(z)
    p1 = np.array([vals[hamming_weight(k)] for k in range(1 << N)], dtype=object)
    return Behavior(N, p1)


def symmetrize_behavior(beh: Behavior) -> Behavior:
    """Average of ``beh`` over all permutations of the inputs."""
    N = beh.n_inputs
    perms = list(itertools.permutations(range(N)))
    total = None
    for perm in perms:
        p1 = apply_symmetry(HyperoctahedralElement(perm, (0,) * N), beh).p1
        total = p1 if total is None else total + p1
    if beh.exact:
        return Behavior(N, np.array([v / len(perms) for v in total], dtype=object))
    return Behavior(N, total / len(perms))


def spectrum_of_symmetric(beh: Behavior) -> SymmetricSpectrum:
    """Read ``(z0, z1, z2)`` off a symmetric behavior in J_{N,2}."""
    N = beh.n_inputs
    if N < 2:
        raise ValueError("N must be at least 2")
    weights = [next(k for k in range(1 << N) if hamming_weight(k) == h) for h in range(3)]
    rows = [list(lp_constraints(N)[h].coefficients) for h in range(3)]
    z = solve(rows, [Fraction(beh.p1[k]) for k in weights])
    return SymmetricSpectrum(N, tuple(z))


# ---------------------------------------------------------------------------
# Brute-force oracle on the full (unsymmetrised) J_{N,2}, small N
# ---------------------------------------------------------------------------


def j2_vertices(N: int) -> list[Behavior]:
    """Vertices of ``[0,1]^{2^N}`` cut by the single weight-3 spectral constraint (N <= 3)."""
    if N > 3:
        raise ValueError("brute-force vertex enumeration is limited to N <= 3")
    size = 1 << N
    cube = np.array(list(itertools.product((0, 1), repeat=size)), dtype=np.int64)[:, ::-1]
    high = mask_weights(N) > 2
    if not high.any():
        return [Behavior.deterministic(N, row) for row in cube]
    # a single high-weight character: the parity sign pattern
    k = np.arange(size)
    sign = np.array([(-1) ** hamming_weight(int(v)) for v in k], dtype=np.int64)
    value = cube @ sign
    out = [Behavior.deterministic(N, row) for row in cube[value == 0]]
    for idx in np.nonzero(value > 0)[0]:
        row = cube[idx]
        for j in range(size):
            step = 1 - 2 * row[j]
            if value[idx] + step * sign[j] < 0:
                t = Fraction(int(value[idx]), 1)
                p1 = [Fraction(int(v)) for v in row]
                p1[j] = Fraction(int(row[j])) + step * t  # lands on value 0
                out.append(Behavior(N, np.array(p1, dtype=object)))
    return out


def brute_force_j2_violation(N: int) -> Fraction:
    g = fingerprinting_game(N)
    best = max(game_value(g, b) for b in j2_vertices(N))
    return best - g.constant


# ---------------------------------------------------------------------------
# Optimality re-check via the three edges leaving z*
# ---------------------------------------------------------------------------


def edge_directions(N: int) -> list[tuple[int, int, int]]:
    """Edge directions at z*: each lies on two of the three tight facets."""
    return [
        (-N * N + 5 * N - 8, 2 * (N - 3), -2),
        (N * (N * N - 4 * N + 3), 2 - 2 * N, 2 - 2 * N),
        (-N * (N * N - 7 * N + 10), 4 * N - 8, 2 * N - 4),
    ]


def expected_slopes(N: int) -> list[Fraction]:
    return [Fraction(8, N + 1), Fraction(4 * N * (N - 1), N + 1), Fraction(4 * N * (N * N - 5 * N + 6), N + 1)]


OPTIMAL_FACETS = ((1, 1), (2, 1), (-1, 0))  # weight -1 stands for h = N


@dataclass
class NeighborReport:
    n_inputs: int
    tight: list[tuple[int, int]]
    slopes: list[Fraction]
    outward: list[bool]
    max_steps: list[Fraction]
    sampled_ok: bool
    spanning: bool
    passed: bool

    def to_dict(self) -> dict:
        return {
            "N": self.n_inputs,
            "tight": self.tight,
            "slopes": [format_fraction(s) for s in self.slopes],
            "outward": self.outward,
            "max_steps": [format_fraction(s) for s in self.max_steps],
            "sampled_ok": self.sampled_ok,
            "spanning": self.spanning,
            "passed": self.passed,
        }


def neighbor_optimality_check(N: int) -> NeighborReport:
    """Verify that z* is a simple vertex and the objective rises along every outward edge.

    Each edge ``e_i`` must run along two tight facets and cross the third
    for ``t > 0``, each facet being crossed by exactly one edge. The
    objective slope along ``e_i`` must be positive, and ``z* + t e_i`` must
    stay feasible on ``[-t_max, 0]``. Sampled points check the slope
    exactly. Since the three edges span R^3, the feasible cone at z* is the
    cone of the ``-e_i`` and no feasible direction improves the objective.
    """
    if N < 4:
        raise ValueError("the optimal vertex formula holds for N > 3")
    zs = zstar_closed_form(N).z
    cons = lp_constraints(N)
    facets = [(h if h >= 0 else N, a) for h, a in OPTIMAL_FACETS]
    tight = tight_constraints(N, zs)
    dirs = edge_directions(N)
    coeffs, _ = objective_coefficients(N)
    base = objective_value(N, zs)
    ok = sorted(tight) == sorted(facets)
    slopes, outward, steps = [], [], []
    sampled_ok = True
    crossed = []
    for i, e in enumerate(dirs):
        # the edge runs along two tight facets and leaves through the third
        moving = [j for j, (h, _) in enumerate(facets) if dot(cons[h].coefficients, e) != 0]
        if len(moving) != 1:
            ok = False
            outward.append(False)
        else:
            h_i, a_i = facets[moving[0]]
            crossed.append(moving[0])
            move = dot(cons[h_i].coefficients, e)
            out = move > 0 if a_i == 1 else move < 0
            outward.append(out)
            ok &= out
        slope = dot(coeffs, e)
        slopes.append(slope)
        ok &= slope == expected_slopes(N)[i] and slope > 0
        # largest backward step before another constraint binds
        t_max = None
        vals = constraint_values(N, zs)
        for h, c in enumerate(cons):
            rate = -dot(c.coefficients, e)
            if rate > 0:
                lim = (1 - vals[h]) / rate
            elif rate < 0:
                lim = vals[h] / -rate
            else:
                continue
            if lim > 0 and (t_max is None or lim < t_max):
                t_max = lim
        steps.append(t_max)
        for t in (t_max, t_max / 2, t_max / 7):
            back = tuple(z - t * d for z, d in zip(zs, e))
            fwd = tuple(z + t * d for z, d in zip(zs, e))
            if not is_feasible(N, back) or is_feasible(N, fwd):
                sampled_ok = False
            if objective_value(N, back) - base != -slope * t or objective_value(N, fwd) - base != slope * t:
                sampled_ok = False
    det = (dirs[0][0] * (dirs[1][1] * dirs[2][2] - dirs[1][2] * dirs[2][1])
           - dirs[0][1] * (dirs[1][0] * dirs[2][2] - dirs[1][2] * dirs[2][0])
           + dirs[0][2] * (dirs[1][0] * dirs[2][1] - dirs[1][1] * dirs[2][0]))
    spanning = det != 0 and sorted(crossed) == [0, 1, 2]
    return NeighborReport(N, tight, slopes, outward, steps, sampled_ok, spanning, bool(ok and sampled_ok and spanning))


def optimal_behavior_report(N: int) -> dict:
    """Exact delta, z* and the optimal behavior, as emitted by the CLI."""
    theorem2_delta(N)
    sol = solve_second_order_lp(N)
    beh = reconstruct_behavior(sol.z)
    return {
        "N": N,
        "delta": format_fraction(sol.delta),
        "delta_decimal": float(sol.delta),
        "z": [format_fraction(v) for v in sol.z.z],
        "tight_constraints": [{"weight": h, "answer": a} for h, a in sol.tight],
        "p0_all_zero": format_fraction(1 - beh.p1[0]),
        "behavior": beh.to_dict(),
        "in_J2": is_member_J(beh, 2, tol=0),
    }
