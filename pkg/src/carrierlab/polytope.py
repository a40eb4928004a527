"""Exact geometry of the classical polytopes C_{N,K}.

Points live in ``P'`` coordinates (the ``2^N`` values ``P(1|[k])``). All
geometry here is exact: vertices and facets are ``Fraction``/integer data,
facets come from an integer double-description pass restricted to the
affine hull, and the f-vector is read off the vertex-facet incidences.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from . import kernels
from .behavior import Behavior
from .exact import dot, integer_normalize, inverse, rank, rref
from .juntas import BooleanFunction, BudgetExceeded, effective_variables, junta_tables
from .simplex import solve_standard_form

DEFAULT_VERTEX_BUDGET = 64
MAX_FACET_DIM = 8


def vertex_budget() -> int:
    return int(os.environ.get("CARRIERLAB_VERTEX_BUDGET", DEFAULT_VERTEX_BUDGET))


# ---------------------------------------------------------------------------
# Polytope container
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Facet:
    """Inequality ``normal . x <= offset`` with coprime integer data."""

    normal: tuple[int, ...]
    offset: int

    def slack(self, point) -> Fraction:
        return self.offset - dot(self.normal, point)


@dataclass(frozen=True)
class RationalPolytope:
    ambient_dim: int
    vertices: tuple[tuple[Fraction, ...], ...]
    facets: tuple[Facet, ...] | None = None
    affine_dim: int = field(default=-1)

    def __post_init__(self):
        verts = tuple(tuple(Fraction(v) for v in vert) for vert in self.vertices)
        if any(len(v) != self.ambient_dim for v in verts):
            raise ValueError("vertex of wrong dimension")
        object.__setattr__(self, "vertices", verts)
        if self.affine_dim < 0:
            object.__setattr__(self, "affine_dim", affine_dimension(verts))

    @property
    def f_vector(self) -> tuple[int, ...]:
        return f_vector(self)

    def incidence(self) -> list[int]:
        """Bitmask of saturating vertices, one per facet."""
        if self.facets is None:
            raise ValueError("facets not computed")
        return [sum(1 << i for i, v in enumerate(self.vertices) if f.slack(v) == 0) for f in self.facets]

    def to_dict(self) -> dict:
        from .exact import format_fraction
        out = {
            "ambient_dim": self.ambient_dim,
            "affine_dim": self.affine_dim,
            "vertices": [[format_fraction(c) for c in v] for v in self.vertices],
        }
        if self.facets is not None:
            out["facets"] = [{"normal": list(f.normal), "offset": f.offset} for f in self.facets]
            out["f_vector"] = list(f_vector(self))
        return out


def affine_dimension(vertices: Sequence[Sequence]) -> int:
    vertices = [tuple(Fraction(c) for c in v) for v in vertices]
    if not vertices:
        return -1
    v0 = vertices[0]
    return rank([[a - b for a, b in zip(v, v0)] for v in vertices[1:]]) if len(vertices) > 1 else 0


def vertices_of_C(N: int, K: int, budget: int | None = None) -> RationalPolytope:
    """Deterministic behaviors of all K-juntas, as 0/1 points in P' coordinates."""
    tables = junta_tables(N, K, budget)
    return RationalPolytope(1 << N, tuple(tuple(Fraction(int(t)) for t in row) for row in tables))


# ---------------------------------------------------------------------------
# Symmetries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HyperoctahedralElement:
    """``b = pi x| (s_0..s_{N-1})`` acting as ``x_i -> s_i(x_{pi(i)})`` (0-based)."""

    permutation: tuple[int, ...]
    flips: tuple[int, ...]

    def __post_init__(self):
        perm = tuple(int(p) for p in self.permutation)
        flips = tuple(int(bool(s)) for s in self.flips)
        if sorted(perm) != list(range(len(perm))):
            raise ValueError(f"{perm} is not a permutation")
        if len(flips) != len(perm):
            raise ValueError("flips and permutation differ in length")
        object.__setattr__(self, "permutation", perm)
        object.__setattr__(self, "flips", flips)

    @property
    def n(self) -> int:
        return len(self.permutation)

    @classmethod
    def identity(cls, n: int) -> "HyperoctahedralElement":
        return cls(tuple(range(n)), (0,) * n)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "HyperoctahedralElement":
        return cls(tuple(rng.permutation(n)), tuple(rng.integers(0, 2, n)))

    def index_map(self) -> np.ndarray:
        """``m[k]`` is the input index read when the transformed object is queried at ``k``."""
        k = np.arange(1 << self.n)
        out = np.zeros_like(k)
        for i, (p, s) in enumerate(zip(self.permutation, self.flips)):
            out |= (((k >> p) & 1) ^ s) << i
        return out

    def is_involution(self) -> bool:
        m = self.index_map()
        return bool(np.array_equal(m[m], np.arange(len(m))))


def apply_symmetry(b: HyperoctahedralElement, beh: Behavior) -> Behavior:
    if b.n != beh.n_inputs:
        raise ValueError("group element and behavior have different N")
    return Behavior(beh.n_inputs, beh.p1[b.index_map()])


def act_on_function(b: HyperoctahedralElement, f: BooleanFunction) -> BooleanFunction:
    return BooleanFunction(f.n_inputs, f.truth_table[b.index_map()])


def apply_inversion(beh: Behavior) -> Behavior:
    return Behavior(beh.n_inputs, 1 - beh.p1)


def lemma1_hull_vertices(N: int, K: int, budget: int | None = None) -> set[Behavior]:
    """Union of the embedded K-cubes ``R_{sigma x| 1}(C_{K,K} + 0^{N-K})`` over supports."""
    cube = junta_tables(K, K, budget) if K > 0 else np.array([[0], [1]], dtype=np.uint8)
    # embed: a function of the first K variables on N inputs
    x = np.arange(1 << N)
    low = x & ((1 << K) - 1)
    embedded = cube[:, low]
    out: set[Behavior] = set()
    for support in combinations(range(N), K):
        rest = [j for j in range(N) if j not in support]
        sigma = HyperoctahedralElement(tuple(support) + tuple(rest), (0,) * N)
        m = sigma.index_map()
        for row in embedded:
            out.add(Behavior.deterministic(N, row[m]))
    return out


# ---------------------------------------------------------------------------
# Double description
# ---------------------------------------------------------------------------


def _affine_chart(vertices):
    """Pivot coordinates that chart the affine hull, plus its equations."""
    v0 = vertices[0]
    diffs = [[a - b for a, b in zip(v, v0)] for v in vertices[1:]]
    red, piv = rref(diffs) if diffs else ([], [])
    equations = []
    for c in range(len(v0)):
        if c in piv:
            continue
        # x_c - v0_c = sum_r red[r][c] (x_{piv r} - v0_{piv r})
        normal = [Fraction(0)] * len(v0)
        normal[c] = Fraction(1)
        for r, p in enumerate(piv):
            normal[p] -= red[r][c]
        equations.append((normal, dot(normal, v0)))
    return piv, equations


def _double_description(gens: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Extreme rays of ``{h : h.g >= 0 for all g in gens}`` for a full-rank generator set."""
    d = len(gens[0])
    if len(gens) > 64:
        raise BudgetExceeded("double description supports at most 64 generators")
    order = []
    for i, g in enumerate(gens):
        if rank([gens[j] for j in order] + [g]) > len(order):
            order.append(i)
        if len(order) == d:
            break
    if len(order) < d:
        raise ValueError("generators do not span the space")
    inv = inverse([gens[i] for i in order])
    rays = [integer_normalize([inv[r][c] for r in range(d)]) for c in range(d)]
    zero = [sum(1 << order[k] for k in range(d) if k != c) for c in range(d)]
    for i, g in enumerate(gens):
        if i in order:
            continue
        vals = [dot(g, r) for r in rays]
        plus = [j for j, v in enumerate(vals) if v > 0]
        minus = [j for j, v in enumerate(vals) if v < 0]
        zero_idx = [j for j, v in enumerate(vals) if v == 0]
        pairs = kernels.adjacent_pairs(np.array(zero, dtype=np.uint64), plus, minus, d - 2)
        new_rays = [rays[j] for j in plus] + [rays[j] for j in zero_idx]
        new_zero = [zero[j] for j in plus] + [zero[j] | (1 << i) for j in zero_idx]
        for p, q in pairs:
            vp, vq = vals[p], vals[q]
            ray = integer_normalize([vp * a - vq * b for a, b in zip(rays[q], rays[p])])
            new_rays.append(ray)
            new_zero.append(zero[p] & zero[q] | (1 << i))
        rays, zero = new_rays, new_zero
    return rays


def facet_enumeration(p: RationalPolytope, budget_vertices: int | None = None,
                      max_dim: int = MAX_FACET_DIM) -> RationalPolytope:
    """Complete irredundant facet list (exact), as a new polytope value."""
    budget_vertices = vertex_budget() if budget_vertices is None else budget_vertices
    n_vert = len(p.vertices)
    if n_vert > min(budget_vertices, 64):
        raise BudgetExceeded(f"{n_vert} vertices exceed the facet-enumeration budget {budget_vertices}")
    if p.affine_dim > max_dim:
        raise BudgetExceeded(f"affine dimension {p.affine_dim} exceeds {max_dim}")
    if p.affine_dim < 1:
        return replace(p, facets=())
    piv, _ = _affine_chart(p.vertices)
    gens = [integer_normalize([1] + [v[c] for c in piv]) for v in p.vertices]
    rays = _double_description(gens)
    facets = set()
    for h in rays:
        normal = [0] * p.ambient_dim
        for r, c in enumerate(piv):
            normal[c] = -h[r + 1]
        lifted = integer_normalize(normal + [h[0]])
        facets.add(Facet(tuple(lifted[:-1]), lifted[-1]))
    ordered = tuple(sorted(facets, key=lambda f: (f.normal, f.offset)))
    return replace(p, facets=ordered)


def facet_equations(p: RationalPolytope):
    """Equations ``normal . x = offset`` cutting out the affine hull."""
    return _affine_chart(p.vertices)[1]


# ---------------------------------------------------------------------------
# Face lattice
# ---------------------------------------------------------------------------


def face_lattice(p: RationalPolytope) -> dict[int, set[int]]:
    """Faces by dimension, each face encoded as a bitmask of its vertices."""
    if p.facets is None:
        raise ValueError("facets not computed; call facet_enumeration first")
    top = p.affine_dim
    full = (1 << len(p.vertices)) - 1
    facets = sorted(set(p.incidence()))
    faces: dict[int, set[int]] = {top: {full}}
    if top == 0:
        return faces
    faces[top - 1] = set(facets)
    for k in range(top - 1, 0, -1):
        below: set[int] = set()
        for F in faces[k]:
            cands = {F & G for G in facets if F & G != F}
            cands.discard(0)
            ranked = sorted(cands, key=lambda c: -bin(c).count("1"))
            maximal = []
            for c in ranked:
                if not any(c & m == c for m in maximal):
                    maximal.append(c)
            below.update(maximal)
        faces[k - 1] = below
    return faces


def f_vector(p: RationalPolytope) -> tuple[int, ...]:
    """Face counts for dimensions ``0 .. affine_dim - 1``."""
    faces = face_lattice(p)
    return tuple(len(faces[k]) for k in range(p.affine_dim))


# ---------------------------------------------------------------------------
# Membership
# ---------------------------------------------------------------------------


@dataclass
class MembershipCertificate:
    member: bool
    N: int
    K: int
    vertices: list[tuple[int, ...]]
    weights: dict[int, Fraction] = field(default_factory=dict)
    boundary: bool | None = None
    separating_normal: tuple | None = None
    separating_offset: object = None
    violation: object = None
    exact: bool = True

    def to_dict(self) -> dict:
        from .exact import format_fraction
        fmt = format_fraction if self.exact else float
        out = {"member": self.member, "N": self.N, "K": self.K, "exact": self.exact}
        if self.member:
            out["boundary"] = self.boundary
            out["weights"] = [
                {"vertex_hex": BooleanFunction(self.N, self.vertices[i]).to_hex(), "weight": fmt(w)}
                for i, w in sorted(self.weights.items())
            ]
        else:
            out["separating_hyperplane"] = {
                "normal": [fmt(v) for v in self.separating_normal],
                "offset": fmt(self.separating_offset),
            }
            out["violation"] = fmt(self.violation)
        return out

    def reconstruct(self) -> list:
        size = 1 << self.N
        return [sum((w * self.vertices[i][k] for i, w in self.weights.items()), Fraction(0))
                for k in range(size)]

    def routing_form(self) -> dict[tuple[int, ...], tuple[Fraction, list[Fraction]]]:
        """Group the weights by K-element routing set.

        Returns ``{(j_1..j_K): (q, [P(1 | local input) ...])}`` where the local
        input index packs ``x_{j_1}..x_{j_K}`` into bits ``0..K-1``.
        """
        if not self.member:
            raise ValueError("no convex decomposition for a non-member")
        groups: dict[tuple[int, ...], list[tuple[Fraction, BooleanFunction]]] = {}
        for i, w in self.weights.items():
            f = BooleanFunction(self.N, self.vertices[i])
            eff = sorted(effective_variables(f))
            fill = [j for j in range(self.N) if j not in eff]
            support = tuple(sorted(eff + fill[: self.K - len(eff)]))
            groups.setdefault(support, []).append((w, f))
        out = {}
        for support, members in sorted(groups.items()):
            q = sum(w for w, _ in members)
            table = []
            for loc in range(1 << self.K):
                k = sum(((loc >> pos) & 1) << j for pos, j in enumerate(support))
                table.append(sum(w * f.truth_table[k] for w, f in members) / q)
            out[support] = (q, table)
        return out


def membership_C(beh: Behavior, N: int, K: int, exact: bool = True, tol: float = 1e-9,
                 budget: int | None = None, check_boundary: bool = True) -> MembershipCertificate:
    """Decide ``beh in C_{N,K}`` with a convex-combination or separation certificate."""
    if beh.n_inputs != N:
        raise ValueError("behavior has a different number of inputs")
    tables = junta_tables(N, K, budget)
    verts = [tuple(int(t) for t in row) for row in tables]
    if exact:
        return _membership_exact(beh, N, K, verts, check_boundary)
    return _membership_float(beh, N, K, verts, tol)


def _membership_exact(beh, N, K, verts, check_boundary):
    if not beh.exact:
        beh = Behavior(N, np.array([Fraction(float(v)) for v in beh.p1], dtype=object))
    size = 1 << N
    n = len(verts)
    A = [[v[k] for v in verts] for k in range(size)] + [[1] * n]
    b = list(beh.p1) + [1]
    res = solve_standard_form(A, b, [0] * n)
    if res.status == "infeasible":
        y = res.farkas
        normal = tuple(y[:size])
        offset = -y[size]
        viol = dot(normal, beh.p1) - offset
        return MembershipCertificate(False, N, K, verts, separating_normal=normal,
                                     separating_offset=offset, violation=viol)
    weights = {i: w for i, w in enumerate(res.x) if w != 0}
    boundary = None
    if check_boundary:
        # max t with every weight >= t; relative interior iff t > 0
        col_sum = [sum(v[k] for v in verts) for k in range(size)] + [n]
        A2 = [row + [cs] for row, cs in zip(A, col_sum)]
        res2 = solve_standard_form(A2, b, [0] * n + [-1])
        boundary = res2.status == "optimal" and res2.x[-1] == 0
    return MembershipCertificate(True, N, K, verts, weights=weights, boundary=boundary)


def _membership_float(beh, N, K, verts, tol):
    from scipy.optimize import linprog

    size = 1 << N
    V = np.array(verts, dtype=float)
    target = beh.p1.astype(float)
    A_eq = np.vstack([V.T, np.ones(len(verts))])
    b_eq = np.concatenate([target, [1.0]])
    res = linprog(np.zeros(len(verts)), A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if res.status == 0 and np.abs(A_eq @ res.x - b_eq).max() <= tol:
        weights = {i: float(w) for i, w in enumerate(res.x) if w > tol}
        return MembershipCertificate(True, N, K, verts, weights=weights, exact=False)
    # separation: max a.beh - t  s.t.  a.v <= t, |a_k| <= 1
    c = np.concatenate([-target, [1.0]])
    A_ub = np.hstack([V, -np.ones((len(verts), 1))])
    sep = linprog(c, A_ub=A_ub, b_ub=np.zeros(len(verts)),
                  bounds=[(-1, 1)] * size + [(None, None)], method="highs")
    a, t = sep.x[:size], sep.x[size]
    viol = float(a @ target - t)
    if viol <= tol:
        raise RuntimeError("float LP could not decide membership within tolerance")
    return MembershipCertificate(False, N, K, verts, separating_normal=tuple(a),
                                 separating_offset=float(t), violation=viol, exact=False)
