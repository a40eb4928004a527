from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, strategies as st

from carrierlab.behavior import Behavior, hadamard_spectrum, is_member_J, mask_weights, random_behavior
from carrierlab.exact import rank
from carrierlab.games import fingerprinting_game, game_value
from carrierlab.interference_lp import (LPConstraint, brute_force_j2_violation, constraint_values,
                                        edge_directions, expected_slopes, j2_vertices, lp_constraints,
                                        neighbor_optimality_check, objective_coefficients, objective_value,
                                        optimal_behavior_entry, optimal_behavior_report, pair_character,
                                        reconstruct_behavior, solve_second_order_lp, spectrum_of_symmetric,
                                        symmetrize_behavior, theorem2_delta, tight_constraints, weight_profile,
                                        zstar_closed_form)
from carrierlab.polytope import membership_C
from carrierlab.quantum import theorem1_delta


@pytest.mark.parametrize("N", range(2, 9))
def test_pair_character_by_direct_count(N):
    for h in range(N + 1):
        bits = [1] * h + [0] * (N - h)
        direct = sum((-1) ** (bits[i] + bits[j]) for i, j in combinations(range(N), 2))
        assert pair_character(N, h) == direct


def test_constraint_examples():
    cons = lp_constraints(4)
    assert cons[0] == LPConstraint(0, (1, 4, 6))
    assert cons[1].coefficients == (1, 2, 0)
    assert cons[4].coefficients == (1, -4, 6)


@pytest.mark.parametrize("N", range(2, 7))
def test_constraints_are_behavior_entries_of_symmetric_spectra(N, rng):
    # a random symmetric spectrum up to weight 2, pushed through the inverse transform
    z = rng.normal(size=3)
    w = mask_weights(N)
    raw = np.where(w == 0, z[0], np.where(w == 1, z[1], np.where(w == 2, z[2], 0.0)))
    from carrierlab.kernels import fwht
    p1 = fwht(raw)
    for k in range(1 << N):
        h = bin(k).count("1")
        row = lp_constraints(N)[h].coefficients
        assert p1[k] == pytest.approx(row[0] * z[0] + row[1] * z[1] + row[2] * z[2])


def test_objective_examples():
    c, const = objective_coefficients(4)
    assert c == (Fraction(3, 5), Fraction(4, 5), Fraction(-6, 5)) and const == Fraction(-3, 5)
    assert objective_coefficients(5)[0][2] == 0
    for N in range(2, 12):
        assert objective_coefficients(N)[1] == -Fraction(N - 1, N + 1)


@pytest.mark.parametrize("N", range(2, 9))
def test_objective_equals_game_value_on_reconstruction(N, rng):
    z = tuple(Fraction(int(v), 97) for v in rng.integers(-10, 10, 3))
    vals = constraint_values(N, z)
    # P(0|0) + sum_i P(1|e_i), without the [0, 1] check
    direct = (1 - vals[0] + N * vals[1]) / (N + 1) - Fraction(N, N + 1)
    assert objective_value(N, z) == direct


@pytest.mark.parametrize("N", [4, 5, 6, 10, 17, 30])
def test_lp_matches_closed_forms(N):
    sol = solve_second_order_lp(N)
    assert sol.delta == theorem2_delta(N)
    assert sol.z == zstar_closed_form(N)
    assert sorted(sol.tight) == [(1, 1), (2, 1), (N, 0)]


@pytest.mark.parametrize("N", [2, 3, 4, 5, 8])
def test_simplex_backend_agrees(N):
    a = solve_second_order_lp(N)
    b = solve_second_order_lp(N, backend="simplex")
    assert a.delta == b.delta
    assert objective_value(N, b.z.z) == b.delta


def test_numpy_and_jit_vertex_backends_agree():
    from carrierlab import kernels
    cons = lp_constraints(7)
    rows = np.array([c.coefficients for c in cons], dtype=np.int64)
    lo, hi = np.zeros(8, dtype=np.int64), np.ones(8, dtype=np.int64)
    a = kernels._plane_vertices_numpy(rows, lo, hi)
    b = kernels._plane_vertices_loop(rows, lo, hi)
    assert sorted(map(tuple, a.tolist())) == sorted(map(tuple, b.tolist()))


def test_named_examples():
    assert theorem2_delta(4) == Fraction(1, 15)
    assert theorem2_delta(5) == Fraction(1, 36)
    assert theorem2_delta(6) == Fraction(1, 70)
    assert theorem2_delta(10) == Fraction(1, 396)
    assert zstar_closed_form(4).z == (Fraction(5, 6), Fraction(1, 12), Fraction(-1, 12))
    with pytest.raises(ValueError):
        theorem2_delta(3)


@pytest.mark.parametrize("N", range(4, 31))
def test_weight_profile_of_optimum(N):
    prof = weight_profile(zstar_closed_form(N))
    assert prof == [optimal_behavior_entry(N, h) for h in range(N + 1)]
    assert 1 - prof[0] == Fraction(2, N * N - 3 * N + 2)
    assert prof[1] == prof[2] == 1 and prof[N] == 0
    assert all(0 <= v <= 1 for v in prof)


@pytest.mark.parametrize("N", range(4, 11))
def test_reconstructed_optimum_in_J2(N):
    beh = reconstruct_behavior(zstar_closed_form(N))
    assert is_member_J(beh, 2, tol=0)
    g = fingerprinting_game(N)
    assert game_value(g, beh) - g.constant == theorem2_delta(N)
    assert spectrum_of_symmetric(beh) == zstar_closed_form(N)


def test_dense_reconstruction_guard():
    with pytest.raises(ValueError):
        reconstruct_behavior(zstar_closed_form(30))


def test_optimum_not_classical_at_n4():
    assert not membership_C(reconstruct_behavior(zstar_closed_form(4)), 4, 3).member


@pytest.mark.parametrize("N", range(4, 12))
def test_optimum_is_fractional_simple_vertex(N):
    zs = zstar_closed_form(N).z
    prof = weight_profile(zstar_closed_form(N))
    assert any(0 < v < 1 for v in prof)
    tight = tight_constraints(N, zs)
    rows = [lp_constraints(N)[h].coefficients for h, _ in tight]
    assert len(tight) == 3 and rank(rows) == 3


@pytest.mark.parametrize("N", range(4, 11))
def test_neighbor_check(N):
    rep = neighbor_optimality_check(N)
    assert rep.passed, rep
    assert rep.slopes == expected_slopes(N)
    assert rep.slopes[0] == Fraction(8, N + 1)
    assert rep.slopes[2] == Fraction(4 * N * (N * N - 5 * N + 6), N + 1)


NSYM = sp.symbols("N", positive=True, integer=True)


def symbolic_edges(N):
    return (sp.Matrix([-N**2 + 5 * N - 8, 2 * (N - 3), -2]),
            sp.Matrix([N * (N**2 - 4 * N + 3), 2 - 2 * N, 2 - 2 * N]),
            sp.Matrix([-N * (N**2 - 7 * N + 10), 4 * N - 8, 2 * N - 4]))


def test_edge_directions_symbolically():
    N = NSYM
    r = lambda h: sp.Matrix([1, N - 2 * h, N * (N - 1) / 2 - 2 * h * (N - h)])
    c = sp.Matrix([N - 1, N * (N - 3), (N - 5) * N * (N - 1) / 2]) / (N + 1)
    e1, e2, e3 = symbolic_edges(N)
    zs = sp.Matrix([(3 * N**2 - 7 * N) / 2, N - 3, -1]) / (2 * N**2 - 6 * N + 4)
    # z* sits on the three facets
    assert sp.simplify(r(1).dot(zs) - 1) == 0
    assert sp.simplify(r(2).dot(zs) - 1) == 0
    assert sp.simplify(r(N).dot(zs)) == 0
    # each edge stays on two facets
    assert sp.simplify(r(1).dot(e1)) == 0 and sp.simplify(r(2).dot(e1)) == 0
    assert sp.simplify(r(1).dot(e2)) == 0 and sp.simplify(r(N).dot(e2)) == 0
    assert sp.simplify(r(2).dot(e3)) == 0 and sp.simplify(r(N).dot(e3)) == 0
    # objective slopes
    assert sp.simplify(c.dot(e1) - 8 / (N + 1)) == 0
    assert sp.simplify(c.dot(e2) - 4 * N * (N - 1) / (N + 1)) == 0
    assert sp.simplify(c.dot(e3) - 4 * N * (N**2 - 5 * N + 6) / (N + 1)) == 0
    # t > 0 leaves the third facet: below 0 at h = N, above 1 at h = 2 and h = 1
    assert sp.factor(r(N).dot(e1)) == sp.factor(-(4 * N**2 - 12 * N + 8))
    assert sp.factor(r(2).dot(e2)) == sp.factor(4 * N**2 - 12 * N + 8)
    assert sp.factor(r(1).dot(e3)) == sp.factor(4 * N**2 - 12 * N + 8)


def test_edge_directions_match_symbolic_forms():
    for n in range(4, 11):
        expected = [tuple(int(v) for v in e.subs(NSYM, n)) for e in symbolic_edges(NSYM)]
        assert edge_directions(n) == expected


@pytest.mark.parametrize("N", [2, 3])
def test_small_n_against_brute_force(N):
    assert solve_second_order_lp(N).delta == brute_force_j2_violation(N)


def test_j2_vertices_are_in_J2_and_cube():
    verts = j2_vertices(3)
    for v in verts:
        assert is_member_J(v, 2, tol=0)
    assert len(set(verts)) == len(verts)


@given(st.integers(3, 5), st.integers(0, 2**32 - 1))
def test_symmetrization_preserves_value_and_order(N, seed):
    rng = np.random.default_rng(seed)
    beh = random_behavior(N, rng, max_order=2)
    sym = symmetrize_behavior(beh)
    g = fingerprinting_game(N)
    assert float(game_value(g, sym)) == pytest.approx(float(game_value(g, beh)), abs=1e-12)
    assert is_member_J(sym, 2)
    spec = hadamard_spectrum(sym).coefficients
    w = mask_weights(N)
    for h in range(3):
        assert np.ptp(spec[w == h]) < 1e-12


def test_report_contents():
    rep = optimal_behavior_report(4)
    assert rep["delta"] == "1/15" and rep["p0_all_zero"] == "1/3"
    assert rep["z"] == ["5/6", "1/12", "-1/12"] and rep["in_J2"]
    sol = solve_second_order_lp(5).to_dict()
    assert set(sol) == {"N", "delta", "z", "tight_constraints"} and sol["delta"] == "1/36"


def test_second_order_to_quantum_ratio_tends_to_two():
    r = float(theorem2_delta(50) / theorem1_delta(50))
    assert 1.9 <= r <= 2.1
    assert float(theorem2_delta(2000) / theorem1_delta(2000)) == pytest.approx(2, abs=1e-2)
