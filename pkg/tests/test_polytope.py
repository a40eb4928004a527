from fractions import Fraction
import numpy as np
import pytest
from hypothesis import given, strategies as st

from carrierlab.behavior import Behavior, is_member_J, random_behavior
from carrierlab.exact import rank
from carrierlab.games import fingerprinting_game, game_value
from carrierlab.interference_lp import reconstruct_behavior, zstar_closed_form
from carrierlab.juntas import BooleanFunction, BudgetExceeded, junta_tables
from carrierlab.polytope import (HyperoctahedralElement, RationalPolytope, act_on_function,
                                 affine_dimension, apply_inversion, apply_symmetry, f_vector,
                                 face_lattice, facet_enumeration, lemma1_hull_vertices, membership_C,
                                 vertices_of_C)


@pytest.fixture(scope="module")
def c32():
    return facet_enumeration(vertices_of_C(3, 2))


def square():
    return RationalPolytope(2, ((0, 0), (1, 0), (0, 1), (1, 1)))


def test_vertex_counts():
    assert len(vertices_of_C(1, 1).vertices) == 4
    assert len(vertices_of_C(2, 1).vertices) == 6
    assert len(vertices_of_C(3, 2).vertices) == 38


def test_affine_dimensions():
    assert affine_dimension(square().vertices) == 2
    assert vertices_of_C(2, 1).affine_dim == 3
    assert vertices_of_C(3, 2).affine_dim == 7


def test_square_facets_and_f_vector():
    p = facet_enumeration(square())
    assert len(p.facets) == 4 and f_vector(p) == (4, 4)
    assert facet_enumeration(vertices_of_C(1, 1)).f_vector == (4, 4)


@pytest.mark.parametrize("N", [2, 3])
def test_cross_polytope(N):
    p = facet_enumeration(vertices_of_C(N, 1))
    assert len(p.vertices) == 2 * N + 2
    assert p.affine_dim == N + 1
    assert len(p.facets) == 2 ** (N + 1)


def test_octahedron_face_lattice():
    assert f_vector(facet_enumeration(vertices_of_C(2, 1))) == (6, 12, 8)


def test_c22_is_a_four_cube():
    assert f_vector(facet_enumeration(vertices_of_C(2, 2))) == (16, 32, 24, 8)


def test_c32_f_vector(c32):
    assert c32.affine_dim == 7
    assert f_vector(c32) == (38, 408, 1608, 2764, 2208, 776, 96)


def test_f_vector_satisfies_euler_relation(c32):
    fv = f_vector(c32)
    # sum_{k<d} (-1)^k f_k = 1 - (-1)^d
    d = c32.affine_dim
    assert sum((-1) ** k * f for k, f in enumerate(fv)) == 1 - (-1) ** d


def test_facets_are_valid_and_saturated(c32):
    verts = c32.vertices
    for f in c32.facets:
        slacks = [f.slack(v) for v in verts]
        assert min(slacks) == 0
        tight = [v for v, s in zip(verts, slacks) if s == 0]
        # tight vertices span a facet: affine rank d - 1
        assert affine_dimension(tight) == c32.affine_dim - 1


def test_incidence_totals_match_lattice(c32):
    lattice = face_lattice(c32)
    incid = c32.incidence()
    assert sorted(set(incid)) == sorted(lattice[c32.affine_dim - 1])
    # every vertex lies on at least d facets
    for i in range(len(c32.vertices)):
        assert sum(1 for m in incid if m >> i & 1) >= c32.affine_dim


def test_no_vertex_is_redundant():
    p = vertices_of_C(3, 1)
    for i, v in enumerate(p.vertices):
        others = [w for j, w in enumerate(p.vertices) if j != i]
        cert = membership_C(Behavior(3, list(v)), 3, 1)
        assert cert.member and len(cert.weights) == 1
        # removing v makes it unreachable
        verts = [list(w) for w in others]
        assert Behavior(3, list(v)) not in {Behavior(3, w) for w in verts}


def test_facet_budget_enforced():
    with pytest.raises(BudgetExceeded):
        facet_enumeration(vertices_of_C(3, 2), budget_vertices=10)


def test_symmetry_identity_and_examples():
    and_vertex = Behavior.deterministic(2, [0, 0, 0, 1])
    e = HyperoctahedralElement.identity(2)
    assert apply_symmetry(e, and_vertex) == and_vertex
    flip_all = HyperoctahedralElement((0, 1), (1, 1))
    # AND(not x0, not x1) is 1 only at 00
    assert apply_symmetry(flip_all, and_vertex) == Behavior.deterministic(2, [1, 0, 0, 0])
    swap = HyperoctahedralElement((1, 0), (0, 0))
    x0 = Behavior.deterministic(2, [0, 1, 0, 1])
    x1 = Behavior.deterministic(2, [0, 0, 1, 1])
    assert apply_symmetry(swap, x0) == x1


def test_inversion_examples():
    assert apply_inversion(Behavior.deterministic(2, [0] * 4)) == Behavior.deterministic(2, [1] * 4)
    center = Behavior.constant(2, Fraction(1, 2))
    assert apply_inversion(center) == center
    assert apply_inversion(Behavior.deterministic(2, [0, 0, 0, 1])) == Behavior.deterministic(2, [1, 1, 1, 0])


@given(st.integers(2, 4), st.integers(0, 2), st.integers(0, 2**32 - 1))
def test_symmetries_permute_vertex_set(N, K, seed):
    K = min(K, N)
    verts = {Behavior.deterministic(N, t) for t in junta_tables(N, K)}
    b = HyperoctahedralElement.random(N, np.random.default_rng(seed))
    assert {apply_symmetry(b, v) for v in verts} == verts


@given(st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_involutions_square_to_identity(N, seed):
    b = HyperoctahedralElement.random(N, np.random.default_rng(seed))
    beh = random_behavior(N, np.random.default_rng(seed + 1))
    twice = apply_symmetry(b, apply_symmetry(b, beh))
    if b.is_involution():
        np.testing.assert_array_equal(twice.p1, beh.p1)


def test_group_action_on_functions_matches_behaviors(rng):
    f = BooleanFunction.from_callable(3, lambda x: x[0] & (x[1] | x[2]))
    b = HyperoctahedralElement.random(3, rng)
    assert act_on_function(b, f).as_behavior() == apply_symmetry(b, f.as_behavior())


@pytest.mark.parametrize("N,K", [(2, 1), (3, 1), (3, 2), (4, 2)])
def test_embedded_cube_union_equals_junta_vertices(N, K):
    expected = {Behavior.deterministic(N, t) for t in junta_tables(N, K)}
    assert lemma1_hull_vertices(N, K) == expected


def test_embedded_cube_union_at_k_equals_n_is_full_cube():
    assert len(lemma1_hull_vertices(2, 2)) == 16


@pytest.mark.parametrize("N,K", [(2, 1), (3, 1), (3, 2), (4, 2)])
def test_vertices_pass_interference_test_exactly(N, K):
    for t in junta_tables(N, K):
        assert is_member_J(Behavior.deterministic(N, t), K, tol=0)


def test_vertices_of_CK_are_members_of_CK_plus_1():
    for t in junta_tables(3, 1):
        assert membership_C(Behavior.deterministic(3, t), 3, 2, check_boundary=False).member


def test_uniform_behavior_in_C_N0():
    cert = membership_C(Behavior.constant(3, Fraction(1, 2)), 3, 0)
    assert cert.member and sum(cert.weights.values()) == 1
    assert cert.boundary is False
    assert cert.reconstruct() == [Fraction(1, 2)] * 8


def test_vertex_membership_is_point_mass_on_boundary():
    beh = Behavior.deterministic(3, [1, 0, 1, 0, 1, 0, 1, 0])
    cert = membership_C(beh, 3, 2)
    assert cert.member and list(cert.weights.values()) == [1] and cert.boundary


def test_random_mixture_membership_and_routing_form(rng):
    tables = junta_tables(3, 2)
    idx = rng.choice(len(tables), size=5, replace=False)
    w = [Fraction(int(v), 15) for v in (1, 2, 3, 4, 5)]
    p1 = [sum(wi * int(tables[i][k]) for wi, i in zip(w, idx)) for k in range(8)]
    cert = membership_C(Behavior(3, p1), 3, 2)
    assert cert.member and cert.reconstruct() == p1
    routes = cert.routing_form()
    assert sum(q for q, _ in routes.values()) == 1
    for support, (q, table) in routes.items():
        assert len(support) == 2 and all(0 <= v <= 1 for v in table)


def test_optimal_second_order_behavior_is_not_classical():
    beh = reconstruct_behavior(zstar_closed_form(4))
    cert = membership_C(beh, 4, 3)
    assert not cert.member
    normal, offset = cert.separating_normal, cert.separating_offset
    assert sum(a * b for a, b in zip(normal, beh.p1)) > offset
    for t in junta_tables(4, 3):
        assert sum(a * int(b) for a, b in zip(normal, t)) <= offset
    g = fingerprinting_game(4)
    assert game_value(g, beh) - g.constant == Fraction(1, 15)


@given(st.integers(0, 2**32 - 1))
def test_float_backend_agrees_with_exact(seed):
    rng = np.random.default_rng(seed)
    beh = random_behavior(3, rng, max_order=2, scale=float(rng.uniform(0.2, 1.0)))
    exact = membership_C(beh, 3, 2, check_boundary=False)
    approx = membership_C(beh, 3, 2, exact=False)
    if exact.member:
        assert approx.member
    elif exact.violation > 1e-9 * max(1, max(abs(float(a)) for a in exact.separating_normal)):
        # round-off off the affine hull (~1e-16) is inside the float tolerance by design
        assert not approx.member


def test_float_certificate_separates():
    beh = reconstruct_behavior(zstar_closed_form(4)).as_float()
    cert = membership_C(beh, 4, 3, exact=False)
    assert not cert.member and cert.violation > 1e-6


def test_polytope_report_dict():
    d = facet_enumeration(vertices_of_C(2, 1)).to_dict()
    assert d["affine_dim"] == 3 and d["f_vector"] == [6, 12, 8] and len(d["facets"]) == 8


def test_hull_rank_via_exact_elimination():
    verts = vertices_of_C(2, 1).vertices
    assert rank([[a - b for a, b in zip(v, verts[0])] for v in verts[1:]]) == 3

