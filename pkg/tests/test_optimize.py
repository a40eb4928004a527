import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from carrierlab.games import fingerprinting_game
from carrierlab.optimize import (fingerprint_delta, hyperspherical, lemma3_check, optimize_violation,
                                 softmax_weights, unit_complex)
from carrierlab.quantum import (QuantumStrategy, build_discrimination, helstrom_value, optimal_theta,
                                symmetric_strategy, theorem1_delta)


@given(st.lists(st.floats(-10, 10), min_size=0, max_size=8))
def test_hyperspherical_is_unit(angles):
    assert np.linalg.norm(hyperspherical(np.array(angles))) == pytest.approx(1.0)


def test_unit_complex_d1_is_a_phase():
    z = unit_complex(np.array([0.7]), 1)
    assert z.shape == (1,) and z[0] == pytest.approx(np.exp(0.7j))


@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_softmax_on_simplex(n, seed):
    w = softmax_weights(np.random.default_rng(seed).normal(size=n - 1) * 5, n)
    assert np.all(w >= 0) and w.sum() == pytest.approx(1.0)


@given(st.integers(2, 5), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_fast_objective_matches_helstrom_route(N, d, seed):
    rng = np.random.default_rng(seed)
    p = rng.dirichlet(np.ones(N))
    chi = rng.normal(size=(N, d)) + 1j * rng.normal(size=(N, d))
    chi /= np.linalg.norm(chi, axis=1)[:, None]
    s = QuantumStrategy(N, d, p, chi)
    ref = helstrom_value(build_discrimination(s, fingerprinting_game(N))) - N / (N + 1)
    assert fingerprint_delta(p, chi) == pytest.approx(ref, abs=1e-12)


@pytest.mark.parametrize("N", [4, 5, 6])
def test_symmetric_optimum(N):
    res = optimize_violation(N, 2, symmetric_unitaries=True, symmetric_weights=True, restarts=16)
    assert res.delta == pytest.approx(float(theorem1_delta(N)), abs=1e-6)


def test_small_n_free_optimum():
    assert optimize_violation(3, 2, restarts=8).delta == pytest.approx(1 / 6, abs=1e-6)
    assert optimize_violation(2, 1, restarts=8).delta == pytest.approx(1 / 3, abs=1e-6)


def test_d1_strictly_below_shared_encoding_optimum_at_n4():
    res = optimize_violation(4, 1, symmetric_weights=True, restarts=16)
    assert res.delta < 1 / 25 - 1e-3


def test_determinism_and_worker_independence():
    a = optimize_violation(4, 2, restarts=6, seed=3)
    b = optimize_violation(4, 2, restarts=6, seed=3)
    c = optimize_violation(4, 2, restarts=6, seed=3, workers=3)
    assert a.delta == b.delta == c.delta and a.best_restart == c.best_restart
    assert json.dumps(a.to_dict()) == json.dumps(c.to_dict())
    assert a.log_lines() == c.log_lines()


def test_restart_log_records():
    res = optimize_violation(3, 1, restarts=4, seed=7)
    lines = [json.loads(l) for l in res.log_lines().splitlines()]
    assert [l["index"] for l in lines] == [0, 1, 2, 3]
    assert all(l["seed"] == [7, l["index"]] for l in lines)
    assert max(l["delta"] for l in lines) == res.delta
    assert set(lines[0]) >= {"seed", "iterations", "delta"}


def test_ties_resolve_to_lowest_restart_index():
    # no free parameters: every restart sees the same objective value
    N = 3
    fixed = np.tile([1.0 + 0j], (N, 1))
    res = optimize_violation(N, 1, symmetric_weights=True, restarts=5, fixed_states=fixed)
    assert res.best_restart == 0


@pytest.mark.parametrize("method", ["nelder-mead", "slsqp"])
def test_other_methods(method):
    res = optimize_violation(4, 2, symmetric_unitaries=True, symmetric_weights=True, restarts=4, method=method)
    assert res.delta == pytest.approx(0.04, abs=1e-5)


def test_bad_arguments():
    with pytest.raises(ValueError):
        optimize_violation(1, 2)
    with pytest.raises(ValueError):
        optimize_violation(3, 2, restarts=0)
    with pytest.raises(ValueError):
        optimize_violation(3, 2, restarts=1, method="newton")


def test_returned_strategy_reproduces_delta():
    res = optimize_violation(4, 2, restarts=4)
    s = res.strategy
    val = helstrom_value(build_discrimination(s, fingerprinting_game(4))) - 0.8
    assert val == pytest.approx(res.delta, abs=1e-10)


@pytest.mark.parametrize("N", [4, 5, 6])
def test_nonuniform_weights_do_not_help_symmetric_encoding(N):
    theta = optimal_theta(N)
    chi = np.tile([math.cos(theta), math.sin(theta)], (N, 1)).astype(complex)
    uniform = symmetric_strategy(N, 2, theta)
    base = helstrom_value(build_discrimination(uniform, fingerprinting_game(N))) - N / (N + 1)
    res = optimize_violation(N, 2, restarts=50, fixed_states=chi, seed=11)
    assert res.delta <= base + 1e-7


@pytest.mark.parametrize("N", [2, 3])
def test_extra_dimension_does_not_help(N):
    rep = lemma3_check(N, tol=1e-5, restarts=6)
    assert rep.passed, rep


def test_same_dimension_same_seed_gives_zero_gap():
    a = optimize_violation(3, 1, restarts=3, seed=5).delta
    b = optimize_violation(3, 1, restarts=3, seed=5).delta
    assert a - b == 0
