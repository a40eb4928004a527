"""Exact and numerical tools for interference orders of single-particle strategies.

Behaviors of N-input, binary-output boxes; the classical polytopes C_{N,K}
spanned by K-juntas; oracle games and the fingerprinting inequality;
quantum strategies with Helstrom decoding; and the symmetric second-order
interference LP.
"""
from ._accel import backend
from .behavior import (Behavior, Spectrum, hadamard_spectrum, interference_order, is_member_J,
                       sorkin_order, sorkin_sum)
from .games import (Hyperplane, OracleGame, classical_bound, fingerprinting_game, game_value,
                    hyperplane_to_game, violation)
from .interference_lp import (SymmetricSpectrum, lp_constraints, neighbor_optimality_check,
                              objective_coefficients, reconstruct_behavior, solve_second_order_lp,
                              theorem2_delta, zstar_closed_form)
from .juntas import BooleanFunction, BudgetExceeded, count_k_juntas, enumerate_k_juntas, is_k_junta
from .optimize import optimize_violation
from .polytope import (HyperoctahedralElement, RationalPolytope, apply_symmetry, f_vector,
                       facet_enumeration, membership_C, vertices_of_C)
from .quantum import (QuantumStrategy, helstrom_value, strategy_behavior, symmetric_M, theorem1_delta,
                      trace_norm_Ms_closed_form)

__version__ = "0.1.0"
