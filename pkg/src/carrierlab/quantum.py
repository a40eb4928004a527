"""Single-particle quantum strategies and Helstrom-optimal decoding.

A strategy is stored in canonical form: superposition weights ``p_i`` over
the N paths, a fixed reference internal state ``chi = e_0`` and the N
encoded images ``chi_i = U_i chi``. The unitaries themselves are never
built: only their action on ``chi`` enters any winning probability.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .behavior import Behavior
from .games import OracleGame

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class QuantumStrategy:
    n_inputs: int
    internal_dim: int
    weights: np.ndarray
    encoded_states: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.weights, dtype=np.float64).copy()
        chi = np.asarray(self.encoded_states, dtype=np.complex128).reshape(self.n_inputs, -1).copy()
        if p.shape != (self.n_inputs,):
            raise ValueError("need one weight per input")
        if chi.shape[1] != self.internal_dim:
            raise ValueError("encoded states have the wrong dimension")
        if np.any(p < -NORM_TOL) or abs(p.sum() - 1) > NORM_TOL:
            raise ValueError("weights must lie on the probability simplex")
        if np.any(np.abs(np.linalg.norm(chi, axis=1) - 1) > NORM_TOL):
            raise ValueError("encoded states must be unit vectors")
        p = np.clip(p, 0.0, None)
        p.flags.writeable = False
        chi.flags.writeable = False
        object.__setattr__(self, "weights", p)
        object.__setattr__(self, "encoded_states", chi)

    @property
    def reference(self) -> np.ndarray:
        chi = np.zeros(self.internal_dim, dtype=np.complex128)
        chi[0] = 1.0
        return chi

    def to_dict(self) -> dict:
        return {
            "n_inputs": self.n_inputs,
            "internal_dim": self.internal_dim,
            "weights": [float(w) for w in self.weights],
            "encoded_states": [[[float(z.real), float(z.imag)] for z in row] for row in self.encoded_states],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "QuantumStrategy":
        states = np.array([[complex(re, im) for re, im in row] for row in data["encoded_states"]])
        return cls(int(data["n_inputs"]), int(data["internal_dim"]), np.array(data["weights"]), states)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def symmetric_strategy(N: int, d: int, theta: float, phi: float = 0.0, psi: float = 0.0) -> QuantumStrategy:
    """Uniform weights, every site encodes ``(e^{i phi} cos theta, e^{i psi} sin theta, 0, ...)``."""
    if d < 2 and abs(math.sin(theta)) > 1e-15:
        raise ValueError("a rotation out of the reference state needs d >= 2")
    chi = np.zeros(d, dtype=np.complex128)
    chi[0] = np.exp(1j * phi) * math.cos(theta)
    if d >= 2:
        chi[1] = np.exp(1j * psi) * math.sin(theta)
    return QuantumStrategy(N, d, np.full(N, 1.0 / N), np.tile(chi, (N, 1)))


def encoded_pure_state(s: QuantumStrategy, x) -> np.ndarray:
    """``psi_x``: block i is ``sqrt(p_i)`` times chi (x_i = 0) or the encoded state (x_i = 1)."""
    k = x if isinstance(x, (int, np.integer)) else sum(int(b) << j for j, b in enumerate(x))
    chi = s.reference
    blocks = [np.sqrt(s.weights[i]) * (s.encoded_states[i] if (k >> i) & 1 else chi)
              for i in range(s.n_inputs)]
    return np.concatenate(blocks)


def all_encoded_states(s: QuantumStrategy) -> np.ndarray:
    """Row k holds ``psi_[k]``; shape ``(2^N, N d)``."""
    N, d = s.n_inputs, s.internal_dim
    k = np.arange(1 << N)
    bits = (k[:, None] >> np.arange(N)[None, :]) & 1  # (2^N, N)
    chi = s.reference
    blocks = np.where(bits[:, :, None] == 1, s.encoded_states[None, :, :], chi[None, None, :])
    blocks = blocks * np.sqrt(s.weights)[None, :, None]
    return blocks.reshape(1 << N, N * d)


@dataclass(frozen=True, eq=False)
class DiscriminationInstance:
    q0: float
    q1: float
    sigma0: np.ndarray
    sigma1: np.ndarray

    def __post_init__(self):
        if self.q0 < 0 or self.q1 < 0 or abs(self.q0 + self.q1 - 1) > NORM_TOL:
            raise ValueError("priors must be nonnegative and sum to 1")
        for name, rho in (("sigma0", self.sigma0), ("sigma1", self.sigma1)):
            if np.abs(rho - rho.conj().T).max() > HERMITIAN_TOL:
                raise ValueError(f"{name} is not Hermitian")
            if abs(np.trace(rho).real - 1) > HERMITIAN_TOL:
                raise ValueError(f"{name} does not have unit trace")
            if np.linalg.eigvalsh(rho).min() < -HERMITIAN_TOL:
                raise ValueError(f"{name} is not positive semidefinite")

    @property
    def operator(self) -> np.ndarray:
        """``M = q1 sigma1 - q0 sigma0``."""
        return self.q1 * self.sigma1 - self.q0 * self.sigma0


def build_discrimination(s: QuantumStrategy, g: OracleGame) -> DiscriminationInstance:
    if s.n_inputs != g.n_inputs:
        raise ValueError("strategy and game have different N")
    w = np.asarray([float(v) for v in g.weights])
    v = g.target.truth_table
    q1 = float(w[v == 1].sum())
    q0 = float(w[v == 0].sum())
    if q0 == 0 or q1 == 0:
        raise ValueError("game puts zero weight on one answer; nothing to discriminate")
    psi = all_encoded_states(s)
    sig = []
    for a, qa in ((0, q0), (1, q1)):
        sel = (v == a) & (w > 0)
        vecs = psi[sel] * np.sqrt(w[sel] / qa)[:, None]
        sig.append(vecs.T @ vecs.conj())
    return DiscriminationInstance(q0 / (q0 + q1), q1 / (q0 + q1), sig[0], sig[1])


def trace_norm(m: np.ndarray) -> float:
    if np.abs(m - m.conj().T).max() > HERMITIAN_TOL:
        raise ValueError("trace norm requested for a non-Hermitian matrix")
    return float(np.abs(np.linalg.eigvalsh(m)).sum())


def helstrom_value(inst: DiscriminationInstance) -> float:
    """Optimal success probability ``1/2 + ||q1 sigma1 - q0 sigma0||_1 / 2``."""
    return 0.5 + 0.5 * trace_norm(inst.operator)


def helstrom_projector(inst: DiscriminationInstance) -> np.ndarray:
    """Projector on the nonnegative eigenspace of M (outcome 1); zero modes go to outcome 1."""
    vals, vecs = np.linalg.eigh(inst.operator)
    keep = vecs[:, vals >= 0]
    return keep @ keep.conj().T


def strategy_behavior(s: QuantumStrategy, g: OracleGame) -> Behavior:
    """Behavior produced by the strategy under the Helstrom-optimal measurement for ``g``."""
    proj = helstrom_projector(build_discrimination(s, g))
    psi = all_encoded_states(s)
    p1 = np.einsum("ki,ij,kj->k", psi.conj(), proj, psi).real
    return Behavior(s.n_inputs, np.clip(p1, 0.0, 1.0))


# ---------------------------------------------------------------------------
# Symmetric strategies: block-circulant analytics
# ---------------------------------------------------------------------------


def symmetric_M(N: int, theta: float, phi: float, psi: float) -> np.ndarray:
    """``q1 sigma1 - q0 sigma0`` for uniform weights and a common encoding, in C^N x C^2."""
    c, s = math.cos(theta), math.sin(theta)
    A = np.array([[c * c + N - 2, s * c * np.exp(1j * (phi - psi))],
                  [s * c * np.exp(-1j * (phi - psi)), s * s]])
    B = np.array([[2 * c * math.cos(phi) + N - 3, s * np.exp(-1j * psi)],
                  [s * np.exp(1j * psi), 0.0]])
    blocks = np.kron(np.ones((N, N)), B) + np.kron(np.eye(N), A - B)
    return blocks / (N * (N + 1))


def _lambda_pm(N: int, theta: float, phi: float) -> tuple[float, float]:
    u = 2 * math.cos(theta) * math.cos(phi) + N - 2
    root = math.sqrt((N - 1) ** 2 * u * u + 4 * N * math.sin(theta) ** 2)
    return (N - 1) * u / 2 + root / 2, (N - 1) * u / 2 - root / 2


def block_circulant_eigenvalues(N: int, theta: float, phi: float) -> np.ndarray:
    """Eigenvalues of ``symmetric_M`` (prefactor included), ascending."""
    lp, lm = _lambda_pm(N, theta, phi)
    gap = 2 - 2 * math.cos(theta) * math.cos(phi)
    vals = [0.0] * (N - 1) + [gap] * (N - 1) + [lp, lm]
    return np.sort(np.array(vals)) / (N * (N + 1))


def trace_norm_Ms_closed_form(N: int, theta: float, phi: float) -> float:
    cc = math.cos(phi) * math.cos(theta)
    root = math.sqrt(4 * N * math.sin(theta) ** 2 + (N - 1) ** 2 * (2 * cc + N - 2) ** 2)
    return ((N - 1) * (2 - 2 * cc) + root) / (N * (N + 1))


def optimal_theta(N: int) -> float:
    if N < 2:
        raise ValueError("N must be at least 2")
    if N <= 3:
        return math.pi
    return math.acos((1 - N) / (N * N - 3 * N + 1))


def theorem1_delta(N: int) -> Fraction:
    """Best fingerprinting violation with a common encoding unitary (attained at d = 2)."""
    if N < 2:
        raise ValueError("N must be at least 2")
    if N == 2:
        return Fraction(1, 3)
    if N == 3:
        return Fraction(1, 6)
    return Fraction(1, (N + 1) * (N * N - 3 * N + 1))


def symmetric_delta(N: int, theta: float, phi: float = 0.0) -> float:
    """Violation of the symmetric strategy at ``(theta, phi)`` from the closed form."""
    return 0.5 + 0.5 * trace_norm_Ms_closed_form(N, theta, phi) - N / (N + 1)
