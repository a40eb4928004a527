"""Multi-start local optimisation of the fingerprinting violation.

Parameterisation: each encoded state is a unit vector of C^d written in
hyperspherical angles on S^{2d-1} (real parts first, then imaginary parts);
the path weights are a softmax of N-1 free logits (the first logit is
pinned to 0). Symmetric modes share one encoded state and/or fix the
weights to 1/N. Restart ``i`` draws its start from ``default_rng([seed, i])``.
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import minimize

from .quantum import QuantumStrategy, theorem1_delta

METHODS = ("bfgs", "nelder-mead", "slsqp")
DEFAULT_RESTARTS = 64


def hyperspherical(angles: np.ndarray) -> np.ndarray:
    """Unit vector in R^{len(angles)+1}."""
    n = len(angles) + 1
    out = np.empty(n)
    sin_prod = 1.0
    for i, a in enumerate(angles):
        out[i] = sin_prod * np.cos(a)
        sin_prod *= np.sin(a)
    out[n - 1] = sin_prod
    return out


def unit_complex(angles: np.ndarray, d: int) -> np.ndarray:
    u = hyperspherical(angles)
    return u[:d] + 1j * u[d:]


def softmax_weights(logits: np.ndarray, n: int) -> np.ndarray:
    z = np.concatenate([[0.0], logits]) if n > 1 else np.zeros(1)
    z = z - z.max()
    e = np.exp(z)
    return e / e.sum()


def fingerprint_delta(weights: np.ndarray, states: np.ndarray) -> float:
    """Helstrom violation of the fingerprinting inequality for a canonical strategy."""
    N, d = states.shape
    amp = np.sqrt(weights)
    chi = np.zeros(d, dtype=np.complex128)
    chi[0] = 1.0
    base = np.zeros((N, d), dtype=np.complex128)
    base[:, 0] = amp
    psi = base.reshape(-1)
    vecs = np.tile(psi, (N + 1, 1))
    for i in range(N):
        vecs[i + 1, i * d:(i + 1) * d] = amp[i] * states[i]
    coef = np.full(N + 1, 1.0 / (N + 1))
    coef[0] = -coef[0]
    m = (vecs.T * coef) @ vecs.conj()
    return 0.5 + 0.5 * float(np.abs(np.linalg.eigvalsh(m)).sum()) - N / (N + 1)


@dataclass
class _Layout:
    N: int
    d: int
    symmetric_unitaries: bool
    symmetric_weights: bool
    fixed_states: np.ndarray | None = None

    @property
    def n_state_params(self) -> int:
        if self.fixed_states is not None:
            return 0
        per = 2 * self.d - 1
        return per if self.symmetric_unitaries else per * self.N

    @property
    def n_weight_params(self) -> int:
        return 0 if self.symmetric_weights else self.N - 1

    @property
    def size(self) -> int:
        return self.n_state_params + self.n_weight_params

    def unpack(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        ns = self.n_state_params
        if self.fixed_states is not None:
            states = self.fixed_states
        else:
            per = 2 * self.d - 1
            if self.symmetric_unitaries:
                states = np.tile(unit_complex(x[:per], self.d), (self.N, 1))
            else:
                states = np.stack([unit_complex(x[i * per:(i + 1) * per], self.d) for i in range(self.N)])
        if self.symmetric_weights:
            weights = np.full(self.N, 1.0 / self.N)
        else:
            weights = softmax_weights(x[ns:], self.N)
        return weights, states

    def random_start(self, rng: np.random.Generator) -> np.ndarray:
        angles = rng.uniform(0.0, 2 * np.pi, self.n_state_params)
        if self.symmetric_weights:
            return angles
        p = rng.dirichlet(np.ones(self.N))
        logits = np.log(p[1:]) - np.log(p[0])
        return np.concatenate([angles, logits])


@dataclass
class RestartRecord:
    index: int
    seed: list[int]
    iterations: int
    evaluations: int
    converged: bool
    delta: float
    message: str = ""


@dataclass
class OptimizationResult:
    delta: float
    strategy: QuantumStrategy
    best_restart: int
    restarts: list[RestartRecord] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "best_restart": self.best_restart,
            "strategy": self.strategy.to_dict(),
        }

    def log_lines(self) -> str:
        return "".join(json.dumps(asdict(r)) + "\n" for r in self.restarts)


def _local(layout: _Layout, x0: np.ndarray, method: str):
    def objective(x):
        w, s = layout.unpack(x)
        return -fingerprint_delta(w, s)

    if layout.size == 0:
        return x0, objective(x0), 0, 1, True, "no free parameters"
    if method == "bfgs":
        res = minimize(objective, x0, method="BFGS", options={"gtol": 1e-9, "maxiter": 5000})
    elif method == "nelder-mead":
        res = minimize(objective, x0, method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 20000 * layout.size,
                                "adaptive": True})
    elif method == "slsqp":
        res = minimize(objective, x0, method="SLSQP", options={"ftol": 1e-13, "maxiter": 2000})
    else:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    return res.x, float(res.fun), int(getattr(res, "nit", 0)), int(res.nfev), bool(res.success), str(res.message)


def optimize_violation(N: int, d: int, symmetric_unitaries: bool = False, symmetric_weights: bool = False,
                       restarts: int = DEFAULT_RESTARTS, seed: int = 0, method: str = "bfgs",
                       workers: int = 1, fixed_states: np.ndarray | None = None) -> OptimizationResult:
    """Best fingerprinting violation found over ``restarts`` local searches.

    Ties between restarts resolve to the lowest restart index, so the result
    is independent of ``workers``.
    """
    if N < 2 or d < 1 or restarts < 1:
        raise ValueError("need N >= 2, d >= 1, restarts >= 1")
    layout = _Layout(N, d, symmetric_unitaries, symmetric_weights,
                     None if fixed_states is None else np.asarray(fixed_states, dtype=np.complex128))

    def run(i):
        rng = np.random.default_rng([seed, i])
        x0 = layout.random_start(rng)
        x, fun, nit, nfev, ok, msg = _local(layout, x0, method)
        return x, RestartRecord(i, [seed, i], nit, nfev, ok, -fun, msg)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run, range(restarts)))
    else:
        outcomes = [run(i) for i in range(restarts)]
    best = max(range(restarts), key=lambda i: (outcomes[i][1].delta, -i))
    x_best = outcomes[best][0]
    weights, states = layout.unpack(x_best)
    strategy = QuantumStrategy(N, d, weights / weights.sum(), states / np.linalg.norm(states, axis=1)[:, None])
    return OptimizationResult(outcomes[best][1].delta, strategy, best, [o[1] for o in outcomes])


@dataclass
class Lemma3Report:
    N: int
    d_low: int
    d_high: int
    delta_low: float
    delta_high: float
    difference: float
    tol: float
    passed: bool


def lemma3_check(N: int, tol: float = 1e-5, restarts: int = 16, seed: int = 0,
                 method: str = "bfgs") -> Lemma3Report:
    """Compare best violations at d = N+1 and d = N+2 under identical budgets."""
    low = optimize_violation(N, N + 1, restarts=restarts, seed=seed, method=method).delta
    high = optimize_violation(N, N + 2, restarts=restarts, seed=seed, method=method).delta
    diff = high - low
    return Lemma3Report(N, N + 1, N + 2, low, high, diff, tol, diff <= tol)


def theorem1_gap(result: OptimizationResult) -> float:
    return result.delta - float(theorem1_delta(result.strategy.n_inputs))
