"""Boolean functions: effective variables, K-junta enumeration and counting, Fourier degree."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .behavior import Behavior
from .kernels import effective_masks, fourier_degrees


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its configured size budget."""


DEFAULT_JUNTA_BUDGET = 4096
DEFAULT_TRUTH_TABLE_N = 4


def junta_budget() -> int:
    return int(os.environ.get("CARRIERLAB_JUNTA_BUDGET", DEFAULT_JUNTA_BUDGET))


@dataclass(frozen=True, eq=False, order=False)
class BooleanFunction:
    n_inputs: int
    truth_table: np.ndarray

    def __post_init__(self):
        table = np.asarray(self.truth_table, dtype=np.uint8).copy()
        if table.shape != (1 << self.n_inputs,):
            raise ValueError(f"truth table must have length {1 << self.n_inputs}")
        if np.any(table > 1):
            raise ValueError("truth table entries must be 0 or 1")
        table.flags.writeable = False
        object.__setattr__(self, "truth_table", table)

    @classmethod
    def from_callable(cls, n_inputs: int, func) -> "BooleanFunction":
        """Build from ``func(bits)`` where ``bits[j]`` is variable ``j``."""
        table = [int(bool(func(tuple((k >> j) & 1 for j in range(n_inputs)))))
                 for k in range(1 << n_inputs)]
        return cls(n_inputs, table)

    @classmethod
    def from_int(cls, n_inputs: int, value: int) -> "BooleanFunction":
        return cls(n_inputs, [(value >> k) & 1 for k in range(1 << n_inputs)])

    def to_int(self) -> int:
        return sum(int(b) << k for k, b in enumerate(self.truth_table))

    def to_hex(self) -> str:
        width = max(1, ((1 << self.n_inputs) + 3) // 4)
        return format(self.to_int(), f"0{width}x")

    @classmethod
    def from_hex(cls, n_inputs: int, text: str) -> "BooleanFunction":
        value = int(text, 16)
        if value >> (1 << n_inputs):
            raise ValueError("hex string has bits beyond the truth table")
        return cls.from_int(n_inputs, value)

    def __call__(self, bits) -> int:
        k = bits if isinstance(bits, (int, np.integer)) else sum(int(b) << j for j, b in enumerate(bits))
        return int(self.truth_table[k])

    def key(self) -> bytes:
        return self.truth_table.tobytes()

    def __eq__(self, other):
        if not isinstance(other, BooleanFunction):
            return NotImplemented
        return self.n_inputs == other.n_inputs and self.key() == other.key()

    def __lt__(self, other):
        return self.key() < other.key()

    def __hash__(self):
        return hash((self.n_inputs, self.key()))

    def __repr__(self):
        return f"BooleanFunction(N={self.n_inputs}, 0x{self.to_hex()})"

    def negate(self) -> "BooleanFunction":
        return BooleanFunction(self.n_inputs, 1 - self.truth_table)

    def as_behavior(self) -> Behavior:
        return Behavior.deterministic(self.n_inputs, self.truth_table)


def effective_variables(f: BooleanFunction) -> frozenset[int]:
    mask = int(effective_masks(f.truth_table[None, :], f.n_inputs)[0])
    return frozenset(j for j in range(f.n_inputs) if mask >> j & 1)


def is_k_junta(f: BooleanFunction, K: int) -> bool:
    return len(effective_variables(f)) <= K


def count_k_juntas(N: int, K: int) -> int:
    """Number of Boolean functions on N inputs with at most K effective variables."""
    if not 0 <= K <= N:
        raise ValueError("need 0 <= K <= N")
    return sum(
        math.comb(N, k) * sum((-1) ** (k - r) * math.comb(k, r) * 2 ** (2 ** r) for r in range(k + 1))
        for k in range(K + 1)
    )


def _lift_tables(N: int, support: tuple[int, ...]) -> np.ndarray:
    """All truth tables on N inputs that only read the variables in ``support``."""
    k = len(support)
    local = np.zeros(1 << N, dtype=np.int64)
    x = np.arange(1 << N)
    for pos, j in enumerate(support):
        local |= ((x >> j) & 1) << pos
    funcs = np.arange(1 << (1 << k), dtype=np.int64)
    small = (funcs[:, None] >> np.arange(1 << k)[None, :]) & 1
    return small[:, local].astype(np.uint8)


def junta_tables(N: int, K: int, budget: int | None = None) -> np.ndarray:
    """Truth tables (rows) of all K-juntas, sorted lexicographically."""
    if not 0 <= K <= N:
        raise ValueError("need 0 <= K <= N")
    budget = junta_budget() if budget is None else budget
    cost = 2 ** (2 ** K) * math.comb(N, K)
    if cost > budget:
        raise BudgetExceeded(f"K-junta enumeration for N={N}, K={K} needs {cost} > budget {budget}")
    blocks = []
    for k in range(K + 1):
        for support in combinations(range(N), k):
            tables = _lift_tables(N, support)
            want = sum(1 << j for j in support)
            blocks.append(tables[effective_masks(tables, N) == want])
    tables = np.unique(np.concatenate(blocks), axis=0)  # dedupe + lexicographic sort
    return tables


def enumerate_k_juntas(N: int, K: int, budget: int | None = None) -> list[BooleanFunction]:
    return [BooleanFunction(N, t) for t in junta_tables(N, K, budget)]


def fourier_degree(f: BooleanFunction) -> int:
    return int(fourier_degrees(f.truth_table[None, :])[0])


@dataclass
class DegreeJuntaReport:
    N: int
    K: int
    junta_bound: int
    n_low_degree: int
    max_effective: int
    bound_holds: bool
    n_not_k_junta: int
    witnesses: list[BooleanFunction] = field(default_factory=list)


def check_degree_junta_bound(N: int, K: int, max_n: int = DEFAULT_TRUTH_TABLE_N,
                             n_witnesses: int = 5) -> DegreeJuntaReport:
    """Scan all functions on N inputs; those of degree <= K must be K*2^(K-1)-juntas."""
    if N > max_n:
        raise BudgetExceeded(f"exhaustive scan over 2^(2^{N}) functions exceeds N <= {max_n}")
    if not 0 <= K <= N:
        raise ValueError("need 0 <= K <= N")
    tables = _lift_tables(N, tuple(range(N)))
    low = tables[fourier_degrees(tables) <= K]
    n_eff = np.bitwise_count(effective_masks(low, N).astype(np.uint64)).astype(int)
    bound = K * 2 ** (K - 1) if K > 0 else 0
    not_junta = low[n_eff > K]
    return DegreeJuntaReport(
        N=N, K=K, junta_bound=bound, n_low_degree=len(low),
        max_effective=int(n_eff.max()) if len(n_eff) else 0,
        bound_holds=bool(np.all(n_eff <= bound)),
        n_not_k_junta=len(not_junta),
        witnesses=[BooleanFunction(N, t) for t in not_junta[:n_witnesses]],
    )
