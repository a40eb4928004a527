"""Behaviors P(a|x), their Walsh-Hadamard spectra and interference-order tests.

Index convention: the input ``x = (x_0, ..., x_{N-1})`` is stored at the
integer ``k = sum_j x_j << j``; variable ``j`` is bit ``j`` (0-based). The
Hadamard transform is Sylvester-ordered, so spectrum mask bit ``j`` pairs
with variable ``j``.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .kernels import fwht, popcount_array

DEFAULT_TOL = 1e-9
FLOAT_NORM_TOL = 1e-12


def index_of(bits: Sequence[int]) -> int:
    """Integer index of the input whose j-th bit is ``bits[j]``."""
    return sum(int(b) << j for j, b in enumerate(bits))


def bits_of(k: int, n: int) -> tuple[int, ...]:
    return tuple((k >> j) & 1 for j in range(n))


def hamming_weight(k: int) -> int:
    return bin(k).count("1")


def _to_fraction(v) -> Fraction:
    if isinstance(v, str):
        return Fraction(v.strip())
    if isinstance(v, float):
        raise TypeError("float in exact behavior")
    return Fraction(v)


def _is_exact_value(v) -> bool:
    return isinstance(v, (Fraction, int, np.integer)) or isinstance(v, str)


@dataclass(frozen=True, eq=False)
class Behavior:
    """Binary-output behavior stored through ``p1[k] = P(1 | [k])``.

    ``p1`` is a read-only float64 array (float flavour) or an object array of
    ``Fraction`` (exact flavour). ``P(0|x)`` is derived by normalisation.
    """

    n_inputs: int
    p1: np.ndarray

    def __post_init__(self):
        n = int(self.n_inputs)
        if n < 1:
            raise ValueError("n_inputs must be positive")
        values = self.p1
        if isinstance(values, np.ndarray) and values.dtype == object or (
            not isinstance(values, np.ndarray) and all(_is_exact_value(v) for v in values)
        ):
            arr = np.array([_to_fraction(v) for v in values], dtype=object)
            bad = [v for v in arr if v < 0 or v > 1]
        else:
            arr = np.array(values, dtype=np.float64)
            bad = arr[(arr < -FLOAT_NORM_TOL) | (arr > 1 + FLOAT_NORM_TOL) | ~np.isfinite(arr)]
            arr = np.clip(arr, 0.0, 1.0)
        if arr.shape != (1 << n,):
            raise ValueError(f"expected {1 << n} entries for N={n}, got {arr.shape}")
        if len(bad):
            raise ValueError(f"probabilities outside [0, 1]: {list(bad)[:4]}")
        arr.flags.writeable = False
        object.__setattr__(self, "n_inputs", n)
        object.__setattr__(self, "p1", arr)

    @classmethod
    def deterministic(cls, n_inputs: int, table: Iterable[int]) -> "Behavior":
        return cls(n_inputs, np.array([Fraction(int(t)) for t in table], dtype=object))

    @classmethod
    def constant(cls, n_inputs: int, value) -> "Behavior":
        return cls(n_inputs, [value] * (1 << n_inputs))

    @property
    def exact(self) -> bool:
        return self.p1.dtype == object

    @property
    def p0(self) -> np.ndarray:
        return 1 - self.p1

    def prob(self, a: int, x) -> float | Fraction:
        k = x if isinstance(x, (int, np.integer)) else index_of(x)
        return self.p1[k] if a == 1 else 1 - self.p1[k]

    def as_float(self) -> "Behavior":
        return self if not self.exact else Behavior(self.n_inputs, self.p1.astype(np.float64))

    def key(self) -> tuple:
        return tuple(self.p1.tolist())

    def __eq__(self, other):
        if not isinstance(other, Behavior):
            return NotImplemented
        return self.n_inputs == other.n_inputs and self.key() == other.key()

    def __hash__(self):
        return hash((self.n_inputs, self.key()))

    def __repr__(self):
        vals = ", ".join(str(v) for v in self.p1[:8])
        more = ", ..." if len(self.p1) > 8 else ""
        return f"Behavior(N={self.n_inputs}, p1=[{vals}{more}])"

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        if self.exact:
            p1 = [str(v) for v in self.p1]
        else:
            p1 = [float(v) for v in self.p1]
        return {"n_inputs": self.n_inputs, "p1": p1}

    @classmethod
    def from_dict(cls, data: dict) -> "Behavior":
        try:
            n = int(data["n_inputs"])
            p1 = list(data["p1"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed behavior document: {exc}") from exc
        if any(isinstance(v, str) for v in p1):
            return cls(n, np.array([_to_fraction(v) for v in p1], dtype=object))
        return cls(n, np.array(p1, dtype=np.float64))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "Behavior":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["index", "bits", "p0", "p1"])
        for k, v in enumerate(self.p1):
            bits = "".join(str(b) for b in bits_of(k, self.n_inputs))
            writer.writerow([k, bits, str(1 - v), str(v)])
        return buf.getvalue()


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Walsh-Hadamard spectrum of ``P'``.

    ``raw[j] = sum_k (-1)**popcount(j & k) P(1|[k])`` is kept exactly when
    the behavior is exact; ``coefficients`` applies the ``2**(-N/2)``
    normalisation in floating point.
    """

    n_inputs: int
    raw: np.ndarray

    @property
    def coefficients(self) -> np.ndarray:
        return self.raw.astype(np.float64) * 2.0 ** (-self.n_inputs / 2)

    def inverse(self) -> np.ndarray:
        """Recover ``P'``; exact for exact spectra."""
        back = fwht(self.raw)
        if self.raw.dtype == object:
            return np.array([Fraction(v, 1 << self.n_inputs) for v in back], dtype=object)
        return back / (1 << self.n_inputs)


def hadamard_spectrum(b: Behavior) -> Spectrum:
    return Spectrum(b.n_inputs, fwht(b.p1))


def mask_weights(n: int) -> np.ndarray:
    return popcount_array(np.arange(1 << n))


def sorkin_sum(b: Behavior, subset: Iterable[int]):
    """Alternating sum of P(0|x) over the 2^M settings of ``subset`` (other bits 0)."""
    idx = sorted(set(int(j) for j in subset))
    if not idx:
        raise ValueError("subset must be nonempty")
    if idx[0] < 0 or idx[-1] >= b.n_inputs:
        raise ValueError(f"indices must lie in [0, {b.n_inputs})")
    total = 0
    for setting in product((0, 1), repeat=len(idx)):
        k = sum(bit << j for bit, j in zip(setting, idx))
        sign = -1 if sum(setting) % 2 else 1
        total = total + sign * (1 - b.p1[k])
    return total


def interference_order(b: Behavior, tol: float = DEFAULT_TOL) -> int:
    """Smallest K with every spectrum coefficient of mask weight > K within ``tol``.

    For exact behaviors ``tol=0`` tests exact vanishing of the spectrum.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    spec = hadamard_spectrum(b)
    weights = mask_weights(b.n_inputs)
    if b.exact and tol == 0:
        nonzero = np.array([v != 0 for v in spec.raw])
    else:
        nonzero = np.abs(spec.coefficients) > tol
    return int(weights[nonzero].max()) if nonzero.any() else 0


def is_member_J(b: Behavior, K: int, tol: float = DEFAULT_TOL) -> bool:
    return interference_order(b, tol) <= K


def sorkin_order(b: Behavior, tol: float = DEFAULT_TOL) -> int:
    """Interference order read off the Sorkin sums directly (all subsets).

    Independent of the Hadamard route; exponential in N, meant for N <= 8.
    """
    n = b.n_inputs
    order = 0
    for mask in range(1, 1 << n):
        subset = [j for j in range(n) if mask >> j & 1]
        val = sorkin_sum(b, subset)
        if (val != 0) if (b.exact and tol == 0) else (abs(float(val)) > tol):
            order = max(order, len(subset))
    return order


def random_behavior(n: int, rng: np.random.Generator, max_order: int | None = None,
                    scale: float = 1.0) -> Behavior:
    """Random float behavior; with ``max_order`` its spectrum vanishes above that weight."""
    if max_order is None:
        return Behavior(n, rng.random(1 << n))
    weights = mask_weights(n)
    coeffs = rng.normal(size=1 << n) * (weights <= max_order)
    coeffs[0] = 0.0
    shape = fwht(coeffs)
    peak = np.abs(shape).max()
    if peak > 0:
        shape = shape / peak * 0.5 * scale
    return Behavior(n, 0.5 + shape)


def normalized_hadamard(n: int) -> np.ndarray:
    """Dense ``2^N x 2^N`` normalised Hadamard matrix (for small-N oracles)."""
    k = np.arange(1 << n)
    signs = popcount_array(k[:, None] & k[None, :]) % 2
    return (1 - 2 * signs) / math.sqrt(1 << n)
