"""Batch scans of best fingerprinting violations over N and strategy families.

One CSV row per ``(N, mode)``. Numeric modes run the restart optimizer;
``theorem1`` and ``theorem2`` rows come from closed forms (``theorem2`` at
N <= 3, where its closed form does not apply, is solved by the exact LP).
"""
from __future__ import annotations

import csv
import io
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .exact import format_fraction
from .interference_lp import solve_second_order_lp, theorem2_delta
from .optimize import optimize_violation
from .quantum import theorem1_delta

BASE_MODES = ("d1-sym", "d1-asym", "d2-sym", "d2-free", "theorem1", "theorem2")
COLUMNS = ("N", "mode", "delta", "delta_exact", "source", "seed", "restarts")
N_LIMITS = (2, 20)

# mode -> (d, shared encoding, uniform weights)
NUMERIC_MODES = {
    "d1-sym": (1, False, True),
    "d1-asym": (1, False, False),
    "d2-sym": (2, True, True),
    "d2-free": (2, False, False),
}


def numeric_mode(mode: str):
    if mode in NUMERIC_MODES:
        return NUMERIC_MODES[mode]
    if mode.startswith("d") and mode.endswith("-free") and mode[1:-5].isdigit():
        return int(mode[1:-5]), False, False
    return None


@dataclass(frozen=True)
class ScanConfig:
    n_range: tuple[int, int] = (4, 6)
    d_list: tuple[int, ...] = ()
    modes: tuple[str, ...] = BASE_MODES
    restarts: int = 16
    seed: int = 0
    output_path: str = "scan.csv"
    workers: int = 1

    def __post_init__(self):
        lo, hi = self.n_range
        if not (N_LIMITS[0] <= lo <= hi <= N_LIMITS[1]):
            raise ValueError(f"n_range must lie within {list(N_LIMITS)} and be ordered, got {[lo, hi]}")
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if any(d < 1 for d in self.d_list):
            raise ValueError("internal dimensions must be positive")
        for m in self.modes:
            if m not in ("theorem1", "theorem2") and numeric_mode(m) is None:
                raise ValueError(f"unknown mode {m!r}")

    @property
    def all_modes(self) -> tuple[str, ...]:
        extra = tuple(f"d{d}-free" for d in self.d_list if f"d{d}-free" not in self.modes)
        return tuple(self.modes) + extra

    @classmethod
    def from_toml(cls, text: str, **overrides) -> "ScanConfig":
        data = tomllib.loads(text)
        data = data.get("scan", data)
        kwargs = {}
        if "n_range" in data:
            kwargs["n_range"] = tuple(int(v) for v in data["n_range"])
        if "d_list" in data:
            kwargs["d_list"] = tuple(int(v) for v in data["d_list"])
        if "modes" in data:
            kwargs["modes"] = tuple(str(v) for v in data["modes"])
        for key in ("restarts", "seed", "workers"):
            if key in data:
                kwargs[key] = int(data[key])
        if "output_path" in data:
            kwargs["output_path"] = str(data["output_path"])
        unknown = set(data) - {"n_range", "d_list", "modes", "restarts", "seed", "workers", "output_path"}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        kwargs.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kwargs)


@dataclass
class ScanRow:
    N: int
    mode: str
    delta: float
    delta_exact: Fraction | None
    source: str
    seed: int | str = ""
    restarts: int | str = ""

    def as_csv(self) -> list[str]:
        exact = "" if self.delta_exact is None else format_fraction(self.delta_exact)
        return [str(self.N), self.mode, f"{self.delta:.15g}", exact, self.source, str(self.seed), str(self.restarts)]


def scan_row(N: int, mode: str, restarts: int, seed: int) -> ScanRow:
    if mode == "theorem1":
        val = theorem1_delta(N)
        return ScanRow(N, mode, float(val), val, "closed-form")
    if mode == "theorem2":
        if N > 3:
            val = theorem2_delta(N)
            return ScanRow(N, mode, float(val), val, "closed-form")
        val = solve_second_order_lp(N).delta
        return ScanRow(N, mode, float(val), val, "lp")
    d, sym_u, sym_p = numeric_mode(mode)
    res = optimize_violation(N, d, symmetric_unitaries=sym_u, symmetric_weights=sym_p,
                             restarts=restarts, seed=seed)
    return ScanRow(N, mode, res.delta, None, "numeric", seed, restarts)


def run_scan(cfg: ScanConfig) -> list[ScanRow]:
    """Rows ordered by N, then by mode as listed in the config."""
    jobs = [(N, m) for N in range(cfg.n_range[0], cfg.n_range[1] + 1) for m in cfg.all_modes]

    def work(job):
        return scan_row(job[0], job[1], cfg.restarts, cfg.seed)

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            return list(pool.map(work, jobs))
    return [work(j) for j in jobs]


def rows_to_csv(rows: list[ScanRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for r in rows:
        writer.writerow(r.as_csv())
    return buf.getvalue()


# (lower, upper, equal): lower <= upper, or lower == upper when equal
ORDER_RELATIONS = (
    ("d1-sym", "d1-asym", False),
    ("d1-asym", "d2-sym", False),
    ("d1-asym", "d2-free", False),
    ("d2-sym", "theorem1", True),
    ("theorem1", "theorem2", False),
    ("d2-free", "theorem2", False),
)


def ordering_violations(rows: list[ScanRow], tol: float = 1e-6) -> list[str]:
    """Per N, check d1-sym <= d1-asym <= d2 = theorem1 <= theorem2 for the modes present."""
    by_n: dict[int, dict[str, float]] = {}
    for r in rows:
        by_n.setdefault(r.N, {})[r.mode] = r.delta
    problems = []
    for N, vals in sorted(by_n.items()):
        for a, b, equal in ORDER_RELATIONS:
            if a not in vals or b not in vals:
                continue
            if equal and abs(vals[a] - vals[b]) > tol:
                problems.append(f"N={N}: {a}={vals[a]:.9g} != {b}={vals[b]:.9g}")
            elif not equal and vals[a] > vals[b] + tol:
                problems.append(f"N={N}: {a}={vals[a]:.9g} > {b}={vals[b]:.9g}")
    return problems


def with_overrides(cfg: ScanConfig, **overrides) -> ScanConfig:
    return replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
