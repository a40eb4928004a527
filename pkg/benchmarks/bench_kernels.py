"""Numba vs pure-numpy timings for the hot kernels.

The backend is fixed at import time, so each one runs in its own
subprocess (``CARRIERLAB_DISABLE_NUMBA`` set or unset). The first call of
every kernel is timed separately: under numba it includes compilation.

    python benchmarks/bench_kernels.py [--repeat 5] [--json out.json]
"""
import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def make_cases(seed=0):
    from carrierlab.interference_lp import lp_constraints
    from carrierlab import kernels

    rng = np.random.default_rng(seed)
    signal = rng.normal(size=(64, 1 << 14))
    tables = rng.integers(0, 2, size=(20000, 16), dtype=np.uint8)
    cons = lp_constraints(40)
    rows = np.array([c.coefficients for c in cons], dtype=np.int64)
    lo, hi = np.zeros(len(cons), dtype=np.int64), np.ones(len(cons), dtype=np.int64)
    zero_sets = rng.integers(0, 2**40, size=1500, dtype=np.uint64) | rng.integers(0, 2**40, size=1500, dtype=np.uint64)
    plus, minus = np.arange(0, 700), np.arange(700, 1500)
    return {
        "fwht 64 x 2^14": lambda: kernels.fwht(signal),
        "effective_masks 20000 x 16": lambda: kernels.effective_masks(tables, 4),
        "fourier_degrees 20000 x 16": lambda: kernels.fourier_degrees(tables),
        "plane_vertices N=40 LP": lambda: kernels.plane_vertices(rows, lo, hi),
        "adjacent_pairs 700 x 800": lambda: kernels.adjacent_pairs(zero_sets, plus, minus, 28),
    }


def worker(repeat):
    from carrierlab import backend

    out = {"backend": backend(), "kernels": {}}
    for name, fn in make_cases().items():
        t0 = time.perf_counter()
        fn()
        first = time.perf_counter() - t0
        times = []
        for _ in range(repeat):
            t0 = time.perf_counter()
            fn()
            times.append(time.perf_counter() - t0)
        out["kernels"][name] = {"first": first, "best": min(times), "median": float(np.median(times))}
    json.dump(out, sys.stdout)


def run_backend(disable, repeat):
    env = dict(os.environ)
    env.pop("CARRIERLAB_DISABLE_NUMBA", None)
    if disable:
        env["CARRIERLAB_DISABLE_NUMBA"] = "1"
    res = subprocess.run([sys.executable, __file__, "--worker", "--repeat", str(repeat)],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", help="also write raw timings here")
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.worker:
        worker(args.repeat)
        return
    fast, slow = run_backend(False, args.repeat), run_backend(True, args.repeat)
    print(f"{'kernel':30s} {fast['backend'] + ' best':>12s} {'numpy best':>12s} {'speedup':>8s} {'first call':>11s}")
    for name, t in fast["kernels"].items():
        s = slow["kernels"][name]
        print(f"{name:30s} {t['best'] * 1e3:10.2f}ms {s['best'] * 1e3:10.2f}ms "
              f"{s['best'] / t['best']:7.1f}x {t['first']:10.2f}s")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"accelerated": fast, "numpy": slow}, fh, indent=2)


if __name__ == "__main__":
    main()
