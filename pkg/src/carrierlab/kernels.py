"""Hot numeric kernels.

Every kernel exists twice: an explicit-loop version (``*_loop``) that is
compiled with numba when it is available, and a vectorised numpy version
(``*_numpy``). The public names dispatch to the loop version when numba is
active and to the numpy version otherwise (``CARRIERLAB_DISABLE_NUMBA=1``).
The numpy versions also serve object arrays of ``Fraction``.
"""
from itertools import combinations

import numpy as np

from ._accel import HAS_NUMBA, njit

# ---------------------------------------------------------------------------
# popcount
# ---------------------------------------------------------------------------


@njit
def _popcount64(x):
    x = np.uint64(x)
    c = 0
    while x:
        x &= x - np.uint64(1)
        c += 1
    return c


def popcount_array(values):
    values = np.asarray(values, dtype=np.uint64)
    return np.bitwise_count(values).astype(np.int64)


# ---------------------------------------------------------------------------
# Walsh-Hadamard transform (unnormalised, Sylvester order)
# ---------------------------------------------------------------------------


def _fwht_loop(a):
    out = a.copy()
    n = out.shape[-1]
    rows = out.reshape(-1, n)
    for r in range(rows.shape[0]):
        h = 1
        while h < n:
            for i in range(0, n, 2 * h):
                for j in range(i, i + h):
                    x = rows[r, j]
                    y = rows[r, j + h]
                    rows[r, j] = x + y
                    rows[r, j + h] = x - y
            h *= 2
    return out


def _fwht_numpy(a):
    a = np.array(a, copy=True)
    lead = a.shape[:-1]
    n = a.shape[-1]
    m = n.bit_length() - 1
    if m == 0:
        return a
    t = a.reshape(lead + (2,) * m)
    for ax in range(len(lead), len(lead) + m):
        lo = np.take(t, 0, axis=ax)
        hi = np.take(t, 1, axis=ax)
        t = np.stack((lo + hi, lo - hi), axis=ax)
    return t.reshape(lead + (n,))


_fwht_jit = njit(_fwht_loop)


def fwht(values):
    """Unnormalised Walsh-Hadamard transform along the last axis.

    ``out[..., j] = sum_k (-1)**popcount(j & k) * values[..., k]``.
    """
    a = np.asarray(values)
    n = a.shape[-1]
    if n & (n - 1):
        raise ValueError(f"length {n} is not a power of two")
    if HAS_NUMBA and a.dtype in (np.float64, np.int64) and a.ndim in (1, 2):
        return _fwht_jit(np.ascontiguousarray(a))
    return _fwht_numpy(a)


# ---------------------------------------------------------------------------
# Truth-table analysis
# ---------------------------------------------------------------------------


def _effective_masks_loop(tables, n_vars):
    count, size = tables.shape
    out = np.zeros(count, dtype=np.int64)
    for f in range(count):
        mask = 0
        for j in range(n_vars):
            bit = 1 << j
            for k in range(size):
                if (k & bit) == 0 and tables[f, k] != tables[f, k | bit]:
                    mask |= bit
                    break
        out[f] = mask
    return out


def _effective_masks_numpy(tables, n_vars):
    tables = np.asarray(tables)
    idx = np.arange(tables.shape[1])
    out = np.zeros(tables.shape[0], dtype=np.int64)
    for j in range(n_vars):
        flipped = tables[:, idx ^ (1 << j)]
        out |= np.any(tables != flipped, axis=1).astype(np.int64) << j
    return out


def _degrees_loop(tables):
    spectra = _fwht_jit(tables.astype(np.int64))
    count, size = spectra.shape
    out = np.zeros(count, dtype=np.int64)
    for f in range(count):
        best = 0
        for j in range(size):
            if spectra[f, j] != 0:
                w = _popcount64(j)
                if w > best:
                    best = w
        out[f] = best
    return out


def _degrees_numpy(tables):
    spectra = _fwht_numpy(np.asarray(tables, dtype=np.int64))
    weights = popcount_array(np.arange(spectra.shape[1]))
    return np.where(spectra != 0, weights[None, :], 0).max(axis=1)


_effective_masks_jit = njit(_effective_masks_loop)
_degrees_jit = njit(_degrees_loop)


def effective_masks(tables, n_vars):
    """Bitmask of the variables each truth table (one per row) depends on."""
    tables = np.ascontiguousarray(np.atleast_2d(tables), dtype=np.uint8)
    if HAS_NUMBA:
        return _effective_masks_jit(tables, n_vars)
    return _effective_masks_numpy(tables, n_vars)


def fourier_degrees(tables):
    """Fourier degree of each 0/1 truth table (one per row)."""
    tables = np.ascontiguousarray(np.atleast_2d(tables), dtype=np.int64)
    if HAS_NUMBA:
        return _degrees_jit(tables)
    return _degrees_numpy(tables)


# ---------------------------------------------------------------------------
# Vertices of a 3-variable box-constrained polytope  lo <= rows @ z <= hi
# ---------------------------------------------------------------------------


def _plane_vertices_loop(rows, lo, hi):
    m = rows.shape[0]
    planes = 2 * m
    cap = planes * (planes - 1) * (planes - 2) // 6
    out = np.zeros((cap, 7), dtype=np.int64)
    count = 0
    for p in range(planes):
        for q in range(p + 1, planes):
            if p // 2 == q // 2:
                continue
            for r in range(q + 1, planes):
                if q // 2 == r // 2:
                    continue
                i, j, k = p // 2, q // 2, r // 2
                bi = lo[i] if p % 2 == 0 else hi[i]
                bj = lo[j] if q % 2 == 0 else hi[j]
                bk = lo[k] if r % 2 == 0 else hi[k]
                a0, a1, a2 = rows[i, 0], rows[i, 1], rows[i, 2]
                b0, b1, b2 = rows[j, 0], rows[j, 1], rows[j, 2]
                c0, c1, c2 = rows[k, 0], rows[k, 1], rows[k, 2]
                det = a0 * (b1 * c2 - b2 * c1) - a1 * (b0 * c2 - b2 * c0) + a2 * (b0 * c1 - b1 * c0)
                if det == 0:
                    continue
                n0 = bi * (b1 * c2 - b2 * c1) - a1 * (bj * c2 - b2 * bk) + a2 * (bj * c1 - b1 * bk)
                n1 = a0 * (bj * c2 - b2 * bk) - bi * (b0 * c2 - b2 * c0) + a2 * (b0 * bk - bj * c0)
                n2 = a0 * (b1 * bk - bj * c1) - a1 * (b0 * bk - bj * c0) + bi * (b0 * c1 - b1 * c0)
                if det < 0:
                    det, n0, n1, n2 = -det, -n0, -n1, -n2
                ok = True
                for h in range(m):
                    v = rows[h, 0] * n0 + rows[h, 1] * n1 + rows[h, 2] * n2
                    if v < lo[h] * det or v > hi[h] * det:
                        ok = False
                        break
                if ok:
                    out[count, 0] = n0
                    out[count, 1] = n1
                    out[count, 2] = n2
                    out[count, 3] = det
                    out[count, 4] = p
                    out[count, 5] = q
                    out[count, 6] = r
                    count += 1
    return out[:count]


def _plane_vertices_numpy(rows, lo, hi):
    m = rows.shape[0]
    planes = np.arange(2 * m)
    triples = np.array([t for t in combinations(planes, 3)
                        if t[0] // 2 != t[1] // 2 and t[1] // 2 != t[2] // 2], dtype=np.int64)
    if triples.size == 0:
        return np.zeros((0, 7), dtype=np.int64)
    row_idx = triples // 2
    bounds = np.where(triples % 2 == 0, lo[row_idx], hi[row_idx])
    mats = rows[row_idx]  # (T, 3, 3)
    det = (mats[:, 0, 0] * (mats[:, 1, 1] * mats[:, 2, 2] - mats[:, 1, 2] * mats[:, 2, 1])
           - mats[:, 0, 1] * (mats[:, 1, 0] * mats[:, 2, 2] - mats[:, 1, 2] * mats[:, 2, 0])
           + mats[:, 0, 2] * (mats[:, 1, 0] * mats[:, 2, 1] - mats[:, 1, 1] * mats[:, 2, 0]))
    keep = det != 0
    mats, bounds, det, triples = mats[keep], bounds[keep], det[keep], triples[keep]
    nums = []
    for col in range(3):
        sub = mats.copy()
        sub[:, :, col] = bounds
        nums.append(sub[:, 0, 0] * (sub[:, 1, 1] * sub[:, 2, 2] - sub[:, 1, 2] * sub[:, 2, 1])
                    - sub[:, 0, 1] * (sub[:, 1, 0] * sub[:, 2, 2] - sub[:, 1, 2] * sub[:, 2, 0])
                    + sub[:, 0, 2] * (sub[:, 1, 0] * sub[:, 2, 1] - sub[:, 1, 1] * sub[:, 2, 0]))
    nums = np.stack(nums, axis=1)
    sign = np.where(det < 0, -1, 1)
    nums *= sign[:, None]
    det = det * sign
    vals = nums @ rows.T  # (T, m)
    ok = np.all((vals >= lo[None, :] * det[:, None]) & (vals <= hi[None, :] * det[:, None]), axis=1)
    return np.column_stack([nums[ok], det[ok], triples[ok]]).astype(np.int64)


_plane_vertices_jit = njit(_plane_vertices_loop)


def plane_vertices(rows, lo, hi):
    """Vertices of ``{z in R^3 : lo <= rows @ z <= hi}`` in integer form.

    Returns an ``(V, 7)`` int64 array ``[n0, n1, n2, den, p, q, r]``: the
    vertex ``(n0, n1, n2) / den`` (``den > 0``) and the three plane indices
    (plane ``2h`` is ``row h = lo[h]``, plane ``2h + 1`` is ``row h = hi[h]``)
    that produced it. A vertex on more than three planes appears once per
    triple. Entries must stay small enough for int64 products (|a| < 2**14).
    """
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    lo = np.ascontiguousarray(lo, dtype=np.int64)
    hi = np.ascontiguousarray(hi, dtype=np.int64)
    if max(np.abs(rows).max(), np.abs(lo).max(), np.abs(hi).max()) >= 2 ** 14:
        raise OverflowError("coefficients too large for the int64 vertex kernel")
    if HAS_NUMBA:
        return _plane_vertices_jit(rows, lo, hi)
    return _plane_vertices_numpy(rows, lo, hi)


# ---------------------------------------------------------------------------
# Double-description adjacency test on zero-set bitmasks
# ---------------------------------------------------------------------------


def _adjacent_pairs_loop(zero_sets, plus, minus, min_common):
    out = np.zeros((plus.shape[0] * minus.shape[0], 2), dtype=np.int64)
    count = 0
    for a in range(plus.shape[0]):
        p = plus[a]
        zp = zero_sets[p]
        for b in range(minus.shape[0]):
            q = minus[b]
            common = zp & zero_sets[q]
            if _popcount64(common) < min_common:
                continue
            adjacent = True
            for r in range(zero_sets.shape[0]):
                if r != p and r != q and (zero_sets[r] & common) == common:
                    adjacent = False
                    break
            if adjacent:
                out[count, 0] = p
                out[count, 1] = q
                count += 1
    return out[:count]


def _adjacent_pairs_numpy(zero_sets, plus, minus, min_common):
    pairs = []
    for p in plus:
        common = zero_sets[p] & zero_sets[minus]
        cand = popcount_array(common) >= min_common
        if not cand.any():
            continue
        qs = minus[cand]
        common = common[cand]
        contains = (zero_sets[None, :] & common[:, None]) == common[:, None]
        ok = contains.sum(axis=1) == 2
        pairs.extend((int(p), int(q)) for q in qs[ok])
    return np.array(pairs, dtype=np.int64).reshape(-1, 2)


_adjacent_pairs_jit = njit(_adjacent_pairs_loop)


def adjacent_pairs(zero_sets, plus, minus, min_common):
    """Pairs (p, q), p in ``plus``, q in ``minus``, that span a 2-face of the cone.

    ``zero_sets[r]`` is the bitmask of constraints ray ``r`` saturates. A pair
    is adjacent when its common zero set has at least ``min_common`` members
    and no third ray saturates all of them.
    """
    zero_sets = np.ascontiguousarray(zero_sets, dtype=np.uint64)
    plus = np.ascontiguousarray(plus, dtype=np.int64)
    minus = np.ascontiguousarray(minus, dtype=np.int64)
    if plus.size == 0 or minus.size == 0:
        return np.zeros((0, 2), dtype=np.int64)
    if HAS_NUMBA:
        return _adjacent_pairs_jit(zero_sets, plus, minus, min_common)
    return _adjacent_pairs_numpy(zero_sets, plus, minus, min_common)
