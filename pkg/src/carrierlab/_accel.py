"""Selection between numba-compiled kernels and the pure-numpy fallback.

Set ``CARRIERLAB_DISABLE_NUMBA=1`` before import to force the numpy path.
"""
import os

_FLAG = os.environ.get("CARRIERLAB_DISABLE_NUMBA", "").strip().lower()
DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    if DISABLED:
        raise ImportError
    from numba import njit as _njit

    HAS_NUMBA = True
except ImportError:
    _njit = None
    HAS_NUMBA = False


def njit(func):
    """Compile ``func`` with numba when available; return it untouched otherwise."""
    if HAS_NUMBA:
        return _njit(cache=True)(func)
    return func


def backend():
    return "numba" if HAS_NUMBA else "numpy"
