"""Numba switch.

Set ``GREENSEQ_DISABLE_NUMBA=1`` to run every kernel through its pure-numpy
fallback. The flag is read once, at import time.
"""

from __future__ import annotations

import os

_FALSY = {"", "0", "false", "no", "off"}

DISABLED = os.environ.get("GREENSEQ_DISABLE_NUMBA", "").strip().lower() not in _FALSY

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and not DISABLED


def njit(func):
    """``numba.njit(cache=True)`` when acceleration is on, identity otherwise."""
    if USE_NUMBA:
        return numba.njit(cache=True)(func)
    return func


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
