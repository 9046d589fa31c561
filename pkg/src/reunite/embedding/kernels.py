"""Batch distance kernels: numba-jitted hot path with a pure-numpy fallback.

Selection is controlled by the REUNITE_KERNEL environment variable:
"numba" forces the jitted kernel, "numpy" forces the fallback, and
"auto" (the default) uses numba when it imports cleanly.
"""
from __future__ import annotations

import math
import os

import numpy as np

KERNEL_ENV = "REUNITE_KERNEL"


def distances_numpy(query: np.ndarray, candidates: np.ndarray) -> np.ndarray:
    """Euclidean distance from `query` to each row of `candidates`."""
    diff = candidates - query
    return np.sqrt(np.einsum("ij,ij->i", diff, diff))


try:
    from numba import njit

    @njit(cache=True)
    def distances_numba(query, candidates):  # pragma: no cover - jitted
        n, d = candidates.shape
        out = np.empty(n)
        for i in range(n):
            acc = 0.0
            for j in range(d):
                t = candidates[i, j] - query[j]
                acc += t * t
            out[i] = math.sqrt(acc)
        return out

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    distances_numba = None
    _HAVE_NUMBA = False


def active_kernel() -> str:
    """Resolve the kernel choice, honoring REUNITE_KERNEL at call time."""
    choice = os.environ.get(KERNEL_ENV, "auto").lower()
    if choice == "numpy":
        return "numpy"
    if choice == "numba":
        if not _HAVE_NUMBA:
            raise RuntimeError("REUNITE_KERNEL=numba but numba is unavailable")
        return "numba"
    return "numba" if _HAVE_NUMBA else "numpy"


def batch_distances(query: np.ndarray, candidates: np.ndarray) -> np.ndarray:
    """Distance from one query vector to a (n, d) candidate matrix."""
    query = np.ascontiguousarray(query, dtype=np.float64)
    candidates = np.ascontiguousarray(candidates, dtype=np.float64)
    if active_kernel() == "numba":
        return distances_numba(query, candidates)
    return distances_numpy(query, candidates)
