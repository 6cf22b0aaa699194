"""Random test matrices for the benchmark protocol."""

from __future__ import annotations

import numpy as np
from scipy.linalg import toeplitz


def toeplitz_diagonals(n: int, seed: int) -> np.ndarray:
    """The 2n-1 diagonal values, ordered from the bottom-left corner
    (offset -(n-1)) to the top-right corner (offset n-1)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return np.random.default_rng(seed).standard_normal(2 * n - 1)


def gen_toeplitz(n: int, seed: int) -> np.ndarray:
    """Toeplitz matrix whose diagonals are iid standard normal."""
    d = toeplitz_diagonals(n, seed)
    # entry (i, j) sits on offset j - i, i.e. d[(j - i) + n - 1]
    return toeplitz(d[n - 1 :: -1], d[n - 1 :])


def gen_sparse(n: int, p: float, seed: int, max_resample: int = 1000):
    """Matrix with iid Bernoulli(p) pattern and standard normal values on it.

    Returns ``(A, pattern)`` with ``pattern`` a sorted list of 0-based (i, j).
    A draw with an empty pattern is rejected and redrawn from the sub-seed
    (seed, k) for k = 1, 2, ...
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]")
    for k in range(max_resample):
        rng = np.random.default_rng(seed if k == 0 else [seed, k])
        mask = rng.random((n, n)) < p
        if mask.any():
            break
    else:  # pragma: no cover - probability (1 - p)^(n^2 max_resample)
        raise RuntimeError("could not draw a nonempty pattern")
    A = np.zeros((n, n))
    A[mask] = rng.standard_normal(int(mask.sum()))
    rows, cols = np.nonzero(mask)
    pattern = list(zip(rows.tolist(), cols.tolist()))
    return A, pattern
