"""Small numeric helpers used by several modules."""

from __future__ import annotations

import numpy as np


def hilbert_distance(x: np.ndarray, y: np.ndarray) -> float:
    """Hilbert projective distance between two nonnegative vectors.

    Scale invariant: d(cx, y) = d(x, y) for c > 0.  Vectors with different
    supports are infinitely far apart; two all-zero vectors are at distance 0.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    sx = x > 0.0
    sy = y > 0.0
    if not np.array_equal(sx, sy):
        return float("inf")
    if not sx.any():
        return 0.0
    r = np.log(x[sx]) - np.log(y[sy])
    return float(r.max() - r.min())


def sig12(x: float) -> float:
    """Round to 12 significant digits (the fixed output precision)."""
    if not np.isfinite(x):
        return float(x)
    return float(f"{x:.12g}")


def logsumexp(a) -> float:
    """log(sum(exp(a))) without overflow; -inf for an empty or all -inf input."""
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return float("-inf")
    m = a.max()
    if not np.isfinite(m):
        return float(m)
    return float(m + np.log(np.exp(a - m).sum()))
