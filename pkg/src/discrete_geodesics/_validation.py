"""Input validation helpers shared across the package."""

from __future__ import annotations

import numbers

import numpy as np


def check_point(x, dim: int, name: str = "x") -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (dim,):
        raise ValueError(f"{name} must have shape ({dim},), got {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} contains non-finite values")
    return x


check_vector = check_point


def check_axis(ell, dim: int) -> int:
    if not isinstance(ell, numbers.Integral) or not 0 <= ell < dim:
        raise ValueError(f"axis index must be an integer in [0, {dim}), got {ell!r}")
    return int(ell)


def check_points_array(points, dim: int | None = None) -> np.ndarray:
    """A ``(N+1, D)`` array of finite points with N >= 1."""
    p = np.array(points, dtype=float)
    if p.ndim != 2 or p.shape[0] < 2:
        raise ValueError(f"points must be a 2-D array with at least 2 rows, got shape {p.shape}")
    if dim is not None and p.shape[1] != dim:
        raise ValueError(f"points have dimension {p.shape[1]}, expected {dim}")
    if not np.all(np.isfinite(p)):
        raise ValueError("points contain NaN or Inf")
    return p


def check_n_segments(n) -> int:
    if not isinstance(n, numbers.Integral) or n < 1:
        raise ValueError(f"number of segments must be a positive integer, got {n!r}")
    return int(n)


def check_times(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(t)) or np.any(t < 0.0) or np.any(t > 1.0):
        raise ValueError("times must lie in [0, 1]")
    return t
