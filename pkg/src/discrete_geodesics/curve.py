"""Point sequences on the uniform grid t_n = n/N and their linear interpolants."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._validation import check_points_array, check_times
from .metric import MetricField

REFERENCE_QUAD_ORDER = 16
MAX_PANEL = 1.0  # Euclidean length of one quadrature panel


@dataclass(frozen=True, eq=False)
class PointSequence:
    """Discrete curve: ``points[n]`` is the position at ``t_n = n / N``."""

    points: np.ndarray

    def __post_init__(self):
        p = check_points_array(self.points)
        p.setflags(write=False)
        object.__setattr__(self, "points", p)

    @property
    def n_segments(self) -> int:
        return self.points.shape[0] - 1

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_segments + 1) / self.n_segments

    def velocities(self) -> np.ndarray:
        """All finite differences ``N (p_{n+1} - p_n)``, shape ``(N, D)``."""
        return self.n_segments * np.diff(self.points, axis=0)

    def to_dict(self) -> dict:
        return {"n_segments": self.n_segments, "points": self.points.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "PointSequence":
        seq = cls(np.asarray(d["points"], dtype=float))
        if "n_segments" in d and int(d["n_segments"]) != seq.n_segments:
            raise ValueError(
                f"n_segments={d['n_segments']} disagrees with {len(d['points'])} points")
        return seq

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_csv(self, fh=None) -> str | None:
        """Columns ``t, x_1 .. x_D``; writes to ``fh`` or returns the text."""
        buf = fh if fh is not None else io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t"] + [f"x_{i + 1}" for i in range(self.dim)])
        for t, p in zip(self.times, self.points):
            w.writerow([f"{t:.17g}"] + [f"{v:.17g}" for v in p])
        return None if fh is not None else buf.getvalue()

    @classmethod
    def chord(cls, a, b, n: int) -> "PointSequence":
        a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
        s = np.arange(n + 1)[:, None] / n
        return cls((1.0 - s) * a + s * b)


def finite_difference(seq: PointSequence, n: int) -> np.ndarray:
    """beta(t_n) = (p_{n+1} - p_n) / h."""
    if not 0 <= n < seq.n_segments:
        raise IndexError(f"segment index {n} out of range [0, {seq.n_segments})")
    return seq.n_segments * (seq.points[n + 1] - seq.points[n])


def discrete_l2_speed(seq: PointSequence) -> float:
    """K3 = sqrt(mean ||beta_n||^2), the L2 norm of the interpolant's velocity."""
    return float(np.sqrt(np.mean(np.sum(seq.velocities() ** 2, axis=1))))


@dataclass(frozen=True, eq=False)
class LinearInterpolant:
    base: PointSequence

    def __call__(self, t):
        return evaluate_interpolant(self, t)


def evaluate_interpolant(c: LinearInterpolant, t) -> np.ndarray:
    """Piecewise-affine evaluation; grid times return the stored point exactly."""
    t = check_times(t)
    pts = c.base.points
    n_seg = c.base.n_segments
    u = np.atleast_1d(t) * n_seg
    nearest = np.rint(u)
    snap = np.abs(u - nearest) <= 8 * np.finfo(float).eps * np.maximum(1.0, u)
    idx = np.clip(np.floor(u).astype(int), 0, n_seg - 1)
    w = (u - idx)[:, None]
    out = (1.0 - w) * pts[idx] + w * pts[idx + 1]
    out[snap] = pts[nearest[snap].astype(int)]
    return out[0] if np.ndim(t) == 0 else out.reshape(np.shape(t) + (pts.shape[1],))


@lru_cache(maxsize=32)
def _gauss_legendre(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return (x + 1.0) / 2.0, w / 2.0


def _segment_integrand(m: MetricField, c: LinearInterpolant, quad_order: int):
    """Integrand values and weights on composite panels.

    Each segment is split into ceil(length / MAX_PANEL) equal panels so that
    long segments stay at quadrature roundoff; weights include the 1/k factor.
    """
    if quad_order < 2:
        raise ValueError(f"quad_order must be >= 2, got {quad_order}")
    s, w = _gauss_legendre(int(quad_order))
    pts = c.base.points
    beta = c.base.velocities()  # (N, D)
    diff = np.diff(pts, axis=0)
    k = np.maximum(1, np.ceil(np.linalg.norm(diff, axis=1) / MAX_PANEL)).astype(int)
    seg = np.repeat(np.arange(len(k)), k)
    j = np.arange(seg.size) - np.repeat(np.cumsum(k) - k, k)
    kk = k[seg][:, None]
    frac = (j[:, None] + s[None, :]) / kk  # (panels, q)
    pos = pts[seg][:, None, :] + frac[..., None] * diff[seg][:, None, :]
    h = m.matrix(pos)  # (panels, q, D, D)
    b = beta[seg]
    q = np.einsum("nd,nqde,ne->nq", b, h, b)
    return q, w[None, :] / kk


def continuous_energy(m: MetricField, c: LinearInterpolant,
                      quad_order: int = REFERENCE_QUAD_ORDER) -> float:
    """E(gamma^pl) by per-segment Gauss-Legendre quadrature."""
    q, w = _segment_integrand(m, c, quad_order)
    return float(np.sum(q * w) / c.base.n_segments)


def continuous_length(m: MetricField, c: LinearInterpolant,
                      quad_order: int = REFERENCE_QUAD_ORDER) -> float:
    """L(gamma^pl) by per-segment Gauss-Legendre quadrature."""
    q, w = _segment_integrand(m, c, quad_order)
    return float(np.sum(np.sqrt(np.maximum(q, 0.0)) * w) / c.base.n_segments)


def refine(seq: PointSequence) -> PointSequence:
    """Double N by inserting segment midpoints (same interpolant)."""
    p = seq.points
    out = np.empty((2 * seq.n_segments + 1, seq.dim))
    out[0::2] = p
    out[1::2] = 0.5 * (p[:-1] + p[1:])
    return PointSequence(out)


def resample(seq: PointSequence, n: int) -> PointSequence:
    """Sample the interpolant on the uniform grid with ``n`` segments."""
    return PointSequence(evaluate_interpolant(LinearInterpolant(seq), np.arange(n + 1) / n))
