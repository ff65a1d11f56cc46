"""Riemannian metrics on R^D represented as fields of SPD matrices.

A metric is stored as a callable ``x -> H(x)`` that accepts a batch of points
with shape ``(..., D)`` and returns matrices with shape ``(..., D, D)``.  The
optional derivative callable returns the full Jacobian ``dH[..., l, i, j] =
d H_ij / d x_l``; when it is missing, central finite differences are used.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ._validation import check_axis, check_point, check_vector

ArrayFn = Callable[[np.ndarray], np.ndarray]

_FD_EPS = np.finfo(float).eps ** (1.0 / 3.0)


def _vectorize(fn: ArrayFn, dim: int, tail: tuple) -> ArrayFn:
    """Lift a single-point callback to the batched ``(..., D)`` convention."""

    def batched(x):
        x = np.asarray(x, dtype=float)
        flat = x.reshape(-1, dim)
        out = np.stack([np.asarray(fn(p), dtype=float) for p in flat])
        return out.reshape(x.shape[:-1] + tail)

    return batched


@dataclass(frozen=True)
class MetricField:
    """Metric ``g_x(u, v) = u^T H(x) v`` with declared bound metadata.

    ``c1``/``c2`` are the declared eigenvalue bounds and ``l_h`` the declared
    Lipschitz constant of ``H`` in operator norm.  They are hypotheses, not
    estimates; use :func:`validate_bounds` to spot-check them.
    """

    dim: int
    h_eval: ArrayFn
    c1: float
    c2: float
    l_h: float
    dh_eval: Optional[ArrayFn] = None
    name: str = "custom"
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if int(self.dim) < 1:
            raise ValueError(f"dim must be a positive integer, got {self.dim}")
        if not (self.c1 > 0 and self.c2 >= self.c1):
            raise ValueError(f"need 0 < c1 <= c2, got c1={self.c1}, c2={self.c2}")
        if self.l_h < 0:
            raise ValueError(f"l_h must be nonnegative, got {self.l_h}")

    def matrix(self, x) -> np.ndarray:
        """H at a point or a batch of points."""
        return np.asarray(self.h_eval(np.asarray(x, dtype=float)), dtype=float)

    def jacobian(self, x) -> np.ndarray:
        """All first derivatives, indexed ``[..., l, i, j]``."""
        x = np.asarray(x, dtype=float)
        if self.dh_eval is not None:
            return np.asarray(self.dh_eval(x), dtype=float)
        return fd_jacobian(self, x)

    @property
    def has_analytic_derivative(self) -> bool:
        return self.dh_eval is not None


def fd_jacobian(m: MetricField, x: np.ndarray) -> np.ndarray:
    """Central-difference Jacobian of H, step ``max(1, |x|_inf) * eps^(1/3)``."""
    x = np.asarray(x, dtype=float)
    d = m.dim
    scale = np.maximum(1.0, np.abs(x).max(axis=-1, keepdims=True))
    step = scale * _FD_EPS
    out = np.empty(x.shape[:-1] + (d, d, d))
    for ell in range(d):
        e = np.zeros(d)
        e[ell] = 1.0
        hp = m.matrix(x + step * e)
        hm = m.matrix(x - step * e)
        out[..., ell, :, :] = (hp - hm) / (2.0 * step[..., None])
    return out


def quadratic_form(m: MetricField, x, u) -> float:
    """Return ``u^T H(x) u``."""
    x = check_point(x, m.dim, "x")
    u = check_vector(u, m.dim, "u")
    return float(u @ m.matrix(x) @ u)


def metric_derivative(m: MetricField, x, ell: int) -> np.ndarray:
    """``dH/dx_ell`` at ``x`` (analytic when available)."""
    x = check_point(x, m.dim, "x")
    ell = check_axis(ell, m.dim)
    return m.jacobian(x)[ell]


def christoffel_batch(m: MetricField, x: np.ndarray) -> np.ndarray:
    """Christoffel symbols ``G[..., k, i, j]`` for a batch of points.

    Gamma^k_ij = 1/2 sum_l g^{kl} (d_i g_lj + d_j g_il - d_l g_ij).
    """
    x = np.asarray(x, dtype=float)
    dh = m.jacobian(x)
    d = m.dim
    # dh[..., a, b, c] = d_a g_bc
    d_i_glj = np.swapaxes(dh, -3, -2)  # [l, i, j] = d_i g_lj
    d_j_gil = np.swapaxes(dh, -3, -1)  # [l, i, j] = d_j g_il
    bracket = (d_i_glj + d_j_gil - dh).reshape(dh.shape[:-3] + (d, d * d))
    gamma = np.linalg.solve(m.matrix(x), 0.5 * bracket)
    return gamma.reshape(dh.shape)


def christoffel(m: MetricField, x) -> np.ndarray:
    """Christoffel tensor at a single point, shape ``(D, D, D)`` indexed [k, i, j]."""
    x = check_point(x, m.dim, "x")
    gamma = christoffel_batch(m, x)
    if not np.all(np.isfinite(gamma)):
        raise FloatingPointError(f"non-finite Christoffel symbols at x={x}")
    return gamma


def christoffel_bound(m: MetricField) -> float:
    """Entrywise bound 3 L_H sqrt(D) / (2 c1) on the Christoffel symbols."""
    return 3.0 * m.l_h * np.sqrt(m.dim) / (2.0 * m.c1)


# ---------------------------------------------------------------------------
# built-in metrics


def euclidean(dim: int = 2) -> MetricField:
    eye = np.eye(dim)

    def h(x):
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(eye, x.shape[:-1] + (dim, dim)).copy()

    def dh(x):
        x = np.asarray(x, dtype=float)
        return np.zeros(x.shape[:-1] + (dim, dim, dim))

    return MetricField(dim=dim, h_eval=h, dh_eval=dh, c1=1.0, c2=1.0, l_h=0.0,
                       name="euclidean", params={"dim": dim})


def conformal_cos() -> MetricField:
    """``f^2 * I`` on R^2 with ``f(x) = 2 - cos(x_1)``.

    f ranges over [1, 3] and |f'| <= 1, so c1 = 1, c2 = 9; the declared
    l_h = 12 is 2 * sup|f f'| = 6 doubled for safety.
    """
    eye = np.eye(2)

    def h(x):
        x = np.asarray(x, dtype=float)
        f = 2.0 - np.cos(x[..., 0])
        return (f * f)[..., None, None] * eye

    def dh(x):
        x = np.asarray(x, dtype=float)
        f = 2.0 - np.cos(x[..., 0])
        out = np.zeros(x.shape[:-1] + (2, 2, 2))
        out[..., 0, :, :] = (2.0 * f * np.sin(x[..., 0]))[..., None, None] * eye
        return out

    return MetricField(dim=2, h_eval=h, dh_eval=dh, c1=1.0, c2=9.0, l_h=12.0,
                       name="conformal_cos", params={})


def conformal(phi: ArrayFn, dim: int, c1: float, c2: float, l_h: float,
              grad_phi: Optional[ArrayFn] = None, name: str = "conformal_phi",
              params: Optional[dict] = None) -> MetricField:
    """``exp(2 phi(x)) * I``; ``phi`` maps ``(..., D) -> (...)``."""
    eye = np.eye(dim)

    def h(x):
        x = np.asarray(x, dtype=float)
        w = np.exp(2.0 * np.asarray(phi(x), dtype=float))
        return w[..., None, None] * eye

    dh = None
    if grad_phi is not None:
        def dh(x):
            x = np.asarray(x, dtype=float)
            w = np.exp(2.0 * np.asarray(phi(x), dtype=float))
            gp = np.asarray(grad_phi(x), dtype=float)  # (..., D)
            return (2.0 * w[..., None] * gp)[..., None, None] * eye

    return MetricField(dim=dim, h_eval=h, dh_eval=dh, c1=c1, c2=c2, l_h=l_h,
                       name=name, params=dict(params or {}))


def default_conformal_phi() -> MetricField:
    """``exp(sin(x_1) cos(x_2)) * I`` on R^2, the stock smooth non-Euclidean test metric.

    phi = sin(x1) cos(x2) / 2 lies in [-1/2, 1/2] and |grad phi| <= 1/2, giving
    c1 = e^-1, c2 = e and |grad exp(2 phi)| <= e; declared l_h = 3.
    """

    def phi(x):
        return 0.5 * np.sin(x[..., 0]) * np.cos(x[..., 1])

    def grad_phi(x):
        return 0.5 * np.stack([np.cos(x[..., 0]) * np.cos(x[..., 1]),
                               -np.sin(x[..., 0]) * np.sin(x[..., 1])], axis=-1)

    return conformal(phi, 2, c1=np.exp(-1.0), c2=np.exp(1.0), l_h=3.0,
                     grad_phi=grad_phi, params={"phi": "sin(x1)*cos(x2)/2"})


def from_callable(h: ArrayFn, dim: int, c1: float, c2: float, l_h: float,
                  dh: Optional[ArrayFn] = None, vectorized: bool = False,
                  name: str = "custom") -> MetricField:
    """Wrap a user SPD field.  Non-vectorized callbacks take one point at a time;
    a non-vectorized ``dh`` must return the ``(D, D, D)`` Jacobian [l, i, j]."""
    if not vectorized:
        h = _vectorize(h, dim, (dim, dim))
        if dh is not None:
            dh = _vectorize(dh, dim, (dim, dim, dim))
    return MetricField(dim=dim, h_eval=h, dh_eval=dh, c1=c1, c2=c2, l_h=l_h, name=name)


# ---------------------------------------------------------------------------


@dataclass
class BoundsCheck:
    symmetry_error: float
    min_eigenvalue: float
    max_eigenvalue: float
    max_lipschitz_ratio: float
    max_derivative_entry: float
    ok: bool


def validate_bounds(m: MetricField, n_samples: int = 500, radius: float = 10.0,
                    seed: int = 0, rtol: float = 1e-9) -> BoundsCheck:
    """Spot-check the declared c1, c2, l_h and symmetry by random sampling."""
    rng = np.random.default_rng(seed)
    x = rng.uniform(-radius, radius, size=(n_samples, m.dim))
    y = x + rng.normal(scale=0.5, size=x.shape)
    hx, hy = m.matrix(x), m.matrix(y)
    sym = float(np.max(np.abs(hx - np.swapaxes(hx, -1, -2))))
    eig = np.linalg.eigvalsh(hx)
    op = np.linalg.norm(hx - hy, ord=2, axis=(-2, -1))
    ratio = float(np.max(op / np.linalg.norm(x - y, axis=-1)))
    dmax = float(np.max(np.abs(m.jacobian(x))))
    scale = max(1.0, float(np.max(np.abs(hx))))
    ok = (
        sym <= 1e-12 * scale
        and eig.min() >= m.c1 * (1 - rtol)
        and eig.max() <= m.c2 * (1 + rtol)
        and ratio <= m.l_h * (1 + rtol) + 1e-12
    )
    return BoundsCheck(sym, float(eig.min()), float(eig.max()), ratio, dmax, bool(ok))
