"""Reference geodesics from the geodesic ODE, used to cross-check energy minimization.

The second-order system ``x'' = -Gamma(x)[x', x']`` is integrated with classic
RK4 on ``t in [0, 1]``; the two-point problem is solved by shooting on the
initial velocity with damped Newton and a finite-difference Jacobian.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson
from scipy.spatial.distance import directed_hausdorff

from ._validation import check_point
from .curve import LinearInterpolant, PointSequence, evaluate_interpolant
from .metric import MetricField, christoffel_batch


class OracleFailure(RuntimeError):
    """Shooting did not converge."""


@dataclass(frozen=True)
class GeodesicState:
    position: np.ndarray
    velocity: np.ndarray


@dataclass(frozen=True)
class GeodesicTrajectory:
    positions: np.ndarray   # (steps+1, D)
    velocities: np.ndarray  # (steps+1, D)

    @property
    def steps(self) -> int:
        return self.positions.shape[0] - 1

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.steps + 1)

    def __len__(self):
        return self.positions.shape[0]

    def __getitem__(self, i) -> GeodesicState:
        return GeodesicState(self.positions[i], self.velocities[i])

    @property
    def final(self) -> GeodesicState:
        return self[-1]


def _accel(m, x, v):
    gamma = christoffel_batch(m, x)
    gv = np.matmul(gamma, v[..., None, :, None])[..., 0]  # [..., k, i]
    return -np.matmul(gv, v[..., :, None])[..., 0]


def _rk4(m, x, v, steps):
    """Batched RK4; x, v have shape (..., D).  Returns full trajectories."""
    dt = 1.0 / steps
    xs = np.empty((steps + 1,) + x.shape)
    vs = np.empty_like(xs)
    xs[0], vs[0] = x, v
    for k in range(steps):
        a1 = _accel(m, x, v)
        x2, v2 = x + 0.5 * dt * v, v + 0.5 * dt * a1
        a2 = _accel(m, x2, v2)
        x3, v3 = x + 0.5 * dt * v2, v + 0.5 * dt * a2
        a3 = _accel(m, x3, v3)
        x4, v4 = x + dt * v3, v + dt * a3
        a4 = _accel(m, x4, v4)
        x = x + dt / 6.0 * (v + 2 * v2 + 2 * v3 + v4)
        v = v + dt / 6.0 * (a1 + 2 * a2 + 2 * a3 + a4)
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(v))):
            raise FloatingPointError(f"non-finite geodesic state at step {k + 1}")
        xs[k + 1], vs[k + 1] = x, v
    return xs, vs


def integrate_geodesic(m: MetricField, init: GeodesicState, steps: int) -> GeodesicTrajectory:
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    x = check_point(init.position, m.dim, "position")
    v = check_point(init.velocity, m.dim, "velocity")
    xs, vs = _rk4(m, x, v, int(steps))
    return GeodesicTrajectory(xs, vs)


def shoot(m: MetricField, x0, x1, steps: int = 1024, tol: float = 1e-10,
          max_newton: int = 100) -> GeodesicState:
    """Initial state at x0 whose geodesic reaches x1 at t = 1 (within ``tol``)."""
    x0 = check_point(x0, m.dim, "x0")
    x1 = check_point(x1, m.dim, "x1")
    if np.array_equal(x0, x1):
        raise ValueError("shooting needs distinct endpoints")
    d = m.dim
    scale = max(1.0, float(np.abs(x1 - x0).max()))
    v = x1 - x0

    def residual_batch(vb):
        xs, _ = _rk4(m, np.broadcast_to(x0, vb.shape).copy(), vb, steps)
        return xs[-1] - x1

    def probe(v):
        # residual at v plus forward-difference Jacobian columns in one batch
        h = 1e-7 * max(1.0, np.linalg.norm(v))
        res = residual_batch(v + np.vstack([np.zeros(d), h * np.eye(d)]))
        return res[0], ((res[1:] - res[0]) / h).T

    r, jac = probe(v)
    for _ in range(max_newton):
        rn = np.linalg.norm(r)
        if rn <= tol * scale:
            return GeodesicState(x0.copy(), v)
        try:
            dv = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError as exc:
            raise OracleFailure(f"singular shooting Jacobian: {exc}") from exc
        lam = 1.0
        for _ in range(30):
            cand = v + lam * dv
            rc, jc = probe(cand)
            if np.linalg.norm(rc) < rn:
                break
            lam *= 0.5
        else:
            raise OracleFailure("damped Newton could not reduce the endpoint residual")
        v, r, jac = cand, rc, jc
    raise OracleFailure(f"shooting did not converge in {max_newton} Newton iterations "
                        f"(residual {np.linalg.norm(r):.3e})")


def speed_squared(m: MetricField, traj: GeodesicTrajectory) -> np.ndarray:
    h = m.matrix(traj.positions)
    return np.einsum("ni,nij,nj->n", traj.velocities, h, traj.velocities)


def trajectory_length(m: MetricField, traj: GeodesicTrajectory) -> float:
    """Length by Simpson's rule on the sampled speed."""
    return float(simpson(np.sqrt(speed_squared(m, traj)), x=traj.times))


def trajectory_energy(m: MetricField, traj: GeodesicTrajectory) -> float:
    return float(simpson(speed_squared(m, traj), x=traj.times))


def sample_sequence(traj: GeodesicTrajectory, n: int) -> PointSequence:
    """Trajectory positions at t_k = k/n (``steps`` must be a multiple of ``n``)."""
    if traj.steps % n:
        raise ValueError(f"{traj.steps} integration steps is not a multiple of N={n}")
    return PointSequence(traj.positions[:: traj.steps // n])


def hausdorff_distance(traj: GeodesicTrajectory, seq: PointSequence, samples: int = 2049) -> float:
    """Symmetric Hausdorff distance between the trajectory and a sequence's interpolant."""
    pts = evaluate_interpolant(LinearInterpolant(seq), np.linspace(0.0, 1.0, samples))
    return max(directed_hausdorff(traj.positions, pts)[0],
               directed_hausdorff(pts, traj.positions)[0])
