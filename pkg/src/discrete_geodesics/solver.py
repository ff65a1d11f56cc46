"""Minimization of the discrete objectives over point sequences.

Point-to-point problems freeze both endpoints and run L-BFGS with Armijo
backtracking over the interior points.  When an endpoint ranges over a set,
all points are optimized by projected gradient with Barzilai-Borwein steps and
an Armijo safeguard; endpoints are projected back after every step.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from .curve import LinearInterpolant, PointSequence, continuous_energy, continuous_length, resample
from .objectives import DiscreteObjective, NondifferentiableError
from .sets import EndpointSet, Point, as_endpoint_set, check_instance

logger = logging.getLogger(__name__)


class SolverError(RuntimeError):
    """Objective or gradient became non-finite during a solve."""


@dataclass
class SolveConfig:
    max_iters: int = 5000
    grad_tol: float = 1e-8
    memory: int = 10
    c_armijo: float = 1e-4
    backtrack: float = 0.5
    max_backtracks: int = 40
    seed: int = 0
    multistart: bool = False
    n_restarts: int = 4
    length_step: float = 1e-3

    def __post_init__(self):
        if self.max_iters < 1 or self.memory < 1:
            raise ValueError("max_iters and memory must be >= 1")
        if not (self.grad_tol > 0 and self.c_armijo > 0 and 0 < self.backtrack < 1):
            raise ValueError("tolerances must be positive and backtrack in (0, 1)")


@dataclass
class SolveReport:
    minimizer: PointSequence
    objective_value: float
    continuous_energy: float
    continuous_length: float
    iterations: int
    converged: bool
    trace: list = field(default_factory=list)
    rule: str = "trapezoidal"
    functional: str = "energy"
    grad_norm: float = float("nan")
    message: str = ""

    @property
    def n_segments(self) -> int:
        return self.minimizer.n_segments

    def to_dict(self) -> dict:
        d = asdict(self)
        d["minimizer"] = self.minimizer.to_dict()
        d["n_segments"] = self.n_segments
        return d


def _nearest_pair(x0: EndpointSet, x1: EndpointSet, rounds: int = 5):
    if x0.bounded:
        a = x0.center()
        b = x1.project(a) if not x1.bounded else x1.center()
    else:
        b = x1.center()
        a = x0.project(b)
    for _ in range(rounds):
        a = x0.project(b)
        b = x1.project(a)
    return a, b


def initial_guess(x0, x1, n: int) -> PointSequence:
    """Uniform chord between representative endpoints of the two sets."""
    x0, x1 = as_endpoint_set(x0), as_endpoint_set(x1)
    check_instance(x0, x1)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    a, b = _nearest_pair(x0, x1)
    return PointSequence.chord(a, b, n)


def _finite(value, grad):
    if not np.isfinite(value) or not np.all(np.isfinite(grad)):
        raise SolverError("objective or gradient is not finite")


def _lbfgs_direction(g, s_hist, y_hist):
    q = g.copy()
    alphas = []
    for s, y in zip(reversed(s_hist), reversed(y_hist)):
        rho = 1.0 / (y @ s)
        a = rho * (s @ q)
        alphas.append((rho, a))
        q -= a * y
    if s_hist:
        s, y = s_hist[-1], y_hist[-1]
        q *= (s @ y) / (y @ y)
    else:
        q /= max(1.0, np.abs(g).max())
    for (s, y), (rho, a) in zip(zip(s_hist, y_hist), reversed(alphas)):
        b = rho * (y @ q)
        q += (a - b) * s
    return -q


def _run_lbfgs(obj, pts, free, cfg, tol):
    shape = pts[free].shape
    full = pts.copy()

    def fg(z):
        full[free] = z.reshape(shape)
        v, g = obj.value_and_gradient(full)
        g = g[free].ravel()
        _finite(v, g)
        return v, g

    x = pts[free].ravel().copy()
    f, g = fg(x)
    trace = [f]
    s_hist: deque = deque(maxlen=cfg.memory)
    y_hist: deque = deque(maxlen=cfg.memory)
    it, message, converged = 0, "", False
    gnorm = float(np.abs(g).max()) if g.size else 0.0
    while True:
        if gnorm < tol:
            converged, message = True, "gradient tolerance met"
            break
        if it >= cfg.max_iters:
            message = "maximum iterations reached"
            break
        d = _lbfgs_direction(g, list(s_hist), list(y_hist))
        slope = g @ d
        if slope >= 0:
            s_hist.clear(), y_hist.clear()
            d = -g / max(1.0, np.abs(g).max())
            slope = g @ d
        step, accepted = 1.0, False
        for _ in range(cfg.max_backtracks):
            xn = x + step * d
            fn, gn = fg(xn)
            if fn <= f + cfg.c_armijo * step * slope:
                accepted = True
                break
            step *= cfg.backtrack
        if not accepted:
            if s_hist:
                s_hist.clear(), y_hist.clear()
                continue
            message = "line search failed"
            break
        s, y = xn - x, gn - g
        if s @ y > 1e-12 * np.linalg.norm(s) * np.linalg.norm(y):
            s_hist.append(s)
            y_hist.append(y)
        x, f, g = xn, fn, gn
        gnorm = float(np.abs(g).max())
        trace.append(f)
        it += 1
    full[free] = x.reshape(shape)
    return full, f, it, converged, trace, gnorm, message


def _run_projected(obj, pts, x0, x1, cfg, tol, bb=True):
    def project(p):
        p = p.copy()
        p[0] = x0.project(p[0])
        p[-1] = x1.project(p[-1])
        return p

    x = project(pts)
    f, g = obj.value_and_gradient(x)
    _finite(f, g)
    trace = [f]
    alpha = 1.0 / max(1.0, np.abs(g).max()) if bb else cfg.length_step
    it, converged, message = 0, False, ""

    def pg_norm(x, g):
        return float(np.abs(x - project(x - g)).max())

    gnorm = pg_norm(x, g)
    while True:
        if gnorm < tol:
            converged, message = True, "gradient tolerance met"
            break
        if it >= cfg.max_iters:
            message = "maximum iterations reached"
            break
        step, accepted = alpha, False
        for _ in range(cfg.max_backtracks):
            xn = project(x - step * g)
            try:
                fn, gn = obj.value_and_gradient(xn)
            except NondifferentiableError:
                step *= cfg.backtrack
                continue
            _finite(fn, gn)
            if fn <= f + cfg.c_armijo * np.sum(g * (xn - x)) and fn <= f:
                accepted = True
                break
            step *= cfg.backtrack
        if not accepted:
            message = "line search failed"
            break
        s, y = (xn - x).ravel(), (gn - g).ravel()
        if bb:
            sy = s @ y
            alpha = (s @ s) / sy if sy > 0 else min(1e6, 2.0 * step)
        x, f, g = xn, fn, gn
        gnorm = pg_norm(x, g)
        trace.append(f)
        it += 1
    return x, f, it, converged, trace, gnorm, message


def _solve_from(obj, start, x0, x1, cfg) -> SolveReport:
    pts = np.array(start.points, dtype=float)
    v0 = obj.value(pts)
    tol = cfg.grad_tol * max(1.0, v0)
    both_points = isinstance(x0, Point) and isinstance(x1, Point)
    if both_points:
        pts[0], pts[-1] = x0.p, x1.p
    if obj.is_energy and both_points:
        free = np.zeros(pts.shape[0], dtype=bool)
        free[1:-1] = True
        x, f, it, conv, trace, gnorm, msg = _run_lbfgs(obj, pts, free, cfg, tol)
    else:
        x, f, it, conv, trace, gnorm, msg = _run_projected(obj, pts, x0, x1, cfg, tol, bb=obj.is_energy)
    seq = PointSequence(x)
    interp = LinearInterpolant(seq)
    logger.debug("solve N=%d %s/%s: %s after %d iterations, value %.17g",
                 seq.n_segments, obj.rule.value, obj.functional.value, msg, it, f)
    return SolveReport(
        minimizer=seq,
        objective_value=float(f),
        continuous_energy=continuous_energy(obj.metric, interp),
        continuous_length=continuous_length(obj.metric, interp),
        iterations=it,
        converged=conv,
        trace=[float(v) for v in trace],
        rule=obj.rule.value,
        functional=obj.functional.value,
        grad_norm=gnorm,
        message=msg,
    )


def minimize(obj: DiscreteObjective, x0, x1, n: int, cfg: Optional[SolveConfig] = None,
             start: Optional[PointSequence] = None) -> SolveReport:
    """Stationary point of ``obj`` over N-segment sequences with p_0 in x0, p_N in x1."""
    cfg = cfg or SolveConfig()
    x0, x1 = as_endpoint_set(x0), as_endpoint_set(x1)
    check_instance(x0, x1)
    if x0.dim != obj.metric.dim:
        raise ValueError(f"endpoint dimension {x0.dim} does not match metric dimension {obj.metric.dim}")
    if start is None:
        start = initial_guess(x0, x1, n)
    elif start.n_segments != n:
        start = resample(start, n)
    report = _solve_from(obj, start, x0, x1, cfg)
    if cfg.multistart:
        rng = np.random.default_rng(cfg.seed)
        chord = np.linalg.norm(start.points[-1] - start.points[0])
        for _ in range(cfg.n_restarts):
            pts = np.array(start.points)
            pts[1:-1] += rng.normal(scale=1e-2 * max(chord, 1e-12), size=pts[1:-1].shape)
            cand = _solve_from(obj, PointSequence(pts), x0, x1, cfg)
            if cand.objective_value < report.objective_value:
                report = cand
    return report


def solve_ladder(obj: DiscreteObjective, x0, x1, n_list: Sequence[int],
                 cfg: Optional[SolveConfig] = None) -> list:
    """Solve for each N in turn, warm-starting from the previous minimizer."""
    n_list = [int(n) for n in n_list]
    if any(b <= a or b % a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("n_list must be strictly increasing with each entry dividing the next")
    reports, prev = [], None
    for n in n_list:
        start = None if prev is None else resample(prev.minimizer, n)
        prev = minimize(obj, x0, x1, n, cfg, start=start)
        reports.append(prev)
    return reports
