"""scikit-learn style wrapper around the discrete energy solver."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_n_segments, check_times
from .curve import LinearInterpolant, evaluate_interpolant
from .metric import MetricField, euclidean
from .objectives import DiscreteObjective
from .sets import as_endpoint_set
from .solver import SolveConfig, minimize


class DiscreteGeodesic(BaseEstimator):
    """Approximate minimal geodesic between two points or closed convex sets.

    ``fit(X0, X1)`` minimizes the discrete energy (or length) over point
    sequences with ``n_segments`` segments; ``predict(t)`` evaluates the
    piecewise-linear curve through the minimizer at times in [0, 1].

    Parameters
    ----------
    metric : MetricField, default=None
        Riemannian metric; Euclidean in the endpoints' dimension when None.
    n_segments : int, default=64
    rule : {"trapezoidal", "left"}, default="trapezoidal"
    functional : {"energy", "length"}, default="energy"
    max_iters, grad_tol, memory, seed, multistart
        Forwarded to :class:`SolveConfig`.

    Attributes
    ----------
    points_ : ndarray of shape (n_segments + 1, n_features)
    energy_, length_ : float
        Continuous energy and length of the interpolated minimizer.
    objective_ : float
        Discrete objective at the minimizer.
    report_ : SolveReport
    """

    def __init__(self, metric: MetricField | None = None, n_segments: int = 64,
                 rule: str = "trapezoidal", functional: str = "energy",
                 max_iters: int = 5000, grad_tol: float = 1e-8, memory: int = 10,
                 seed: int = 0, multistart: bool = False):
        self.metric = metric
        self.n_segments = n_segments
        self.rule = rule
        self.functional = functional
        self.max_iters = max_iters
        self.grad_tol = grad_tol
        self.memory = memory
        self.seed = seed
        self.multistart = multistart

    def fit(self, X0, X1, warm_start=None):
        x0, x1 = as_endpoint_set(X0), as_endpoint_set(X1)
        n = check_n_segments(self.n_segments)
        metric = self.metric if self.metric is not None else euclidean(x0.dim)
        cfg = SolveConfig(max_iters=self.max_iters, grad_tol=self.grad_tol, memory=self.memory,
                          seed=self.seed, multistart=self.multistart)
        obj = DiscreteObjective(metric, self.rule, self.functional)
        report = minimize(obj, x0, x1, n, cfg, start=warm_start)
        self.report_ = report
        self.sequence_ = report.minimizer
        self.points_ = np.array(report.minimizer.points)
        self.objective_ = report.objective_value
        self.energy_ = report.continuous_energy
        self.length_ = report.continuous_length
        self.converged_ = report.converged
        self.n_features_in_ = x0.dim
        return self

    def predict(self, t):
        """Curve positions at times ``t`` (scalar or array), shape ``t.shape + (D,)``."""
        check_is_fitted(self, "points_")
        return evaluate_interpolant(LinearInterpolant(self.sequence_), check_times(t))

    def score(self, X0=None, X1=None):
        """Negative length of the fitted curve (higher is better)."""
        check_is_fitted(self, "points_")
        return -self.length_
