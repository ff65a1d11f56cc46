"""Discrete energies and lengths of point sequences, with analytic gradients.

Both quadrature rules use the forward difference ``beta_n = N (p_{n+1} - p_n)``
as velocity.  The "trapezoidal" rule evaluates the metric at the segment
midpoint ``(p_n + p_{n+1}) / 2``; the "left" rule evaluates it at ``p_n``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .curve import PointSequence
from .metric import MetricField


class Rule(str, enum.Enum):
    TRAPEZOIDAL = "trapezoidal"
    LEFT = "left"


class Functional(str, enum.Enum):
    ENERGY = "energy"
    LENGTH = "length"


class NondifferentiableError(ValueError):
    """A length objective was differentiated at a zero-velocity segment."""


EPS_VEL = 1e-12


def _as_points(seq) -> np.ndarray:
    return seq.points if isinstance(seq, PointSequence) else np.asarray(seq, dtype=float)


def _segment_terms(m: MetricField, p: np.ndarray, rule: Rule):
    n_seg = p.shape[0] - 1
    beta = n_seg * np.diff(p, axis=0)
    where = 0.5 * (p[:-1] + p[1:]) if rule is Rule.TRAPEZOIDAL else p[:-1]
    h = m.matrix(where)
    hb = np.einsum("nij,nj->ni", h, beta)
    q = np.einsum("ni,ni->n", beta, hb)
    return beta, where, hb, q


def segment_speeds_squared(m: MetricField, seq, rule: Rule | str = Rule.TRAPEZOIDAL) -> np.ndarray:
    """Per-segment ``g(beta_n, beta_n)`` with the metric placed per ``rule``."""
    return _segment_terms(m, _as_points(seq), Rule(rule))[3]


def energy_trapezoidal(m: MetricField, seq) -> float:
    q = _segment_terms(m, _as_points(seq), Rule.TRAPEZOIDAL)[3]
    return float(np.sum(q) / q.shape[0])


def energy_left(m: MetricField, seq) -> float:
    q = _segment_terms(m, _as_points(seq), Rule.LEFT)[3]
    return float(np.sum(q) / q.shape[0])


def length_trapezoidal(m: MetricField, seq) -> float:
    q = _segment_terms(m, _as_points(seq), Rule.TRAPEZOIDAL)[3]
    return float(np.sum(np.sqrt(np.maximum(q, 0.0))) / q.shape[0])


def length_left(m: MetricField, seq) -> float:
    q = _segment_terms(m, _as_points(seq), Rule.LEFT)[3]
    return float(np.sum(np.sqrt(np.maximum(q, 0.0))) / q.shape[0])


@dataclass(frozen=True)
class DiscreteObjective:
    """One of the four discrete functionals for a fixed metric."""

    metric: MetricField
    rule: Rule = Rule.TRAPEZOIDAL
    functional: Functional = Functional.ENERGY

    def __post_init__(self):
        object.__setattr__(self, "rule", Rule(self.rule))
        object.__setattr__(self, "functional", Functional(self.functional))

    @property
    def is_energy(self) -> bool:
        return self.functional is Functional.ENERGY

    def value(self, seq) -> float:
        q = _segment_terms(self.metric, _as_points(seq), self.rule)[3]
        if not self.is_energy:
            q = np.sqrt(np.maximum(q, 0.0))
        return float(np.sum(q) / q.shape[0])

    def value_and_gradient(self, seq):
        p = _as_points(seq)
        n_seg = p.shape[0] - 1
        beta, where, hb, q = _segment_terms(self.metric, p, self.rule)
        dh = self.metric.jacobian(where)  # (N, l, i, j)
        dq_dx = np.einsum("ni,nlij,nj->nl", beta, dh, beta)

        # derivative of q_n with respect to p_{n+1} and p_n
        d_next = 2.0 * n_seg * hb
        d_this = -2.0 * n_seg * hb
        if self.rule is Rule.TRAPEZOIDAL:
            d_next = d_next + 0.5 * dq_dx
            d_this = d_this + 0.5 * dq_dx
        else:
            d_this = d_this + dq_dx

        if self.is_energy:
            weight = np.full(n_seg, 1.0 / n_seg)
            val = np.sum(q) / n_seg
        else:
            speed2 = np.sum(beta * beta, axis=1)
            guard = EPS_VEL * max(1.0, float(np.abs(p).max()))
            bad = np.flatnonzero(np.sqrt(speed2) <= guard)
            if bad.size:
                raise NondifferentiableError(
                    f"zero-velocity segment(s) {bad[:5].tolist()}: length objective is not differentiable")
            root = np.sqrt(np.maximum(q, 0.0))
            weight = 1.0 / (2.0 * n_seg * root)
            val = np.sum(root) / n_seg

        grad = np.zeros_like(p)
        grad[1:] += weight[:, None] * d_next
        grad[:-1] += weight[:, None] * d_this
        return float(val), grad

    def gradient(self, seq) -> np.ndarray:
        return self.value_and_gradient(seq)[1]


def gradient(obj: DiscreteObjective, seq) -> np.ndarray:
    """Gradient with respect to every point, shape ``(N+1, D)``."""
    return obj.gradient(seq)


def fd_gradient(obj: DiscreteObjective, seq, rel_step: float = 1e-6) -> np.ndarray:
    """Central finite-difference gradient, step ``rel_step * max(1, |p|)`` per coordinate."""
    p = np.array(_as_points(seq), dtype=float)
    g = np.empty_like(p)
    for idx in np.ndindex(p.shape):
        h = rel_step * max(1.0, abs(p[idx]))
        old = p[idx]
        p[idx] = old + h
        fp = obj.value(p)
        p[idx] = old - h
        fm = obj.value(p)
        p[idx] = old
        g[idx] = (fp - fm) / (2.0 * h)
    return g
