"""Explicit a-priori constants and error envelopes for the discrete energy minimum.

Notation follows the convergence analysis of the trapezoidal (midpoint metric)
and left-endpoint rules:

    K1 = d / sqrt(c1)                         velocity L2 bound of a minimal geodesic
    K2 = 3 L_H D^2 / (2 c1) * K1^2            acceleration L2 bound
    C(K1, K2, N) = L_H (K1^3 + K1^2 K2) / N + 4 c2 K1 K2 / N + 4 c2 K2^2 / N^2
    K3(N)^2 = (d^2 + C(K1, K2, N)) / c1
    K4(N)^2 = (d^2 + C(K1, K2, N) + L_H K3^3 / (2 sqrt N)) / c1

Every quantity above is nonincreasing in N, so evaluating the N-dependent
proof constants at a reference ``n_ref`` gives a single constant valid for all
N >= n_ref.  The theorem-form envelopes use that constant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metric import MetricField


@dataclass(frozen=True)
class TheoryConstants:
    c1: float
    c2: float
    l_h: float
    dim: int
    d_g: float
    k1: float
    k2: float

    def c_of_n(self, n) -> float:
        n = np.asarray(n, dtype=float)
        k1, k2 = self.k1, self.k2
        return (self.l_h * (k1 ** 3 + k1 ** 2 * k2) / n
                + 4.0 * self.c2 * k1 * k2 / n
                + 4.0 * self.c2 * k2 ** 2 / n ** 2)

    def k3(self, n) -> float:
        return np.sqrt((self.d_g ** 2 + self.c_of_n(n)) / self.c1)

    def k4(self, n) -> float:
        k3 = self.k3(n)
        return np.sqrt((self.d_g ** 2 + self.c_of_n(n)
                        + 0.5 * self.l_h * k3 ** 3 / np.sqrt(n)) / self.c1)

    def as_dict(self, n=None) -> dict:
        d = {"k1": self.k1, "k2": self.k2, "d_g": self.d_g}
        if n is not None:
            d.update(c_of_n=float(self.c_of_n(n)), k3=float(self.k3(n)), k4=float(self.k4(n)))
        return d


def compute_constants(m: MetricField, d_g: float, dim: int | None = None) -> TheoryConstants:
    if not d_g > 0:
        raise ValueError(f"d_g must be positive, got {d_g}")
    dim = m.dim if dim is None else int(dim)
    k1 = d_g / np.sqrt(m.c1)
    k2 = 3.0 * m.l_h * dim ** 2 / (2.0 * m.c1) * k1 ** 2
    return TheoryConstants(c1=m.c1, c2=m.c2, l_h=m.l_h, dim=dim, d_g=float(d_g),
                           k1=float(k1), k2=float(k2))


# -- single-inequality bounds --------------------------------------------------


def quadratic_form_lipschitz_bound(l_h, c2, x1, x2, u1, u2) -> float:
    """Bound on |u1^T H(x1) u1 - u2^T H(x2) u2|."""
    du = np.linalg.norm(np.subtract(u1, u2))
    nu1 = np.linalg.norm(u1)
    return (l_h * np.linalg.norm(np.subtract(x1, x2)) * nu1 ** 2
            + c2 * du ** 2 + 2.0 * c2 * nu1 * du)


def interpolation_gap_trapezoidal(l_h, k3, n) -> float:
    """|E(gamma^pl) - E_tra,N(gamma^p)| <= L_H K3^3 / (4 sqrt N)."""
    return l_h * k3 ** 3 / (4.0 * np.sqrt(n))


def interpolation_gap_left(l_h, k3, n) -> float:
    """|E(gamma^pl) - E_l,N(gamma^p)| <= L_H K3^3 / (2 sqrt N)."""
    return l_h * k3 ** 3 / (2.0 * np.sqrt(n))


def rule_gap(l_h, k3, n) -> float:
    """|E_l,N - E_tra,N| <= L_H K3^3 / (2 sqrt N)."""
    return l_h * k3 ** 3 / (2.0 * np.sqrt(n))


def smooth_curve_quadrature_error(c2, l_h, k1, k2, n) -> float:
    """|E(gamma) - E_tra,N(gamma)| for ||gamma'||_L2 <= k1, ||gamma''||_L2 <= k2."""
    return (l_h * (k1 ** 3 + k1 ** 2 * k2) / n + 4.0 * c2 * k1 * k2 / n
            + 4.0 * c2 * k2 ** 2 / n ** 2)


# -- envelopes -----------------------------------------------------------------


def trapezoidal_proof_bounds(tc: TheoryConstants, n: int, min_energy: float):
    """N-dependent proof-chain interval for min E_tra,N."""
    lower = min_energy - tc.l_h * tc.k3(n) ** 3 / (4.0 * np.sqrt(n))
    upper = min_energy + tc.c_of_n(n)
    return float(lower), float(upper)


def left_proof_bounds(tc: TheoryConstants, n: int, min_energy: float):
    """N-dependent proof-chain interval for min E_l,N."""
    lower = min_energy - tc.l_h * tc.k4(n) ** 3 / (2.0 * np.sqrt(n))
    upper = min_energy + tc.c_of_n(n) + tc.l_h * tc.k3(n) ** 3 / (2.0 * np.sqrt(n))
    return float(lower), float(upper)


def theorem_constant(tc: TheoryConstants, rule: str = "trapezoidal", n_ref: int = 1) -> float:
    """One constant C valid for every N >= n_ref in the theorem-form envelope."""
    s = np.sqrt(n_ref)
    if rule == "trapezoidal":
        upper = n_ref * tc.c_of_n(n_ref)
        lower = tc.l_h * tc.k3(n_ref) ** 3 / 4.0
    elif rule == "left":
        # C(K1,K2,N) <= n_ref C(K1,K2,n_ref) / N <= sqrt(n_ref) C(K1,K2,n_ref) / sqrt(N)
        upper = s * tc.c_of_n(n_ref) + tc.l_h * tc.k3(n_ref) ** 3 / 2.0
        lower = tc.l_h * tc.k4(n_ref) ** 3 / 2.0
    else:
        raise ValueError(f"unknown rule {rule!r}")
    return float(max(upper, lower))


def trapezoidal_envelope(tc: TheoryConstants, n: int, min_energy: float, n_ref: int = 1):
    """(min E - C/sqrt N, min E + C/N)."""
    if min_energy < 0:
        raise ValueError("min_energy must be nonnegative")
    c = theorem_constant(tc, "trapezoidal", n_ref)
    return float(min_energy - c / np.sqrt(n)), float(min_energy + c / n)


def left_envelope(tc: TheoryConstants, n: int, min_energy: float, n_ref: int = 1):
    """(min E - C/sqrt N, min E + C/sqrt N)."""
    if min_energy < 0:
        raise ValueError("min_energy must be nonnegative")
    c = theorem_constant(tc, "left", n_ref)
    return float(min_energy - c / np.sqrt(n)), float(min_energy + c / np.sqrt(n))


def envelope(tc: TheoryConstants, n: int, min_energy: float, rule: str = "trapezoidal", n_ref: int = 1):
    if rule == "trapezoidal":
        return trapezoidal_envelope(tc, n, min_energy, n_ref)
    return left_envelope(tc, n, min_energy, n_ref)


def length_squared_bound(tc: TheoryConstants, n: int, rule: str = "trapezoidal", n_ref: int = 1) -> float:
    """L(gamma*^pl)^2 - min L^2 <= C / sqrt N (two C/sqrt N terms of the energy chain)."""
    return 2.0 * theorem_constant(tc, rule, n_ref) / np.sqrt(n)
