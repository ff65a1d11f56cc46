"""Convergence studies, the length-discretization counterexample and gradient checks."""

from __future__ import annotations

import csv
import io
import time
from dataclasses import asdict, dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .bounds import compute_constants, envelope
from .config import Problem
from .curve import PointSequence
from .metric import MetricField, conformal_cos
from .objectives import (DiscreteObjective, NondifferentiableError, Rule, fd_gradient,
                         length_left, length_trapezoidal)
from .solver import SolveConfig, initial_guess, solve_ladder


@dataclass
class StudyRecord:
    n: int
    rule: str
    discrete_objective: float
    continuous_energy: float
    continuous_length: float
    energy_error: float
    length_error: float
    iterations: int
    converged: bool
    envelope_lower: float
    envelope_upper: float
    k1: float
    k2: float
    k3: float
    c_of_n: float
    wall_seconds: float


STUDY_COLUMNS = [f for f in StudyRecord.__dataclass_fields__]


@dataclass
class OrderFit:
    rule: str
    quantity: str
    slope: Optional[float]  # None means every error is at roundoff level ("exact")

    def label(self) -> str:
        return "exact" if self.slope is None else f"{self.slope:.17g}"


def fit_order(ns: Sequence[int], errors: Sequence[float], floor: float = 0.0) -> Optional[float]:
    """Least-squares slope of log(error) against log(N) over errors above ``floor``.

    Returns None when fewer than two errors exceed the floor.
    """
    ns = np.asarray(ns, dtype=float)
    err = np.asarray(errors, dtype=float)
    keep = err > floor
    if keep.sum() < 2:
        return None
    slope, _ = np.polyfit(np.log(ns[keep]), np.log(err[keep]), 1)
    return float(slope)


def roundoff_floor(scale: float) -> float:
    return 1e-9 * max(1.0, abs(scale))


def run_study(problem: Problem, n_list: Optional[Iterable[int]] = None,
              rules: Iterable[str] = ("trapezoidal", "left")):
    """Solve ladders per rule; return (records, order fits, reference distance)."""
    n_list = list(n_list or problem.n_list)
    if len(n_list) < 3:
        raise ValueError("a convergence study needs at least 3 values of N")
    rules = [Rule(r) for r in rules]
    ladders = {}
    for rule in rules:
        t0 = time.perf_counter()
        reports = solve_ladder(problem.objective(rule), problem.x0, problem.x1, n_list, problem.solver)
        ladders[rule] = (reports, (time.perf_counter() - t0) / len(reports))

    d_g = problem.reference_distance()
    if d_g is None:
        # estimate from the finest solve; biased upward, so the envelope only widens
        d_g = min(r[0][-1].continuous_length for r in ladders.values())
    min_energy = d_g ** 2
    tc = compute_constants(problem.metric, d_g) if d_g > 0 else None

    records = []
    for rule in rules:
        reports, per_solve = ladders[rule]
        for rep in reports:
            n = rep.n_segments
            lo, hi = envelope(tc, n, min_energy, rule.value) if tc else (min_energy, min_energy)
            records.append(StudyRecord(
                n=n, rule=rule.value,
                discrete_objective=rep.objective_value,
                continuous_energy=rep.continuous_energy,
                continuous_length=rep.continuous_length,
                energy_error=rep.continuous_energy - min_energy,
                length_error=rep.continuous_length ** 2 - min_energy,
                iterations=rep.iterations, converged=rep.converged,
                envelope_lower=lo, envelope_upper=hi,
                k1=tc.k1 if tc else 0.0, k2=tc.k2 if tc else 0.0,
                k3=float(tc.k3(n)) if tc else 0.0, c_of_n=float(tc.c_of_n(n)) if tc else 0.0,
                wall_seconds=per_solve,
            ))

    floor = roundoff_floor(min_energy)
    fits = []
    for rule in rules:
        rows = [r for r in records if r.rule == rule.value]
        ns = [r.n for r in rows]
        for quantity in ("energy_error", "length_error"):
            fits.append(OrderFit(rule.value, quantity,
                                 fit_order(ns, [getattr(r, quantity) for r in rows], floor)))
    return records, fits, d_g


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def study_csv(records, fits) -> str:
    """Record table, then one ``# order,<rule>,<quantity>,<slope>`` line per fit."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(STUDY_COLUMNS)
    for r in records:
        d = asdict(r)
        w.writerow([_fmt(d[c]) for c in STUDY_COLUMNS])
    for f in fits:
        buf.write(f"# order,{f.rule},{f.quantity},{f.label()}\n")
    return buf.getvalue()


# -- counterexample ------------------------------------------------------------

COUNTEREXAMPLE_START = np.array([0.0, 0.0])
COUNTEREXAMPLE_END = np.array([4.0 * np.pi, 0.0])


def degenerate_left_sequence(n: int) -> PointSequence:
    """Monotone sequence with every point at x1 in {0, 2 pi, 4 pi}: f = 1 at each left endpoint."""
    if n < 2:
        raise ValueError("need N >= 2")
    x = np.where(np.arange(n + 1) < n // 2, 0.0, 2.0 * np.pi)
    x[-1] = 4.0 * np.pi
    return PointSequence(np.column_stack([x, np.zeros(n + 1)]))


def degenerate_trapezoidal_sequence(n: int) -> PointSequence:
    """Monotone sequence in {0, 4 pi}: a single jump whose midpoint 2 pi has f = 1."""
    x = np.where(np.arange(n + 1) <= n // 2, 0.0, 4.0 * np.pi)
    x[-1] = 4.0 * np.pi
    return PointSequence(np.column_stack([x, np.zeros(n + 1)]))


@dataclass
class CounterexampleRow:
    n: int
    left_degenerate_length: float
    trapezoidal_degenerate_length: float
    discrete_length_lower_bound: float
    minimal_length: float
    energy_route_length_trapezoidal: float
    energy_route_length_left: float


def counterexample(n_list: Sequence[int] = (8, 16, 32, 64), cfg: Optional[SolveConfig] = None):
    m = conformal_cos()
    routes = {}
    for rule in ("trapezoidal", "left"):
        reps = solve_ladder(DiscreteObjective(m, rule), COUNTEREXAMPLE_START, COUNTEREXAMPLE_END,
                            list(n_list), cfg)
        routes[rule] = {r.n_segments: r.continuous_length for r in reps}
    return [CounterexampleRow(
        n=n,
        left_degenerate_length=length_left(m, degenerate_left_sequence(n)),
        trapezoidal_degenerate_length=length_trapezoidal(m, degenerate_trapezoidal_sequence(n)),
        discrete_length_lower_bound=4.0 * np.pi,
        minimal_length=8.0 * np.pi,
        energy_route_length_trapezoidal=routes["trapezoidal"][n],
        energy_route_length_left=routes["left"][n],
    ) for n in n_list]


def rows_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = list(asdict(rows[0]))
    w.writerow(cols)
    for r in rows:
        d = asdict(r)
        w.writerow([_fmt(d[c]) for c in cols])
    return buf.getvalue()


# -- gradient check ------------------------------------------------------------


@dataclass
class GradcheckResult:
    rule: str
    functional: str
    samples: int
    skipped: int
    max_rel_error: float
    passed: bool


GRADCHECK_TOL = 1e-5


def gradcheck(m: MetricField, x0, x1, functional: str = "energy", rules=("trapezoidal", "left"),
              samples: int = 100, seed: int = 0, n: int = 16, tol: float = GRADCHECK_TOL):
    """Max normwise relative analytic-vs-FD gradient discrepancy over random sequences."""
    rng = np.random.default_rng(seed)
    base = initial_guess(x0, x1, n).points
    chord = float(np.linalg.norm(base[-1] - base[0]))
    noise = max(chord, 1.0) / n
    seqs = [base + rng.normal(scale=noise, size=base.shape) for _ in range(samples)]
    out = []
    for rule in rules:
        obj = DiscreteObjective(m, rule, functional)
        worst, skipped = 0.0, 0
        for p in seqs:
            try:
                ga = obj.gradient(p)
            except NondifferentiableError:
                skipped += 1
                continue
            gf = fd_gradient(obj, p)
            worst = max(worst, float(np.abs(ga - gf).max() / max(np.abs(ga).max(), 1e-300)))
        out.append(GradcheckResult(Rule(rule).value, obj.functional.value, samples, skipped,
                                   worst, worst < tol))
    return out
