import numpy as np
import pytest

from discrete_geodesics import conformal_cos, euclidean, length_left, length_trapezoidal, problem_from_dict
from discrete_geodesics.study import (counterexample, degenerate_left_sequence, fit_order, gradcheck,
                                      run_study, study_csv)


def test_fit_order_recovers_slope():
    ns = np.array([8, 16, 32, 64])
    assert fit_order(ns, 3.0 * ns ** -1.5) == pytest.approx(-1.5)
    assert fit_order(ns, [1e-15] * 4, floor=1e-12) is None


def test_cos_study(tmp_path):
    cfg = {"metric": {"kind": "conformal_cos"}, "x0": {"kind": "point", "p": [0, 0]},
           "x1": {"kind": "point", "p": [4 * np.pi, 0]}}
    records, fits, d = run_study(problem_from_dict(cfg), [8, 16, 32, 64, 128])
    assert d == pytest.approx(8 * np.pi)
    by = {(f.rule, f.quantity): f for f in fits}
    assert by["trapezoidal", "energy_error"].slope <= -0.45
    assert by["left", "energy_error"].slope <= -0.45
    for r in records:
        assert np.isfinite(r.energy_error) and np.isfinite(r.length_error)
        assert r.envelope_lower <= r.discrete_objective <= r.envelope_upper
    for rule in ("trapezoidal", "left"):
        ns = [r.n for r in records if r.rule == rule]
        assert ns == sorted(set(ns))
    text = study_csv(records, fits)
    assert text.splitlines()[0].startswith("n,rule,discrete_objective")


def test_counterexample_gap_persists():
    rows = counterexample([8, 16, 32])
    for r in rows:
        assert r.left_degenerate_length == pytest.approx(4 * np.pi, rel=1e-12)
        assert r.minimal_length - r.discrete_length_lower_bound == pytest.approx(4 * np.pi)
        assert r.energy_route_length_trapezoidal == pytest.approx(8 * np.pi, abs=0.5)


def test_degenerate_left_uses_grid_values():
    s = degenerate_left_sequence(8)
    assert set(np.round(s.points[:, 0] / np.pi, 12)) <= {0.0, 2.0, 4.0}
    assert length_left(conformal_cos(), s) == pytest.approx(4 * np.pi)
    assert length_trapezoidal(conformal_cos(), s) > 4 * np.pi


def test_gradcheck_euclidean_and_length():
    res = gradcheck(euclidean(2), [0, 0], [3, 4], samples=10)
    assert all(r.passed and r.max_rel_error < 1e-9 for r in res)
    res = gradcheck(conformal_cos(), [0, 0], [4 * np.pi, 0], functional="length", samples=10)
    assert all(r.passed for r in res)
