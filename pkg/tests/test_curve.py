import io
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from discrete_geodesics import (LinearInterpolant, PointSequence, continuous_energy, continuous_length,
                                euclidean, evaluate_interpolant, finite_difference)
from discrete_geodesics.curve import discrete_l2_speed, refine, resample

seqs = st.integers(1, 12).flatmap(
    lambda n: arrays(float, (n + 1, 2), elements=st.floats(-10, 10, allow_nan=False)))


def test_finite_difference_examples():
    s = PointSequence(np.array([[0, 0], [0, 0], [1, 0], [2, 0], [3, 0]], float))
    np.testing.assert_array_equal(finite_difference(s, 1), [4, 0])
    const = PointSequence(np.ones((5, 2)))
    assert np.all(finite_difference(const, 2) == 0)
    n = 10
    line = PointSequence((np.arange(n + 1) ** 2 / n ** 2)[:, None])
    assert finite_difference(line, 3)[0] == pytest.approx(0.7)
    with pytest.raises(IndexError):
        finite_difference(s, 4)


def test_sequence_invariants():
    with pytest.raises(ValueError):
        PointSequence(np.zeros((1, 2)))
    with pytest.raises(ValueError):
        PointSequence(np.array([[0.0, np.nan], [1, 1]]))
    s = PointSequence.chord([0, 0], [1, 1], 4)
    assert s.n_segments == 4 and s.points.shape == (5, 2)
    with pytest.raises(ValueError):
        s.points[0, 0] = 3.0


def test_interpolant_examples():
    s = PointSequence(np.array([[0, 0], [1, 0], [1, 1]], float))
    c = LinearInterpolant(s)
    np.testing.assert_array_equal(evaluate_interpolant(c, 0.0), [0, 0])
    np.testing.assert_allclose(evaluate_interpolant(c, 0.25), [0.5, 0])
    np.testing.assert_allclose(evaluate_interpolant(c, 0.75), [1, 0.5])
    with pytest.raises(ValueError):
        evaluate_interpolant(c, 1.5)


@settings(max_examples=50, deadline=None)
@given(seqs)
def test_interpolant_hits_grid_exactly(pts):
    s = PointSequence(pts)
    np.testing.assert_array_equal(evaluate_interpolant(LinearInterpolant(s), s.times), pts)


def test_continuous_examples(cos_metric):
    chord = LinearInterpolant(PointSequence.chord([0, 0], [4 * np.pi, 0], 1))
    assert continuous_energy(euclidean(2), chord) == pytest.approx(16 * np.pi ** 2, rel=1e-14)
    assert continuous_length(euclidean(2), chord) == pytest.approx(4 * np.pi, rel=1e-14)
    # one long segment needs a higher order; 72 pi^2 in closed form
    assert continuous_energy(cos_metric, chord, quad_order=40) == pytest.approx(72 * np.pi ** 2, rel=1e-12)
    fine = LinearInterpolant(PointSequence.chord([0, 0], [4 * np.pi, 0], 64))
    assert continuous_length(cos_metric, fine) == pytest.approx(8 * np.pi, rel=1e-13)
    assert continuous_energy(cos_metric, LinearInterpolant(PointSequence(np.ones((4, 2))))) == 0.0
    with pytest.raises(ValueError):
        continuous_energy(cos_metric, chord, quad_order=1)


def test_energy_matches_scipy_quad(phi_metric):
    from scipy.integrate import quad

    rng = np.random.default_rng(3)
    s = PointSequence(rng.normal(size=(5, 2)))
    c = LinearInterpolant(s)

    def integrand(t):
        n = min(int(t * 4), 3)
        b = finite_difference(s, n)
        return b @ phi_metric.matrix(evaluate_interpolant(c, t)) @ b

    ref = sum(quad(integrand, k / 4, (k + 1) / 4, epsabs=0, epsrel=1e-13)[0] for k in range(4))
    assert continuous_energy(phi_metric, c) == pytest.approx(ref, rel=1e-11)


@settings(max_examples=40, deadline=None)
@given(seqs)
def test_cauchy_schwarz_and_refinement(pts):
    from discrete_geodesics import default_conformal_phi

    m = default_conformal_phi()
    s = PointSequence(pts)
    e = continuous_energy(m, LinearInterpolant(s))
    length = continuous_length(m, LinearInterpolant(s))
    assert length ** 2 <= e * (1 + 1e-10) + 1e-300
    e2 = continuous_energy(m, LinearInterpolant(refine(s)))
    assert abs(e2 - e) <= 1e-10 * max(e, 1e-300) + 1e-12


def test_quadrature_converged_at_reference_order(phi_metric):
    s = PointSequence(np.random.default_rng(0).normal(scale=2, size=(9, 2)))
    c = LinearInterpolant(s)
    e16, e32 = continuous_energy(phi_metric, c, 16), continuous_energy(phi_metric, c, 32)
    assert abs(e16 - e32) < 1e-9 * e32


def test_refine_and_resample():
    s = PointSequence(np.array([[0, 0], [2, 0]], float))
    np.testing.assert_allclose(refine(s).points, [[0, 0], [1, 0], [2, 0]])
    assert refine(refine(s)).n_segments == 4
    r = resample(PointSequence.chord([0, 0], [1, 2], 3), 12)
    np.testing.assert_allclose(r.points, PointSequence.chord([0, 0], [1, 2], 12).points, atol=1e-15)


def test_discrete_l2_speed():
    s = PointSequence.chord([0, 0], [3, 4], 7)
    assert discrete_l2_speed(s) == pytest.approx(5.0)


def test_serialization_roundtrip():
    s = PointSequence(np.random.default_rng(0).normal(size=(4, 3)))
    back = PointSequence.from_dict(json.loads(s.to_json()))
    np.testing.assert_array_equal(back.points, s.points)
    text = s.to_csv()
    lines = text.strip().splitlines()
    assert lines[0] == "t,x_1,x_2,x_3"
    parsed = np.loadtxt(io.StringIO(text), delimiter=",", skiprows=1)
    np.testing.assert_array_equal(parsed[:, 1:], s.points)
