import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from discrete_geodesics import (christoffel, christoffel_bound, conformal_cos, euclidean,
                                from_callable, quadratic_form, validate_bounds)
from discrete_geodesics.metric import MetricField, fd_jacobian, metric_derivative

finite = st.floats(-20, 20, allow_nan=False)


def test_quadratic_form_examples(cos_metric):
    assert quadratic_form(euclidean(2), [3, 7], [1, 2]) == pytest.approx(5.0)
    assert quadratic_form(cos_metric, [0, 0], [1, 0]) == pytest.approx(1.0)
    assert quadratic_form(cos_metric, [np.pi, 0], [1, 0]) == pytest.approx(9.0)


def test_quadratic_form_dimension_mismatch():
    with pytest.raises(ValueError):
        quadratic_form(euclidean(2), [0, 0, 0], [1, 0])
    with pytest.raises(ValueError):
        quadratic_form(euclidean(2), [0, 0], [1])


def test_metric_derivative_examples(cos_metric):
    assert np.all(metric_derivative(euclidean(3), [1, 2, 3], 1) == 0)
    np.testing.assert_allclose(metric_derivative(cos_metric, [np.pi / 2, 0], 0), 4 * np.eye(2), atol=1e-14)
    assert np.all(metric_derivative(cos_metric, [0.3, 1.1], 1) == 0)
    with pytest.raises(ValueError):
        metric_derivative(cos_metric, [0, 0], 2)


def test_analytic_derivative_matches_fd(any_metric):
    x = np.random.default_rng(1).uniform(-5, 5, size=(50, 2))
    np.testing.assert_allclose(any_metric.jacobian(x), fd_jacobian(any_metric, x), atol=1e-7)


def test_fd_used_without_analytic():
    m = from_callable(lambda x: (2 - np.cos(x[0])) ** 2 * np.eye(2), 2, 1, 9, 12)
    assert not m.has_analytic_derivative
    np.testing.assert_allclose(metric_derivative(m, [np.pi / 2, 0], 0), 4 * np.eye(2), atol=1e-8)


def test_christoffel_cos_at_quarter_turn(cos_metric):
    # f f'/f^2 = sin x / (2 - cos x) = 1/2 at x1 = pi/2
    g = christoffel(cos_metric, [np.pi / 2, 0.0])
    assert g[0, 0, 0] == pytest.approx(0.5)
    assert g[0, 1, 1] == pytest.approx(-0.5)
    assert g[1, 0, 1] == pytest.approx(0.5) and g[1, 1, 0] == pytest.approx(0.5)
    assert g[1, 0, 0] == pytest.approx(0.0) and g[0, 0, 1] == pytest.approx(0.0)


def test_christoffel_euclidean_zero():
    assert np.all(christoffel(euclidean(3), [1.0, 2.0, 3.0]) == 0)


def test_christoffel_nonfinite_raises():
    m = MetricField(dim=1, h_eval=lambda x: np.full(x.shape[:-1] + (1, 1), np.nan), c1=1, c2=1, l_h=0)
    with pytest.raises(FloatingPointError):
        christoffel(m, [0.0])


@settings(max_examples=60, deadline=None)
@given(arrays(float, 2, elements=finite))
def test_christoffel_symmetric_and_bounded(any_metric, x):
    g = christoffel(any_metric, x)
    np.testing.assert_allclose(g, np.swapaxes(g, 1, 2), atol=1e-12)
    assert np.abs(g).max() <= christoffel_bound(any_metric) + 1e-9


@settings(max_examples=60, deadline=None)
@given(arrays(float, 2, elements=finite), arrays(float, 2, elements=finite))
def test_eigenvalue_bounds_hold(any_metric, x, u):
    q = quadratic_form(any_metric, x, u)
    n2 = float(u @ u)
    assert any_metric.c1 * n2 * (1 - 1e-12) <= q + 1e-300
    assert q <= any_metric.c2 * n2 * (1 + 1e-12)


def test_declared_bounds_validate(any_metric):
    chk = validate_bounds(any_metric)
    assert chk.ok, chk
    assert chk.max_derivative_entry <= any_metric.l_h


def test_validate_bounds_catches_wrong_declaration():
    m = conformal_cos()
    bad = MetricField(dim=2, h_eval=m.h_eval, dh_eval=m.dh_eval, c1=2.0, c2=9.0, l_h=12.0)
    assert not validate_bounds(bad).ok


def test_invalid_metadata_rejected():
    with pytest.raises(ValueError):
        MetricField(dim=2, h_eval=lambda x: x, c1=0.0, c2=1.0, l_h=0.0)
    with pytest.raises(ValueError):
        MetricField(dim=2, h_eval=lambda x: x, c1=2.0, c2=1.0, l_h=0.0)
    with pytest.raises(ValueError):
        MetricField(dim=2, h_eval=lambda x: x, c1=1.0, c2=1.0, l_h=-1.0)


def test_batched_matrix_shape(phi_metric):
    x = np.zeros((3, 4, 2))
    assert phi_metric.matrix(x).shape == (3, 4, 2, 2)
    assert phi_metric.jacobian(x).shape == (3, 4, 2, 2, 2)
