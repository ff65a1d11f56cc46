import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from discrete_geodesics import Ball, Box, HalfSpace, Point
from discrete_geodesics.sets import check_instance, set_from_dict

vec = arrays(float, 2, elements=st.floats(-50, 50, allow_nan=False))
SETS = [Point([1.0, 2.0]), Ball([0.0, 0.0], 1.0), Box([0.0, 0.0], [1.0, 1.0]), HalfSpace([1.0, 0.0], 0.0),
        HalfSpace([3.0, -4.0], 2.0)]


def test_contains_examples():
    assert Point([1, 2]).contains([1, 2])
    assert not Ball([0, 0], 1).contains([2, 0])
    assert Box([0, 0], [1, 1]).contains([0.5, 1.0])
    assert Ball([0, 0], 1).contains([1.0, 0.0])


def test_project_examples():
    np.testing.assert_allclose(Ball([0, 0], 1).project([3, 4]), [0.6, 0.8])
    np.testing.assert_allclose(Box([0, 0], [1, 1]).project([-1, 0.5]), [0, 0.5])
    np.testing.assert_allclose(HalfSpace([1, 0], 0).project([2, 3]), [0, 3])
    np.testing.assert_allclose(Point([1, 2]).project([7, 7]), [1, 2])


def test_bounded_flags():
    assert Point([0]).bounded and Ball([0], 1).bounded and Box([0], [1]).bounded
    assert not HalfSpace([1], 0).bounded


@pytest.mark.parametrize("s", SETS, ids=lambda s: s.kind)
@settings(max_examples=50, deadline=None)
@given(x=vec, y=vec)
def test_projection_properties(s, x, y):
    px = s.project(x)
    assert s.contains(px)
    np.testing.assert_allclose(s.project(px), px, atol=1e-12)
    assert np.linalg.norm(px - s.project(y)) <= np.linalg.norm(x - y) * (1 + 1e-12) + 1e-12
    if s.contains(x):
        np.testing.assert_allclose(px, x, atol=1e-12)
    else:
        assert not np.allclose(px, x, atol=1e-12, rtol=0)


def test_instance_validation():
    with pytest.raises(ValueError, match="at least one endpoint set must be bounded"):
        check_instance(HalfSpace([1, 0], 0), HalfSpace([-1, 0], -3))
    with pytest.raises(ValueError):
        check_instance(Point([0, 0]), Point([0, 0, 0]))
    check_instance(HalfSpace([1, 0], 0), Ball([3, 0], 1))


def test_invalid_sets():
    with pytest.raises(ValueError):
        Ball([0, 0], -1)
    with pytest.raises(ValueError):
        Box([1, 0], [0, 1])
    with pytest.raises(ValueError):
        HalfSpace([0, 0], 1)


@pytest.mark.parametrize("s", SETS, ids=lambda s: s.kind)
def test_dict_roundtrip(s):
    back = set_from_dict(s.to_dict())
    assert back.kind == s.kind
    x = np.array([3.0, -7.0])
    np.testing.assert_allclose(back.project(x), s.project(x))
