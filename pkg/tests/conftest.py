import numpy as np
import pytest

from discrete_geodesics import DiscreteObjective, conformal_cos, default_conformal_phi, euclidean, solve_ladder

COS_START = np.array([0.0, 0.0])
COS_END = np.array([4.0 * np.pi, 0.0])
LADDER = [8, 16, 32, 64, 128, 256]


@pytest.fixture(scope="session")
def cos_metric():
    return conformal_cos()


@pytest.fixture(scope="session")
def phi_metric():
    return default_conformal_phi()


@pytest.fixture(scope="session", params=["euclidean", "conformal_cos", "conformal_phi"])
def any_metric(request):
    return {"euclidean": euclidean(2), "conformal_cos": conformal_cos(),
            "conformal_phi": default_conformal_phi()}[request.param]


@pytest.fixture(scope="session")
def cos_ladders(cos_metric):
    """Converged ladders for both rules on the cosine instance, shared across tests."""
    return {rule: solve_ladder(DiscreteObjective(cos_metric, rule), COS_START, COS_END, LADDER)
            for rule in ("trapezoidal", "left")}
