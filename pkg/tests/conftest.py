import os

import pytest
from hypothesis import HealthCheck, settings

from cnoidal.model import PhysicalParams, SystemKind

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# (mu0, mu1, a, b, c), sigma of the four illustration sets
FIGURES = {
    SystemKind.KDV_KDV: (PhysicalParams(1.0, 0.25, 1.0, -1.0, 1.5), 2.0),
    SystemKind.BBM_BBM: (PhysicalParams(1.0, 1.0, 1.0, -1.0, 2.5), 1.0),
    SystemKind.KDV_BBM: (PhysicalParams(1.0, 0.25, 1.0, -1.0, 1.5), 1.5),
    SystemKind.BBM_KDV: (PhysicalParams(1.0, 0.25, 1.0, -1.0, 1.5), 0.5),
}


@pytest.fixture(params=list(SystemKind), ids=lambda k: k.value)
def kind(request):
    return request.param


@pytest.fixture
def figure(kind):
    phys, sigma = FIGURES[kind]
    return kind, phys, sigma
