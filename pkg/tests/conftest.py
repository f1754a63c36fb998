import math

import pytest

from qubitscatter.born import ScatterParams


@pytest.fixture
def fig2_params():
    """kappa = 10, w/d = 10, dtheta = pi/15, incident perpendicular to d."""
    def make(**kw):
        base = dict(kappa=10.0, w_over_d=10.0, g_tilde=1.0, theta0=math.pi / 2,
                    thetaD=0.0, dtheta=math.pi / 15)
        base.update(kw)
        return ScatterParams(**base)
    return make
