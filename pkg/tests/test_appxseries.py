import itertools
import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest
from scipy import integrate, special

from qubitscatter.appxseries import (SeriesCtl, calC, calC_approx, calC_quad, calC_series,
                                     concurrence_approx)
from qubitscatter.capquad import cap_solid_angle
from qubitscatter.errors import ConvergenceError, DomainError

GRID = list(itertools.product((1.0, 5.0, 10.0, 25.0),
                              (0.0, math.pi / 6, math.pi / 2, 5 * math.pi / 6, math.pi),
                              (math.pi / 25, math.pi / 15, math.pi / 6)))


def axial(kappa, dtheta):
    s2 = math.sin(dtheta / 2) ** 2
    return (np.exp(1j * kappa) - np.exp(1j * kappa * math.cos(dtheta))) / (2j * kappa * s2)


def perpendicular_bessel(kappa, dtheta):
    """Cap centred perpendicular to d: 2 pi int_0^dtheta J0(kappa sin t) sin t dt / dOmega."""
    val, _ = integrate.quad(lambda t: special.j0(kappa * math.sin(t)) * math.sin(t),
                            0, dtheta, epsabs=1e-14, epsrel=1e-13)
    return 2 * math.pi * val / cap_solid_angle(dtheta)


def test_grid_size():
    assert len(GRID) == 60


@pytest.mark.parametrize("kappa,theta_D,dtheta", GRID)
def test_series_matches_quadrature(kappa, theta_D, dtheta):
    assert abs(calC_series(kappa, theta_D, dtheta) - calC_quad(kappa, theta_D, dtheta)) <= 1e-8


@pytest.mark.parametrize("kappa", [0.1, 1.0, 10.0, 25.0])
@pytest.mark.parametrize("dtheta", [0.01, math.pi / 15, math.pi / 6, 1.0])
def test_axial_closed_form(kappa, dtheta):
    assert abs(calC_series(kappa, 0.0, dtheta) - axial(kappa, dtheta)) <= 1e-10


@pytest.mark.parametrize("kappa,dtheta", [(10.0, math.pi / 15), (25.0, math.pi / 6), (3.0, 1.2)])
def test_perpendicular_bessel_oracle(kappa, dtheta):
    got = calC_series(kappa, math.pi / 2, dtheta)
    assert abs(got - perpendicular_bessel(kappa, dtheta)) <= 1e-10


def test_small_kappa_limit():
    assert abs(calC_series(1e-6, 1.0, 0.5) - 1) < 1e-5


@settings(max_examples=40, deadline=None)
@given(kappa=st.floats(0.01, 25), theta_D=st.floats(0, math.pi), dtheta=st.floats(0.01, 0.6))
def test_modulus_bounded_and_conjugate(kappa, theta_D, dtheta):
    c = calC_series(kappa, theta_D, dtheta)
    assert abs(c) <= 1 + 1e-12
    mirrored = calC_series(kappa, theta_D, dtheta, imag_unit=-1j)
    assert abs(mirrored - np.conj(c)) <= 1e-12


def test_truncation_point_detector():
    for theta_D in (0.0, 0.9, math.pi / 2):
        assert calC_approx(7.0, theta_D, 1e-9) == pytest.approx(np.exp(7j * math.cos(theta_D)))


def test_truncation_value_perpendicular():
    # value of the truncated formula itself
    assert concurrence_approx(10.0, math.pi / 2, math.pi / 15) == pytest.approx(0.45369, abs=5e-6)
    assert abs(calC_approx(10.0, math.pi / 2, math.pi / 15)) == pytest.approx(0.45369, abs=5e-6)


def test_truncation_accurate_when_phase_spread_small():
    # the truncation holds when kappa * dtheta << 1
    for kappa, theta_D, dtheta in [(1.0, math.pi / 2, 0.05), (5.0, 1.0, 0.02), (10.0, 2.0, 0.01)]:
        series = calC_series(kappa, theta_D, dtheta)
        assert abs(concurrence_approx(kappa, theta_D, dtheta) - abs(series)) <= 1e-3


def test_dispatch():
    assert calC(5.0, 1.0, 0.3, "quad") == pytest.approx(calC(5.0, 1.0, 0.3), abs=1e-9)
    with pytest.raises(DomainError):
        calC(5.0, 1.0, 0.3, "magic")
    with pytest.raises(DomainError):
        calC_series(0.0, 1.0, 0.3)


def test_non_convergence_reports_partial_sum():
    with pytest.raises(ConvergenceError) as info:
        calC_series(10.0, 1.0, 0.5, SeriesCtl(max_terms=3))
    assert info.value.estimate is not None and info.value.error > 1e-12


def test_cancellation_guard():
    # large kappa sin^2(dtheta/2): terms of size e^(2 kappa) cancel
    with pytest.raises(ConvergenceError):
        calC_series(200.0, 1.0, math.pi)
