import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest

from qubitscatter.capquad import (CapRule, cap_average, cap_solid_angle, integrate_cap,
                                  plane_wave_average)
from qubitscatter.errors import ConvergenceError, DomainError


def plane_wave(kappa):
    return lambda k: np.exp(1j * kappa * k[:, 2])


@pytest.mark.parametrize("dtheta,expected", [
    (math.pi, 4 * math.pi),
    (math.pi / 2, 2 * math.pi),
    (math.pi / 15, 0.1373027),
])
def test_solid_angle(dtheta, expected):
    assert cap_solid_angle(dtheta) == pytest.approx(expected, rel=1e-4)


@pytest.mark.parametrize("bad", [0.0, -0.1, 3.5])
def test_solid_angle_domain(bad):
    with pytest.raises(DomainError):
        cap_solid_angle(bad)


def test_rule_validation():
    with pytest.raises(DomainError):
        CapRule(4.0, 0.1)
    with pytest.raises(DomainError):
        CapRule(0.0, 0.1, n_theta=2)


@pytest.mark.parametrize("theta_D", [0.0, 0.7, math.pi / 2, math.pi])
def test_constant_integrand(theta_D):
    rule = CapRule(theta_D, 0.4)
    assert integrate_cap(lambda k: np.ones(len(k)), rule) == pytest.approx(
        cap_solid_angle(0.4), abs=1e-12)


def test_weights_and_unit_nodes():
    dirs, w = CapRule(1.0, 0.3).nodes()
    np.testing.assert_allclose(np.linalg.norm(dirs, axis=1), 1, atol=1e-14)
    assert w.sum() == pytest.approx(cap_solid_angle(0.3), rel=1e-13)
    # every node lies within dtheta of the cap centre
    centre = np.array([math.sin(1.0), 0.0, math.cos(1.0)])
    assert np.all(dirs @ centre >= math.cos(0.3) - 1e-14)


@pytest.mark.parametrize("kappa,dtheta", [(1.0, 0.2), (10.0, math.pi / 15), (25.0, 1.0)])
def test_axial_plane_wave(kappa, dtheta):
    got = integrate_cap(plane_wave(kappa), CapRule(0.0, dtheta, tol=1e-12))
    exact = 2 * math.pi * (np.exp(1j * kappa) - np.exp(1j * kappa * math.cos(dtheta))) / (1j * kappa)
    assert abs(got - exact) < 1e-11


@pytest.mark.parametrize("kappa", [0.3, 10.0, 25.0])
def test_full_sphere_plane_wave(kappa):
    got = integrate_cap(plane_wave(kappa), CapRule(0.8, math.pi, tol=1e-12))
    assert abs(got - 4 * math.pi * math.sin(kappa) / kappa) < 1e-11


def test_rotational_consistency():
    # depends only on the angle from the cap centre, so theta_D must not matter
    def radial(theta_D):
        centre = np.array([math.sin(theta_D), 0.0, math.cos(theta_D)])
        return lambda k: np.exp(3j * (k @ centre)) * (k @ centre) ** 2
    ref = integrate_cap(radial(0.0), CapRule(0.0, 0.5))
    for theta_D in (0.4, 1.7, math.pi):
        assert abs(integrate_cap(radial(theta_D), CapRule(theta_D, 0.5)) - ref) < 1e-12


@settings(max_examples=25, deadline=None)
@given(a=st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
       b=st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
       theta_D=st.floats(0, math.pi), dtheta=st.floats(0.05, math.pi))
def test_linearity(a, b, theta_D, dtheta):
    rule = CapRule(theta_D, dtheta, tol=1e-12)
    f, g = plane_wave(4.0), (lambda k: k[:, 0] ** 2 + 1j * k[:, 2])
    lhs = integrate_cap(lambda k: a * f(k) + b * g(k), rule)
    rhs = a * integrate_cap(f, rule) + b * integrate_cap(g, rule)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(a) + abs(b)) * 4 * math.pi


def test_vector_valued_integrand():
    rule = CapRule(0.5, 0.3)
    both = integrate_cap(lambda k: np.stack([k[:, 2], np.ones(len(k))], axis=1), rule)
    assert both.shape == (2,)
    assert both[1] == pytest.approx(cap_solid_angle(0.3), rel=1e-12)
    assert both[0] == pytest.approx(integrate_cap(lambda k: k[:, 2], rule), rel=1e-12)


def test_cap_average_of_one():
    assert cap_average(lambda k: np.ones(len(k)), CapRule(2.0, 0.2)) == pytest.approx(1.0)


def test_plane_wave_average_modulus_bounded():
    assert abs(plane_wave_average(10.0, math.pi / 2, math.pi / 15)) <= 1.0


def test_non_convergence_reported():
    rule = CapRule(0.0, math.pi, max_doublings=1, tol=1e-15)
    with pytest.raises(ConvergenceError) as info:
        integrate_cap(plane_wave(400.0), rule)
    assert info.value.estimate is not None
    assert info.value.error > 1e-15
