"""Full-order (renormalized, resummed) concurrence and yield for a broad packet.

Valid for a monochromatic packet much wider than the target (``w >> d``).
The yield is normalized like :func:`qubitscatter.born.yield_born`, as
``P w^2 / (dOmega d^2)``.
"""
from dataclasses import dataclass
import math

import numpy as np

from . import spinalg
from .appxseries import calC
from .born import ScatterParams, _warn_if_broadband
from .errors import ResonanceError, UnsupportedRegimeError, ZeroYieldError
from .spinalg import AmplitudePair, CouplingState

# smallest w/d accepted by the broad-packet closed forms
MIN_W_OVER_D = 2.0
POLE_TOL = 1e-12


def coupling_state(p):
    return CouplingState.from_couplings(p.kappa, p.g_tilde)


def _check(value, label):
    if abs(value) < POLE_TOL:
        raise ResonanceError(f"resonance pole: |{label}| = {abs(value):.3e}")
    return value


def resummation_factors(cs):
    """``(a_k, b_k, N_k)`` for one coupling state.

    ``N_k`` is in units of ``hbar^2 d / m`` and tends to ``g_tilde`` as the
    coupling vanishes.
    """
    xi, f = cs.xi, cs.f
    a_k = 1 + f * f * (1 - xi * xi)
    b_k = (-(1 + xi) + (1 - xi) ** 2 * (xi + 3) * f * f) * f
    q = (1 - xi) * (3 + xi) * f * f
    denom = (_check(1 - 2 * f + q, "1 - 2f + (1-xi)(3+xi)f^2")
             * _check(1 + 2 * f + q, "1 + 2f + (1-xi)(3+xi)f^2")
             * _check(1 - f * f * (1 - xi) ** 2, "1 - f^2 (1-xi)^2"))
    if cs.g_tilde == 0:
        # f / G(d) -> 2 g_tilde / [(1 + xi/3)(1 - xi)] without the 0/0
        return complex(a_k), complex(b_k), 0j
    n_k = 0.5 * (f / spinalg.green_function(cs.kappa)) / denom
    return complex(a_k), complex(b_k), complex(n_k)


def plane_wave_born_amplitude(k_dot_d, k0_dot_d):
    """Born amplitude of a plane wave, ``-2i exp(i (k - k0).d / 2)``."""
    return -2j * np.exp(0.5j * (k_dot_d - k0_dot_d))


def smatrix_elements(cs, k_dot_d, k0_dot_d):
    """Full-order amplitudes in factorized form for an incident plane wave.

    Same normalization as :func:`qubitscatter.spinalg.solve_sources_oracle`.
    """
    a_k, b_k, n_k = resummation_factors(cs)
    amp = plane_wave_born_amplitude(k_dot_d, k0_dot_d)
    amp_c = np.conj(amp)
    hop = (1 - cs.xi) * cs.f
    e = np.exp(1j * k_dot_d)
    up_down = n_k * (amp * a_k + amp_c * e * b_k) * (1 - hop / e)
    down_up = -n_k * (amp_c * a_k + amp / e * b_k) * (1 - hop * e)
    return AmplitudePair(complex(up_down), complex(down_up))


@dataclass(frozen=True)
class FullCoeffs:
    xi: complex
    f: complex
    a_k: complex
    b_k: complex
    N_k: complex
    cal_C: complex
    X: complex
    Y: float


def _require_broad_packet(p):
    if p.w_over_d < MIN_W_OVER_D:
        raise UnsupportedRegimeError(
            f"full-order forms need w >> d; got w/d = {p.w_over_d} < {MIN_W_OVER_D}")
    _warn_if_broadband(p)


def xy_from(cs, a_k, b_k, cal_c, k0_dot_d):
    """The numerator ``X`` and denominator ``Y`` of ``C = |X| / Y``."""
    hop = (1 - cs.xi) * cs.f
    e0 = np.exp(1j * k0_dot_d)
    fwd, bwd = a_k - e0 * b_k, a_k - b_k / e0
    hop2 = abs(hop) ** 2
    x = (2 * fwd * (np.conj(a_k) - e0 * np.conj(b_k))
         * (cal_c - hop - np.conj(hop) + np.conj(cal_c) * hop2))
    y = (abs(fwd) ** 2 * (1 + hop2 - 2 * (cal_c * np.conj(hop)).real)
         + abs(bwd) ** 2 * (1 + hop2 - 2 * (cal_c * hop).real))
    return complex(x), float(y)


def full_coeffs(p, calc="series"):
    """All intermediate quantities of the full-order evaluation at one point.

    ``calc`` selects the cap phase average route: ``"series"`` or ``"quad"``.
    """
    _require_broad_packet(p)
    cs = coupling_state(p)
    a_k, b_k, n_k = resummation_factors(cs)
    cal_c = calC(p.kappa, p.thetaD, p.dtheta, method=calc)
    x, y = xy_from(cs, a_k, b_k, cal_c, p.kappa * math.cos(p.theta0))
    return FullCoeffs(cs.xi, cs.f, a_k, b_k, n_k, cal_c, x, y)


def concurrence_full(p, calc="series"):
    fc = full_coeffs(p, calc)
    if fc.Y <= 1e-300:
        raise ZeroYieldError("Y underflows: the post-selected event never occurs")
    return abs(fc.X) / fc.Y


def yield_full(p, calc="series"):
    fc = full_coeffs(p, calc)
    return abs(fc.N_k) ** 2 * fc.Y * p.lateral_damping() / (2 * math.pi ** 3)


def evaluate_full(p, calc="series"):
    """``(C, P_norm)`` from a single coefficient evaluation."""
    fc = full_coeffs(p, calc)
    if fc.Y <= 1e-300:
        raise ZeroYieldError("Y underflows: the post-selected event never occurs")
    return abs(fc.X) / fc.Y, abs(fc.N_k) ** 2 * fc.Y * p.lateral_damping() / (2 * math.pi ** 3)


def strong_coupling_XY(p, calc="series"):
    """``(X, Y, N)`` in the limit ``g_tilde >> 1``; ``N`` still carries ``1/g_tilde``."""
    k = p.kappa
    sat = 1 + np.exp(2j * k) / k ** 2
    if abs(sat) < POLE_TOL:
        raise ResonanceError("1 + exp(2i kappa)/kappa^2 vanishes")
    cal_c = calC(k, p.thetaD, p.dtheta, method=calc)
    e0 = np.exp(1j * k * math.cos(p.theta0))
    hop = np.exp(1j * k) / (1j * k)
    sat2 = abs(sat) ** 2
    x = (2 * sat2 * (1 - hop * e0) * (1 + np.exp(-1j * k) / (1j * k) * e0)
         * (cal_c - 2 * math.sin(k) / k + np.conj(cal_c) / k ** 2))
    y = (sat2 * abs(1 - hop * e0) ** 2
         * (1 + 1 / k ** 2 - 2 * (np.conj(cal_c) * np.exp(1j * k) / k).imag)
         + sat2 * abs(1 - hop / e0) ** 2
         * (1 + 1 / k ** 2 - 2 * (cal_c * np.exp(1j * k) / k).imag))
    if p.g_tilde == 0:
        raise UnsupportedRegimeError("strong-coupling forms need g_tilde > 0")
    n = 4 * math.pi ** 2 / (3 * p.g_tilde * k ** 2) / sat ** 3
    return complex(x), float(y), complex(n)


def evaluate_strong(p, calc="series"):
    x, y, n = strong_coupling_XY(p, calc)
    return abs(x) / y, abs(n) ** 2 * y * p.lateral_damping() / (2 * math.pi ** 3)


def cap_amplitude_quadrature(p, rule_tol=1e-10):
    """Independent route to ``(C, P_norm)``: integrate the oracle amplitudes over the cap.

    Uses the direct two-site solve of :mod:`spinalg` at every node, so it exercises
    neither the factorized amplitudes nor the ``X``/``Y`` reduction.
    """
    from .capquad import integrate_cap

    _require_broad_packet(p)
    cs = coupling_state(p)
    u_a, u_b = spinalg.solve_sources(cs, p.kappa * math.cos(p.theta0))

    def entries(dirs):
        amps = spinalg.outgoing_amplitudes(u_a, u_b, p.kappa * dirs[:, 2])
        ud, du = amps[:, spinalg.DOWN_UP_DOWN], amps[:, spinalg.DOWN_DOWN_UP]
        return np.stack([abs(ud) ** 2, abs(du) ** 2, ud * np.conj(du)], axis=1)

    a11, a22, a12 = integrate_cap(entries, p.cap_rule(rule_tol))
    a11, a22 = a11.real, a22.real
    # |A_pw|^2 = 4 against the Born normalization P_norm = g^2 / pi^3
    scale = p.lateral_damping() / (8 * math.pi ** 3) / p.solid_angle
    return 2 * abs(a12) / (a11 + a22), (a11 + a22) * scale
