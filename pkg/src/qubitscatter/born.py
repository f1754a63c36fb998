"""Lowest-order (Born) concurrence and yield of the post-selected target state.

Everything is dimensionless (hbar = m = d = 1).  Density-matrix entries are
reported in units where ``a11 + a22`` equals the normalized yield times the
detector solid angle, i.e. ``P w^2 / d^2``.
"""
from dataclasses import dataclass
import math
import warnings

import numpy as np

from .capquad import CapRule, cap_solid_angle, integrate_cap
from .errors import DomainError, ZeroYieldError

# below this k0 w the Gaussian-packet closed forms are only indicative
MONOCHROMATIC_THRESHOLD = 10.0


class MonochromaticityWarning(UserWarning):
    pass


@dataclass(frozen=True)
class ScatterParams:
    kappa: float
    w_over_d: float = 10.0
    g_tilde: float = 1.0
    theta0: float = math.pi / 2
    thetaD: float = 0.0
    dtheta: float = math.pi / 15

    def __post_init__(self):
        if not self.kappa > 0:
            raise DomainError("kappa must be positive")
        if not self.w_over_d > 0:
            raise DomainError("w/d must be positive")
        if not self.g_tilde >= 0:
            raise DomainError("g_tilde must be non-negative")
        for name in ("theta0", "thetaD"):
            if not 0 <= getattr(self, name) <= math.pi:
                raise DomainError(f"{name} outside [0, pi]")
        if not 0 < self.dtheta <= math.pi:
            raise DomainError("dtheta outside (0, pi]")

    @classmethod
    def from_degrees(cls, kappa, w_over_d=10.0, g_tilde=1.0, theta0_deg=90.0,
                     thetaD_deg=0.0, dtheta_deg=12.0):
        return cls(kappa, w_over_d, g_tilde, math.radians(theta0_deg),
                   math.radians(thetaD_deg), math.radians(dtheta_deg))

    @property
    def monochromaticity(self):
        """``k0 w``; the closed forms assume it is large."""
        return self.kappa * self.w_over_d

    @property
    def monochromatic_warning(self):
        return self.monochromaticity < MONOCHROMATIC_THRESHOLD

    @property
    def solid_angle(self):
        return cap_solid_angle(self.dtheta)

    def lateral_damping(self):
        """``exp(-[d^2 - (k0.d)^2] / 8 w^2)``, the packet-overlap factor of the yield."""
        return math.exp(-math.sin(self.theta0) ** 2 / (8 * self.w_over_d ** 2))

    def cap_rule(self, tol=1e-10):
        return CapRule(self.thetaD, self.dtheta, tol=tol)


def _warn_if_broadband(p):
    if p.monochromatic_warning:
        warnings.warn(f"k0 w = {p.monochromaticity:.3g} < {MONOCHROMATIC_THRESHOLD}; "
                      "closed forms assume a monochromatic packet",
                      MonochromaticityWarning, stacklevel=3)


@dataclass(frozen=True)
class RhoAB:
    """Non-zero block of the (unnormalized) two-target density matrix."""
    a11: float
    a22: float
    a12: complex

    def __post_init__(self):
        if self.a11 < 0 or self.a22 < 0:
            raise DomainError("diagonal entries must be non-negative")

    @property
    def trace(self):
        return self.a11 + self.a22

    def matrix(self):
        """The 4x4 matrix in the basis up-up, up-down, down-up, down-down (unnormalized)."""
        rho = np.zeros((4, 4), dtype=complex)
        rho[1, 1], rho[2, 2] = self.a11, self.a22
        rho[1, 2], rho[2, 1] = self.a12, np.conj(self.a12)
        return rho

    def is_positive(self, rtol=1e-12):
        return abs(self.a12) ** 2 <= self.a11 * self.a22 * (1 + rtol)


def concurrence_from_rho(rho):
    """``2 |a12| / (a11 + a22)``."""
    if rho.trace <= 0:
        raise ZeroYieldError("a11 + a22 = 0: the post-selected event never occurs")
    return 2 * abs(rho.a12) / rho.trace


def born_amplitude(k_vec, p):
    """Born amplitude ``A(k)`` for outgoing wave vector(s) ``k_vec`` (``(..., 3)``, d along z).

    The monochromatic-packet form, up to its positive real prefactor.  It
    satisfies ``A(-k) = exp(-i k.d) A(k)`` exactly.
    """
    k_vec = np.asarray(k_vec, dtype=float)
    kz = k_vec[..., 2]
    x = np.sum(k_vec ** 2, axis=-1) / p.kappa ** 2 - 1     # E_k / E_k0 - 1
    k0z = p.kappa * math.cos(p.theta0)
    w = p.w_over_d
    return (-1j * np.exp(-(w * p.kappa * x) ** 2 / 4)
            * np.exp(-0.25j * k0z * x)
            * np.exp(0.5j * (kz - k0z))
            * math.sqrt(p.lateral_damping()))


def coherence_integrand(p):
    """Cap integrand of the off-diagonal entry: plane-wave phase times packet Gaussian."""
    c0 = math.cos(p.theta0)
    inv8w2 = 1.0 / (8 * p.w_over_d ** 2)

    def h(dirs):
        z = dirs[:, 2]
        return np.exp(1j * p.kappa * z - (z - c0) ** 2 * inv8w2)
    return h


def born_rho(p, tol=1e-10):
    """Density-matrix block to lowest order, by quadrature over the detector cap."""
    _warn_if_broadband(p)
    prefactor = p.g_tilde ** 2 / (2 * math.pi ** 3) * p.lateral_damping()
    integral = integrate_cap(coherence_integrand(p), p.cap_rule(tol))
    a = prefactor * p.solid_angle
    a12 = prefactor * np.exp(-1j * p.kappa * math.cos(p.theta0)) * integral
    return RhoAB(a11=a, a22=a, a12=complex(a12))


def concurrence_born(p, tol=1e-10):
    rho = born_rho(p, tol)
    if rho.trace == 0:
        # C is a ratio in which g_tilde^2 cancels
        rho = born_rho(ScatterParams(p.kappa, p.w_over_d, 1.0, p.theta0, p.thetaD, p.dtheta), tol)
    return concurrence_from_rho(rho)


def yield_born(p):
    """Normalized yield ``P w^2 / (dOmega d^2) = (g^2/pi^3) exp(-sin^2 theta0 / 8 (w/d)^2)``."""
    _warn_if_broadband(p)
    return p.g_tilde ** 2 / math.pi ** 3 * p.lateral_damping()


@dataclass(frozen=True)
class HighConcurrence:
    large_w_ok: bool
    small_w_ok: bool
    large_w_margin: float
    small_w_margin: float
    small_w_center_margin: float

    @property
    def small_w_center_ok(self):
        return self.small_w_center_margin > 0


def high_concurrence_predicates(p):
    """Conditions for a high concurrence in the large- and small-packet regimes.

    ``large_w_ok``: ``2 kappa sin(theta_D) sin(dtheta) <= 2 pi`` (margin is
    ``2 pi`` minus the left side).  ``small_w_ok``: the path-length difference
    ``|(k - k0).d|`` stays below ``w`` everywhere on the cap (margin is one minus
    its largest value in units of ``w``); the margin at the cap centre is
    reported separately.
    """
    phase_spread = 2 * p.kappa * math.sin(p.thetaD) * math.sin(p.dtheta)
    large_margin = 2 * math.pi - phase_spread
    c0 = math.cos(p.theta0)
    z_hi = math.cos(max(0.0, p.thetaD - p.dtheta))
    z_lo = math.cos(min(math.pi, p.thetaD + p.dtheta))
    worst = max(abs(z_hi - c0), abs(z_lo - c0)) / p.w_over_d
    center = abs(math.cos(p.thetaD) - c0) / p.w_over_d
    return HighConcurrence(
        large_w_ok=large_margin >= 0,
        small_w_ok=worst < 1,
        large_w_margin=large_margin,
        small_w_margin=1 - worst,
        small_w_center_margin=1 - center,
    )
