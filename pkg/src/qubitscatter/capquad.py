"""Quadrature over a spherical cap (the detector mouth).

The cap has half-angle ``dtheta`` around the direction ``k_D``.  With the
target axis ``d`` along z, ``k_D`` is obtained by rotating z about the
y-axis by ``theta_D``.  Nodes are Gauss-Legendre in ``cos(theta)`` on
``[cos(dtheta), 1]`` times a periodic trapezoid in the azimuth, both in the
cap-local frame.
"""
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConvergenceError, DomainError


def cap_solid_angle(dtheta):
    """Solid angle ``4 pi sin^2(dtheta / 2)`` of a cap of half-angle ``dtheta``."""
    if not 0 < dtheta <= np.pi:
        raise DomainError(f"cap half-angle {dtheta} outside (0, pi]")
    return 4 * np.pi * np.sin(dtheta / 2) ** 2


@dataclass(frozen=True)
class CapRule:
    theta_D: float
    dtheta: float
    n_theta: int = 16
    n_phi: int = 32
    tol: float = 1e-9
    max_doublings: int = 12

    def __post_init__(self):
        if not 0 <= self.theta_D <= np.pi:
            raise DomainError(f"theta_D = {self.theta_D} outside [0, pi]")
        if not 0 < self.dtheta <= np.pi:
            raise DomainError(f"dtheta = {self.dtheta} outside (0, pi]")
        if self.n_theta < 4 or self.n_phi < 4:
            raise DomainError("need at least 4 nodes per axis")

    @property
    def solid_angle(self):
        return cap_solid_angle(self.dtheta)

    def refined(self):
        return replace(self, n_theta=2 * self.n_theta, n_phi=2 * self.n_phi)

    def nodes(self):
        """Unit vectors (``(n_theta * n_phi, 3)``) and weights summing to the solid angle."""
        x, w = np.polynomial.legendre.leggauss(self.n_theta)
        lo = np.cos(self.dtheta)
        cos_t = 0.5 * (1 - lo) * x + 0.5 * (1 + lo)
        w_t = 0.5 * (1 - lo) * w
        sin_t = np.sqrt(np.clip(1 - cos_t ** 2, 0.0, None))
        phi = 2 * np.pi * np.arange(self.n_phi) / self.n_phi
        ct, st = cos_t[:, None], sin_t[:, None]
        local = np.stack(np.broadcast_arrays(st * np.cos(phi), st * np.sin(phi), ct), axis=-1)
        c, s = np.cos(self.theta_D), np.sin(self.theta_D)
        rot = np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])
        dirs = local.reshape(-1, 3) @ rot.T
        weights = np.repeat(w_t, self.n_phi) * (2 * np.pi / self.n_phi)
        return dirs, weights


def _apply(f, rule):
    dirs, weights = rule.nodes()
    values = np.asarray(f(dirs), dtype=complex)
    w = weights.reshape((-1,) + (1,) * (values.ndim - 1))
    return np.sum(values * w, axis=0), np.sum(np.abs(values) * w, axis=0)


def integrate_cap(f, rule):
    """Integrate ``f(directions) -> complex`` over the cap with node doubling.

    ``f`` receives an ``(n, 3)`` array of unit vectors in the global frame
    (``d`` along z) and must return ``n`` values, or an ``(n, m)`` array for
    ``m`` integrands sharing the nodes.  Node counts double until
    successive estimates agree to ``rule.tol`` relative to the integral of
    ``|f|``, which stays meaningful when the result itself nearly cancels.
    """
    estimate, _ = _apply(f, rule)
    current, change = rule, np.inf
    for _ in range(rule.max_doublings):
        current = current.refined()
        new, scale = _apply(f, current)
        change = np.max(np.abs(new - estimate) / np.maximum(scale, np.finfo(float).tiny))
        estimate = new
        if change <= rule.tol:
            return new if np.ndim(new) else complex(new)
    raise ConvergenceError(
        f"cap quadrature not converged after {rule.max_doublings} doublings",
        estimate=estimate, error=change)


def cap_average(f, rule):
    """``integrate_cap`` divided by the cap solid angle."""
    return integrate_cap(f, rule) / rule.solid_angle


def plane_wave_average(kappa, theta_D, dtheta, **rule_kw):
    """Cap average of ``exp(i kappa k.d)``, the quadrature route to the phase integral."""
    rule = CapRule(theta_D, dtheta, **rule_kw)
    return cap_average(lambda k: np.exp(1j * kappa * k[:, 2]), rule)
