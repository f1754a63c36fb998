"""The detector-cap phase average ``calC = (1/dOmega) int_cap exp(i kappa k.d)``.

Three routes are offered: an exact double power series obtained from a
residue expansion, its small-aperture truncation, and cap quadrature.
"""
from dataclasses import dataclass

import numpy as np

from .capquad import cap_solid_angle, plane_wave_average
from .errors import ConvergenceError, DomainError

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class SeriesCtl:
    tol: float = 1e-12
    max_terms: int = 400
    # refuse results whose worst-case rounding error (eps * sum |terms|) exceeds this
    max_roundoff: float = 1e-9


def _exp_tail(x, ell, max_terms):
    """``sum_{m > ell} x^m / m!`` and the sum of the moduli of its terms."""
    # leading term x^(ell+1)/(ell+1)! times 1F1(1; ell+2; x)
    lead = 1.0 + 0j
    for m in range(1, ell + 2):
        lead *= x / m
    h, term, mag = 1.0 + 0j, 1.0 + 0j, 1.0
    for j in range(1, max_terms + 1):
        term *= x / (ell + 1 + j)
        h += term
        mag += abs(term)
        if abs(term) <= _EPS * abs(h) * 1e-2:
            break
    return lead * h, abs(lead) * mag


def _double_sum(x, y, ctl, scale):
    """``sum_{n >= 0} sum_{l <= n} x^(n+1) y^l / ((n+1)! l!)``, summed over ``l`` first.

    Returns the sum, a rigorous bound on the neglected ``l`` tail and an
    estimate of the accumulated rounding error (both already multiplied by
    ``scale``).
    """
    ax, ay = abs(x), abs(y)
    total, roundoff = 0j, 0.0
    y_pow = 1.0 + 0j                      # y^l / l!
    majorant = ax * np.exp(ax)            # |y|^l |x|^(l+1) e^|x| / (l! (l+1)!)
    for ell in range(ctl.max_terms):
        if ell:
            y_pow *= y / ell
        tail, tail_mag = _exp_tail(x, ell, ctl.max_terms)
        total += y_pow * tail
        roundoff += abs(y_pow) * tail_mag * _EPS
        ratio = ax * ay / ((ell + 1) * (ell + 2))
        majorant *= ratio
        if ratio < 1:
            bound = majorant / (1 - ax * ay / ((ell + 2) * (ell + 3)))
            if scale * bound <= ctl.tol:
                return total, scale * bound, scale * roundoff
    return total, np.inf, scale * roundoff


def calC_series(kappa, theta_D, dtheta, ctl=SeriesCtl(), imag_unit=1j):
    """Exact series for the cap average of ``exp(i kappa k.d)``.

    ``imag_unit=-1j`` evaluates the same expression with ``i -> -i`` term by
    term, which must give the complex conjugate.  Raises
    :class:`ConvergenceError` when the tail bound is still above ``ctl.tol``
    after ``ctl.max_terms`` terms, or when cancellation between terms has
    eaten the requested accuracy (large ``kappa sin^2(dtheta/2)``).
    """
    if not kappa > 0:
        raise DomainError("kappa must be positive")
    d_omega = cap_solid_angle(dtheta)
    s2, c2 = np.sin(dtheta / 2) ** 2, np.cos(dtheta / 2) ** 2
    ch2, sh2 = np.cos(theta_D / 2) ** 2, np.sin(theta_D / 2) ** 2
    ik = 2 * imag_unit * kappa
    scale = 2 * np.pi / (kappa * d_omega)
    half = SeriesCtl(ctl.tol / 2, ctl.max_terms, ctl.max_roundoff)
    first, b1, r1 = _double_sum(ik * ch2 * s2, ik * sh2 * c2, half, scale)
    second, b2, r2 = _double_sum(-ik * sh2 * s2, -ik * ch2 * c2, half, scale)
    phase = np.exp(imag_unit * kappa * np.cos(theta_D) * np.cos(dtheta))
    value = -imag_unit * scale * (first - second) * phase
    bound, roundoff = b1 + b2, r1 + r2
    if not bound <= ctl.tol:
        raise ConvergenceError(
            f"series tail bound {bound:.3e} above tol after {ctl.max_terms} terms",
            estimate=complex(value), error=bound)
    if roundoff > ctl.max_roundoff:
        raise ConvergenceError(
            f"cancellation in the series leaves ~{roundoff:.1e} rounding error",
            estimate=complex(value), error=roundoff)
    return complex(value)


def calC_approx(kappa, theta_D, dtheta):
    """Small-aperture truncation, accurate through fourth order in ``dtheta``."""
    s2 = np.sin(dtheta / 2) ** 2
    c = np.cos(theta_D)
    return complex(np.exp(1j * kappa * c)
                   * (1 - 0.5 * kappa ** 2 * np.sin(theta_D) ** 2 * s2 - 1j * kappa * c * s2))


def concurrence_approx(kappa, theta_D, dtheta):
    """``1 - (1/2) kappa^2 sin^2(theta_D) sin^2(dtheta/2)``."""
    return 1 - 0.5 * kappa ** 2 * np.sin(theta_D) ** 2 * np.sin(dtheta / 2) ** 2


def calC_quad(kappa, theta_D, dtheta, tol=1e-11):
    return plane_wave_average(kappa, theta_D, dtheta, tol=tol)


def calC(kappa, theta_D, dtheta, method="series"):
    """Dispatch to the series (default) or the quadrature route."""
    if method == "series":
        return calC_series(kappa, theta_D, dtheta)
    if method == "quad":
        return calC_quad(kappa, theta_D, dtheta)
    raise DomainError(f"unknown method {method!r}")
