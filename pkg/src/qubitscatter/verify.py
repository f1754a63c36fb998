"""Seeded invariant suite run by ``qubitscatter verify``.

Every check returns a worst-case residual (or margin) and a threshold; the
manifest is one ``PASS``/``FAIL`` line per check and depends only on the seed.
"""
from dataclasses import dataclass
import math
import warnings

import numpy as np

from . import spinalg
from .appxseries import calC_quad, calC_series
from .born import ScatterParams, born_amplitude, concurrence_born, yield_born
from .fullorder import (coupling_state, evaluate_full, evaluate_strong, smatrix_elements)

KAPPA_GRID = (0.5, math.pi, 10.0, 25.0)
G_GRID = (1e-3, 0.1, 1.0, 10.0, 1e3)


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    threshold: float
    passed: bool

    def line(self):
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} {self.name} value={self.value:.3e} threshold={self.threshold:.1e}"


def _below(name, value, threshold):
    return CheckResult(name, float(value), threshold, bool(value <= threshold))


def _above(name, value, threshold):
    return CheckResult(name, float(value), threshold, bool(value > threshold))


def _max_abs(m):
    return float(np.max(np.abs(m)))


def check_projectors(rng, draws=100):
    one = spinalg.identity()
    worst = 0.0
    r_p, r_m = spinalg.projector("R_plus"), spinalg.projector("R_minus")
    for _ in range(draws):
        gamma = complex(rng.normal(), rng.normal())
        s = int(rng.choice([-1, 1]))
        p, q = spinalg.projector("P", s, gamma), spinalg.projector("Q", s, gamma)
        worst = max(worst, _max_abs(p + q - one), _max_abs(p @ q), _max_abs(q @ p),
                    _max_abs(p @ p - p), _max_abs(p @ r_p - r_p), _max_abs(q @ r_m - q))
    worst = max(worst, _max_abs(r_p + r_m - one), _max_abs(r_p @ r_m), _max_abs(r_p @ r_p - r_p))
    return _below("projector_relations", worst, 1e-12)


def check_kernel():
    recon = inverse = branch = 0.0
    one = spinalg.identity()
    for kappa in KAPPA_GRID:
        for g in G_GRID:
            cs = spinalg.CouplingState.from_couplings(kappa, g)
            scale = max(1.0, _max_abs(spinalg.kernel_matrix(cs)))
            for side in ("BA", "AB"):
                direct = spinalg.kernel_matrix(cs, side)
                per_branch = []
                for br in (1, -1):
                    dc = spinalg.decompose_kernel(cs, br)
                    recon = max(recon, _max_abs(dc.reconstruct(side) - direct) / scale)
                    inv = spinalg.resummed_inverse(dc, side)
                    inverse = max(inverse, _max_abs(inv @ (one - direct) - one))
                    per_branch.append(inv)
                branch = max(branch, _max_abs(per_branch[0] - per_branch[1]))
    return [_below("kernel_reconstruction", recon, 1e-12),
            _below("resummed_inverse", inverse, 1e-11),
            _below("branch_independence", branch, 1e-10)]


def _random_point(rng):
    return (float(rng.uniform(0.3, 30)), float(10 ** rng.uniform(-3, 3)),
            float(rng.uniform(0, math.pi)), float(rng.uniform(0, math.pi)))


def check_oracle(rng, draws=100):
    worst = 0.0
    for _ in range(draws):
        kappa, g, theta0, theta = _random_point(rng)
        cs = coupling_state(ScatterParams(kappa, g_tilde=g, theta0=theta0))
        kd, k0d = kappa * math.cos(theta), kappa * math.cos(theta0)
        fact = smatrix_elements(cs, kd, k0d)
        ref = spinalg.solve_sources_oracle(cs, kd, k0d)
        size = max(abs(ref.up_down), abs(ref.down_up))
        worst = max(worst, abs(fact.up_down - ref.up_down) / size,
                    abs(fact.down_up - ref.down_up) / size)
    return _below("oracle_equivalence", worst, 1e-10)


def check_series():
    worst = axial = 0.0
    for kappa in (1.0, 5.0, 10.0, 25.0):
        for theta_d in (0.0, math.pi / 6, math.pi / 2, 5 * math.pi / 6, math.pi):
            for dtheta in (math.pi / 25, math.pi / 15, math.pi / 6):
                worst = max(worst, abs(calC_series(kappa, theta_d, dtheta)
                                       - calC_quad(kappa, theta_d, dtheta)))
                if theta_d == 0.0:
                    s2 = math.sin(dtheta / 2) ** 2
                    exact = ((np.exp(1j * kappa) - np.exp(1j * kappa * math.cos(dtheta)))
                             / (2j * kappa * s2))
                    axial = max(axial, abs(calC_series(kappa, 0.0, dtheta) - exact))
    return [_below("series_vs_quadrature", worst, 1e-8),
            _below("series_axial_closed_form", axial, 1e-10)]


def check_spin_sectors():
    worst, rank_ok = 0.0, True
    for gamma in (0.0, 0.125, 0.25):
        for s in (1, -1):
            rep = spinalg.spin_sector_check(gamma, s)
            rank_ok &= rep.rank_r_plus == 4
            worst = max(worst, rep.casimir_residual, rep.commutator_residual,
                        rep.psi_plus_residual, rep.psi_minus_residual)
    return _below("spin_sectors", worst if rank_ok else math.inf, 1e-12)


def check_born(rng, draws=20):
    mirror = bounds = flat = 0.0
    for _ in range(draws):
        kappa, _, theta0, theta_d = _random_point(rng)
        p = ScatterParams(kappa, w_over_d=float(rng.uniform(2, 50)), theta0=theta0,
                          thetaD=theta_d, dtheta=float(rng.uniform(0.05, 1.0)))
        k = kappa * np.array([math.sin(theta_d), 0.0, math.cos(theta_d)])
        mirror = max(mirror, abs(born_amplitude(-k, p)
                                 - np.exp(-1j * k[2]) * born_amplitude(k, p)))
        c = concurrence_born(p)
        bounds = max(bounds, -c, c - 1)
        p_flip = ScatterParams(p.kappa, p.w_over_d, p.g_tilde, p.theta0, 0.0, p.dtheta)
        flat = max(flat, abs(yield_born(p) - yield_born(p_flip)))
    return [_below("born_mirror_relation", mirror, 1e-12),
            _below("born_concurrence_bounds", bounds, 0.0),
            _below("born_yield_flat", flat, 1e-12)]


def _polar(g, w=1e3, kappa=10.0, n=19, fn=evaluate_full):
    out = []
    for theta_d in np.linspace(0, math.pi, n):
        out.append(fn(ScatterParams(kappa, w, g, math.pi / 2, float(theta_d), math.pi / 15)))
    return np.array(out)


def check_limits():
    weak = _polar(1e-6)
    born = np.array([(concurrence_born(ScatterParams(10.0, 1e3, 1e-6, math.pi / 2, float(t),
                                                     math.pi / 15)),
                      yield_born(ScatterParams(10.0, 1e3, 1e-6, math.pi / 2, float(t),
                                               math.pi / 15)))
                     for t in np.linspace(0, math.pi, 19)])
    strong, sat = _polar(1e3), _polar(1e2)
    limit = _polar(1e3, fn=evaluate_strong)
    unit = _polar(1.0)
    return [
        _below("born_recovery_concurrence", np.max(np.abs(weak[:, 0] - born[:, 0])), 1e-4),
        _below("born_recovery_yield", np.max(np.abs(weak[:, 1] / born[:, 1] - 1)), 1e-3),
        _below("strong_coupling_forms", np.max(np.abs(limit[:, 0] / strong[:, 0] - 1)), 1e-2),
        _below("saturation", np.max(np.abs(sat[:, 0] - strong[:, 0])), 0.02),
        _below("yield_decade_ratio_log2", abs(math.log2(np.mean(strong[:, 1])
                                                       / np.mean(sat[:, 1]) / 1e-2)), 1.0),
        _above("full_yield_oscillation", unit[:, 1].max() / unit[:, 1].min(), 1.01),
        _below("full_concurrence_bounds", max(0.0, -unit[:, 0].min(), unit[:, 0].max() - 1), 0.0),
    ]


def run_suite(seed=42):
    """Run every check with RNG seeded by ``seed``; returns the list of results."""
    rng = np.random.default_rng(seed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        results = [check_projectors(rng)]
        results += check_kernel()
        results.append(check_oracle(rng))
        results += check_series()
        results.append(check_spin_sectors())
        results += check_born(rng)
        results += check_limits()
    return results


def manifest(results, seed):
    lines = [f"# verify seed={seed}"]
    lines += [r.line() for r in results]
    n_fail = sum(not r.passed for r in results)
    lines.append(f"# {len(results) - n_fail}/{len(results)} passed")
    return "\n".join(lines) + "\n"
