import itertools
import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest

from qubitscatter import spinalg
from qubitscatter.errors import (DegenerateBranchError, DomainError, ResonanceError,
                                 UnsupportedRegimeError)

I8 = np.eye(8)
KAPPAS = (0.5, math.pi, 10.0, 25.0)
GS = (1e-3, 0.1, 1.0, 10.0, 1e3)
complex_gamma = st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False)


def test_basis_order():
    assert spinalg.basis_index(0, 0, 0) == 0
    assert spinalg.basis_index(1, 0, 1) == 5
    assert spinalg.UP_DOWN_DOWN == 3


@pytest.mark.parametrize("pair", ["XA", "XB", "AB"])
def test_pauli_dot_identities(pair):
    dot = spinalg.pauli_dot(pair)
    np.testing.assert_allclose(dot, dot.conj().T, atol=1e-13)
    np.testing.assert_allclose(dot @ dot, 3 * I8 - 2 * dot, atol=1e-13)
    assert abs(np.trace(dot)) < 1e-13
    up = spinalg.basis_state(0, 0, 0)
    np.testing.assert_allclose(dot @ up, up, atol=1e-14)


def test_unknown_pair_rejected():
    with pytest.raises(DomainError):
        spinalg.pauli_dot("XY")


def test_total_spin_spectrum():
    s2 = spinalg.total_spin_squared()
    # two doublets (3/4) and one quartet (15/4)
    np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(s2)),
                               [0.75] * 4 + [3.75] * 4, atol=1e-12)


def test_cross_operator_is_hermitian():
    c = spinalg.cross_operator()
    np.testing.assert_allclose(c, c.conj().T, atol=1e-13)


@settings(max_examples=40, deadline=None)
@given(gamma=complex_gamma, s=st.sampled_from([1, -1]))
def test_projective_relations(gamma, s):
    p, q = spinalg.projector("P", s, gamma), spinalg.projector("Q", s, gamma)
    rp, rm = spinalg.projector("R_plus"), spinalg.projector("R_minus")
    scale = max(1.0, np.abs(p).max())
    for residual in (p + q - I8, p @ q, q @ p, p @ p - p, p @ rp - rp, q @ rm - q):
        assert np.abs(residual).max() <= 1e-12 * scale ** 2


def test_r_projectors():
    rp, rm = spinalg.projector("R_plus"), spinalg.projector("R_minus")
    np.testing.assert_allclose(rp + rm, I8, atol=1e-14)
    np.testing.assert_allclose(rp @ rm, 0, atol=1e-14)
    np.testing.assert_allclose(rp @ rp, rp, atol=1e-14)


def test_q_perp_orthogonal_to_r_plus():
    qp = spinalg.projector("Q_perp", 1, 0.1)
    np.testing.assert_allclose(qp @ spinalg.projector("R_plus"), 0, atol=1e-13)


def test_decomposition_at_zero_xi():
    cs = spinalg.CouplingState(xi=0j, f=0.3 + 0.1j, g_tilde=1.0, kappa=1.0)
    f2 = cs.f ** 2
    for br in (1, -1):
        dc = spinalg.decompose_kernel(cs, br)
        r2 = 1j * math.sqrt(2) * br
        assert dc.gamma_bar == pytest.approx((1 + r2) / 12, abs=1e-15)
        assert dc.alpha / f2 == pytest.approx((1 - r2) ** 2, abs=1e-14)
        assert dc.beta / f2 == pytest.approx(2 * (1 + r2), abs=1e-14)
        assert dc.delta / f2 == pytest.approx((1 + r2) ** 2, abs=1e-14)


@pytest.mark.parametrize("kappa,g", list(itertools.product(KAPPAS, GS)))
def test_kernel_reconstruction_and_inverse(kappa, g):
    cs = spinalg.CouplingState.from_couplings(kappa, g)
    for side in ("BA", "AB"):
        direct = spinalg.kernel_matrix(cs, side)
        inverses = []
        for br in (1, -1):
            dc = spinalg.decompose_kernel(cs, br)
            np.testing.assert_allclose(dc.reconstruct(side), direct, atol=1e-12)
            inv = spinalg.resummed_inverse(dc, side)
            np.testing.assert_allclose(inv @ (I8 - direct), I8, atol=1e-11)
            np.testing.assert_allclose(inv, np.linalg.inv(I8 - direct), atol=1e-10)
            inverses.append(inv)
        np.testing.assert_allclose(inverses[0], inverses[1], atol=1e-10)


def test_free_theory_inverse_is_identity():
    cs = spinalg.CouplingState.from_couplings(3.0, 0.0)
    np.testing.assert_allclose(spinalg.resummed_inverse(spinalg.decompose_kernel(cs)), I8)


def test_coupling_state_values():
    cs = spinalg.CouplingState.from_couplings(10.0, 1.0)
    assert cs.xi == pytest.approx(4.774648292756860j, rel=1e-14)
    assert spinalg.CouplingState.from_couplings(10.0, 0.0).f == 0


def test_decompose_rejects_exchange_coupling():
    cs = spinalg.CouplingState.from_couplings(2.0, 1.0, g_tilde_prime=0.5)
    with pytest.raises(UnsupportedRegimeError):
        spinalg.decompose_kernel(cs)


def test_degenerate_branch_detected():
    cs = spinalg.CouplingState(xi=complex(math.sqrt(3) - 1), f=0.1, g_tilde=1.0)
    with pytest.raises(DegenerateBranchError):
        spinalg.decompose_kernel(cs)


def test_resonance_pole_detected():
    dc = spinalg.DecompCoeffs(gamma_bar=0.1, alpha=1.0, beta=0.2, delta=0.3, branch=1)
    with pytest.raises(ResonanceError):
        spinalg.resummed_inverse(dc)


def test_oracle_born_limit():
    g, kappa, theta0, theta = 1e-8, 7.0, 1.1, 0.4
    cs = spinalg.CouplingState.from_couplings(kappa, g)
    kd, k0d = kappa * math.cos(theta), kappa * math.cos(theta0)
    amp = spinalg.solve_sources_oracle(cs, kd, k0d)
    # site A radiates with phase exp(i (k - k0).d / 2), site B with its conjugate
    assert abs(amp.up_down / (g * -2j * np.exp(0.5j * (kd - k0d))) - 1) < 1e-6
    assert abs(amp.down_up / (g * -2j * np.exp(-0.5j * (kd - k0d))) - 1) < 1e-6


def test_oracle_spin_conservation():
    cs = spinalg.CouplingState.from_couplings(4.0, 2.0)
    amp = spinalg.solve_sources_oracle(cs, 1.0, -0.5)
    # only the total-S_z = -1/2 states are reachable from up-down-down
    for idx in range(8):
        n_down = bin(idx).count("1")
        if n_down != 2:
            assert amp.components[idx] == 0


@pytest.mark.parametrize("gamma", [0.0, 0.125, 0.25])
@pytest.mark.parametrize("s", [1, -1])
def test_spin_sectors(gamma, s):
    rep = spinalg.spin_sector_check(gamma, s)
    assert rep.rank_r_plus == 4
    assert rep.passed(1e-12)


def test_sector_states_domain():
    with pytest.raises(DomainError):
        spinalg.sector_states(0.3)
