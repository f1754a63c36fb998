"""Operator algebra on the three-qubit spin space of X (mediator), A and B.

Operators are plain ``(8, 8)`` complex numpy arrays.  The basis is
``|s_X s_A s_B>`` with up -> 0 and down -> 1, so the index of a basis
state is ``4*s_X + 2*s_A + s_B``.

Natural units hbar = m = d = 1 are used throughout; the dimensionless
inputs are ``kappa = k0 d`` and ``g_tilde = m g_r / (hbar^2 d)``.
"""
from dataclasses import dataclass, field
import itertools

import numpy as np

from .errors import (DegenerateBranchError, DomainError, ResonanceError,
                     SingularSystemError, UnsupportedRegimeError)

UP, DOWN = 0, 1
DIM = 8

# threshold below which a resummation denominator is treated as a pole
POLE_TOL = 1e-12
BRANCH_TOL = 1e-14

_I2 = np.eye(2, dtype=complex)
_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
_QUBITS = {"X": 0, "A": 1, "B": 2}


def basis_index(s_x, s_a, s_b):
    """Index of ``|s_X s_A s_B>`` in the fixed basis (0 = up, 1 = down)."""
    return 4 * s_x + 2 * s_a + s_b


def basis_state(s_x, s_a, s_b):
    v = np.zeros(DIM, dtype=complex)
    v[basis_index(s_x, s_a, s_b)] = 1.0
    return v


def identity():
    return np.eye(DIM, dtype=complex)


def _embed(op, qubit):
    ops = [_I2, _I2, _I2]
    ops[_QUBITS[qubit]] = op
    return np.kron(np.kron(ops[0], ops[1]), ops[2])


def sigma(qubit):
    """The three Pauli matrices of one qubit ("X", "A" or "B") as 8x8 arrays."""
    return tuple(_embed(p, qubit) for p in _PAULI)


def pauli_dot(pair):
    """``sigma^(i) . sigma^(j)`` for ``pair`` in {"XA", "XB", "AB"}."""
    pair = pair.upper()
    if pair not in ("XA", "XB", "AB"):
        raise DomainError(f"unknown qubit pair {pair!r}")
    si, sj = sigma(pair[0]), sigma(pair[1])
    return sum(a @ b for a, b in zip(si, sj))


def cross_operator():
    """``sigma^(X) . (sigma^(B) x sigma^(A))``."""
    sx, sa, sb = sigma("X"), sigma("A"), sigma("B")
    out = np.zeros((DIM, DIM), dtype=complex)
    for i, j, k in itertools.permutations(range(3)):
        sign = 1.0 if (i, j, k) in ((0, 1, 2), (1, 2, 0), (2, 0, 1)) else -1.0
        out += sign * sx[i] @ sb[j] @ sa[k]
    return out


def exchange_sum():
    """``sigma^(X) . (sigma^(A) + sigma^(B))``."""
    return pauli_dot("XA") + pauli_dot("XB")


def total_spin_squared():
    """Casimir ``S^2`` of the total spin (hbar = 1), built component-wise."""
    sx, sa, sb = sigma("X"), sigma("A"), sigma("B")
    out = np.zeros((DIM, DIM), dtype=complex)
    for i in range(3):
        s_i = 0.5 * (sx[i] + sa[i] + sb[i])
        out += s_i @ s_i
    return out


def pair_projector(pair, multiplet):
    """Triplet (``multiplet=3``) or singlet (``multiplet=1``) projector of a qubit pair."""
    dot = pauli_dot(pair)
    if multiplet == 3:
        return 0.25 * (3 * identity() + dot)
    if multiplet == 1:
        return 0.25 * (identity() - dot)
    raise DomainError("multiplet must be 1 or 3")


def _mixing_root(gamma):
    # principal branch; numpy's complex sqrt cuts along the negative real axis
    return np.sqrt(complex((0.25 + 3 * gamma) * (0.25 - gamma)))


def projector(kind, s=1, gamma=0.0):
    """One member of the projector family used to close the multiple-scattering series.

    ``kind`` is one of ``"P"``, ``"Q"`` (these depend on the sign ``s`` and the
    complex parameter ``gamma``), ``"R_plus"``, ``"R_minus"`` or ``"Q_perp"``
    (``P_s(gamma) - R_plus``).
    """
    if s not in (1, -1):
        raise DomainError("s must be +1 or -1")
    one = identity()
    if kind in ("R_plus", "R_minus"):
        sign = 1 if kind == "R_plus" else -1
        return sign / 6 * (exchange_sum() + pauli_dot("AB")) + 0.5 * one
    if kind not in ("P", "Q", "Q_perp"):
        raise DomainError(f"unknown projector kind {kind!r}")
    gamma = complex(gamma)
    p = (s / 2 * _mixing_root(gamma) * cross_operator()
         + 0.5 * (0.25 - gamma) * exchange_sum()
         + gamma * pauli_dot("AB") + 0.75 * one)
    if kind == "P":
        return p
    if kind == "Q":
        return one - p
    return p - projector("R_plus")


@dataclass(frozen=True)
class CouplingState:
    """Self-coupling ``xi`` and inter-site propagation factor ``f`` at one energy.

    ``xi = 6 g_tilde * i kappa / 4 pi`` and
    ``f = (e^{i kappa} / 4 pi) 2 g_tilde / [(1 + xi/3)(1 - xi)]``.
    ``g_tilde_prime`` (the spin-independent renormalized coupling) only
    enters the direct two-projector self-coupling operators.
    """
    xi: complex
    f: complex
    g_tilde: float
    g_tilde_prime: float = 0.0
    kappa: float = 1.0

    @classmethod
    def from_couplings(cls, kappa, g_tilde, g_tilde_prime=0.0):
        if not kappa > 0:
            raise DomainError("kappa must be positive")
        if g_tilde < 0:
            raise DomainError("g_tilde must be non-negative")
        xi = 6.0 * g_tilde * 1j * kappa / (4 * np.pi)
        denom = (1 + xi / 3) * (1 - xi)
        if abs(denom) < BRANCH_TOL:
            raise ResonanceError("(1 + xi/3)(1 - xi) vanishes")
        f = green_function(kappa) * 2.0 * g_tilde / denom
        return cls(xi=complex(xi), f=complex(f), g_tilde=float(g_tilde),
                   g_tilde_prime=float(g_tilde_prime), kappa=float(kappa))


def green_function(kappa):
    """Outgoing Green function between the two sites, ``e^{i kappa} / 4 pi`` (d = 1)."""
    return np.exp(1j * kappa) / (4 * np.pi)


def self_coupling(cs, site):
    """Renormalized effective coupling operator at site "A" or "B".

    Built from the triplet/singlet projectors with the finite part
    ``Omega = i kappa / 4 pi`` of the Green function at the origin; valid for
    any ``g_tilde_prime``.
    """
    pair = {"A": "XA", "B": "XB"}[site]
    omega = 1j * cs.kappa / (4 * np.pi)
    g, gp = cs.g_tilde, cs.g_tilde_prime
    lam3, lam1 = g + gp, -3 * g + gp
    d3, d1 = 1 + 2 * lam3 * omega, 1 + 2 * lam1 * omega
    if abs(d3) < POLE_TOL or abs(d1) < POLE_TOL:
        raise ResonanceError(f"self-coupling pole at site {site}")
    return 2 * (lam3 / d3 * pair_projector(pair, 3)
                + lam1 / d1 * pair_projector(pair, 1))


def kernel_matrix(cs, side="BA"):
    """``G^2(d) B A`` (``side="BA"``) or ``G^2(d) A B`` by direct matrix product."""
    a, b = self_coupling(cs, "A"), self_coupling(cs, "B")
    g2 = green_function(cs.kappa) ** 2
    if side == "BA":
        return g2 * b @ a
    if side == "AB":
        return g2 * a @ b
    raise DomainError("side must be 'BA' or 'AB'")


@dataclass(frozen=True)
class DecompCoeffs:
    """Coefficients expanding the two-site kernel on ``P, R_plus, Q``.

    ``G^2 B A = alpha P_{-branch}(gamma_bar) + beta R_plus + delta Q_{-branch}(gamma_bar)``
    and the ``A B`` ordering uses ``P_{+branch}``, ``Q_{+branch}``.
    """
    gamma_bar: complex
    alpha: complex
    beta: complex
    delta: complex
    branch: int

    def sign_for(self, side):
        if side == "BA":
            return -self.branch
        if side == "AB":
            return self.branch
        raise DomainError("side must be 'BA' or 'AB'")

    def reconstruct(self, side="BA"):
        s = self.sign_for(side)
        return (self.alpha * projector("P", s, self.gamma_bar)
                + self.beta * projector("R_plus")
                + self.delta * projector("Q", s, self.gamma_bar))


def decompose_kernel(cs, branch=1):
    if branch not in (1, -1):
        raise DomainError("branch must be +1 or -1")
    if cs.g_tilde_prime != 0:
        raise UnsupportedRegimeError(
            "projector decomposition requires g_tilde_prime = 0")
    xi, f = cs.xi, cs.f
    rad = 3 - (1 + xi) ** 2
    if abs(rad) < BRANCH_TOL:
        raise DegenerateBranchError("3 - (1 + xi)^2 vanishes")
    root = np.sqrt(complex(rad))
    f2 = f * f
    return DecompCoeffs(
        gamma_bar=complex((1 + branch * 2j * (1 + xi) / root) / 12),
        alpha=complex(f2 * (1 - branch * 1j * root) ** 2),
        beta=complex(2 * f2 * (1 - 2 * xi + branch * 1j * root)),
        delta=complex(f2 * (1 + branch * 1j * root) ** 2),
        branch=branch,
    )


def _check_pole(value, label):
    if abs(value) <= POLE_TOL:
        raise ResonanceError(f"resonance pole: |{label}| = {abs(value):.3e}")
    return value


def resummed_inverse(dc, side="BA"):
    """``[1 - G^2 B A]^{-1}`` (or the ``A B`` partner) from the projector expansion."""
    s = dc.sign_for(side)
    one_a = _check_pole(1 - dc.alpha, "1 - alpha")
    one_d = _check_pole(1 - dc.delta, "1 - delta")
    one_ab = _check_pole(1 - (dc.alpha + dc.beta), "1 - (alpha + beta)")
    return (projector("P", s, dc.gamma_bar) / one_a
            + (1 / one_ab - 1 / one_a) * projector("R_plus")
            + projector("Q", s, dc.gamma_bar) / one_d)


@dataclass(frozen=True)
class AmplitudePair:
    """Post-selected amplitudes into ``|down, up down>`` and ``|down, down up>``.

    Normalized so that the Born limit of ``up_down`` is
    ``g_tilde * (-2i) exp(i (k - k0).d / 2)``.  ``components`` optionally
    holds all eight outgoing spin amplitudes.
    """
    up_down: complex
    down_up: complex
    components: np.ndarray = field(default=None, repr=False, compare=False)


UP_DOWN_DOWN = basis_index(UP, DOWN, DOWN)
DOWN_UP_DOWN = basis_index(DOWN, UP, DOWN)
DOWN_DOWN_UP = basis_index(DOWN, DOWN, UP)


def solve_sources(cs, k0_dot_d, incident_spin=UP_DOWN_DOWN):
    """Solve the two-site source equations directly for ``(u_A, u_B)``.

    The sources ``u_A = Q_XA <-d/2|Psi>`` and ``u_B = Q_XB <d/2|Psi>`` satisfy
    ``u_A + G(d) A u_B = A phi(-d/2)`` and ``u_B + G(d) B u_A = B phi(d/2)``,
    a 16-dimensional linear system solved with a dense LU.
    """
    a_op, b_op = self_coupling(cs, "A"), self_coupling(cs, "B")
    g = green_function(cs.kappa)
    chi = np.zeros(DIM, dtype=complex)
    chi[incident_spin] = 1.0
    system = np.eye(2 * DIM, dtype=complex)
    system[:DIM, DIM:] = g * a_op
    system[DIM:, :DIM] = g * b_op
    rhs = np.concatenate([a_op @ chi * np.exp(-0.5j * k0_dot_d),
                          b_op @ chi * np.exp(0.5j * k0_dot_d)])
    if np.linalg.cond(system) > 1e12:
        raise SingularSystemError("two-site source system is singular")
    try:
        u = np.linalg.solve(system, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(str(exc)) from exc
    return u[:DIM], u[DIM:]


def outgoing_amplitudes(u_a, u_b, k_dot_d):
    """All eight outgoing spin amplitudes for outgoing ``k.d`` (scalar or array)."""
    k_dot_d = np.asarray(k_dot_d, dtype=float)[..., None]
    # hbar^2 / 2m = 1/2 and the -2 pi i delta(E) measure leave an overall -i
    return -0.5j * (np.exp(0.5j * k_dot_d) * u_a + np.exp(-0.5j * k_dot_d) * u_b)


def solve_sources_oracle(cs, k_dot_d, k0_dot_d, incident_spin=UP_DOWN_DOWN):
    """Amplitudes at one outgoing direction from the direct two-site solve.

    ``k_dot_d`` and ``k0_dot_d`` are the outgoing and incident wave vectors
    projected on ``d``.  Independent of the projector resummation.
    """
    u_a, u_b = solve_sources(cs, k0_dot_d, incident_spin)
    out = outgoing_amplitudes(u_a, u_b, k_dot_d)
    return AmplitudePair(up_down=complex(out[DOWN_UP_DOWN]),
                         down_up=complex(out[DOWN_DOWN_UP]),
                         components=out)


@dataclass(frozen=True)
class SectorReport:
    rank_r_plus: int
    casimir_residual: float
    commutator_residual: float
    psi_plus_residual: float
    psi_minus_residual: float
    total_spin_half_residual: float

    def passed(self, tol=1e-12):
        return (self.rank_r_plus == 4
                and max(self.casimir_residual, self.commutator_residual,
                        self.psi_plus_residual, self.psi_minus_residual,
                        self.total_spin_half_residual) <= tol)


def _ab_pair_states():
    up_down, down_up = np.zeros(4, complex), np.zeros(4, complex)
    up_down[1], down_up[2] = 1.0, 1.0
    up_up, down_down = np.zeros(4, complex), np.zeros(4, complex)
    up_up[0], down_down[3] = 1.0, 1.0
    triplet0 = (up_down + down_up) / np.sqrt(2)
    singlet = (up_down - down_up) / np.sqrt(2)
    return up_up, triplet0, down_down, singlet


def sector_states(gamma, s=1):
    """The spin-1/2 states kept by ``P_s(gamma)``: AB-triplet/AB-singlet mixtures."""
    gamma = float(np.real(gamma))
    p = 0.75 - 3 * gamma
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p = 3/4 - 3 gamma = {p} outside [0, 1]")
    x_up, x_down = np.array([1, 0], complex), np.array([0, 1], complex)
    up_up, triplet0, down_down, singlet = _ab_pair_states()
    phi_plus = (np.sqrt(1 / 3) * np.kron(x_up, triplet0)
                - np.sqrt(2 / 3) * np.kron(x_down, up_up))
    phi_minus = (np.sqrt(2 / 3) * np.kron(x_up, down_down)
                 - np.sqrt(1 / 3) * np.kron(x_down, triplet0))
    psi_plus = np.sqrt(1 - p) * phi_plus - 1j * s * np.sqrt(p) * np.kron(x_up, singlet)
    psi_minus = np.sqrt(1 - p) * phi_minus - 1j * s * np.sqrt(p) * np.kron(x_down, singlet)
    return psi_plus, psi_minus


def spin_sector_check(gamma, s=1):
    """Check the spin-sector meaning of ``R_plus`` and ``P_s(gamma)``."""
    r_plus = projector("R_plus")
    s2 = total_spin_squared()
    p = projector("P", s, gamma)
    r_minus = projector("R_minus")
    psi_plus, psi_minus = sector_states(gamma, s)
    return SectorReport(
        rank_r_plus=int(np.linalg.matrix_rank(r_plus, tol=1e-10)),
        casimir_residual=float(np.abs(s2 @ r_plus - 3.75 * r_plus).max()),
        commutator_residual=float(np.abs(s2 @ r_plus - r_plus @ s2).max()),
        psi_plus_residual=float(np.abs(p @ psi_plus - psi_plus).max()),
        psi_minus_residual=float(np.abs(p @ psi_minus - psi_minus).max()),
        total_spin_half_residual=float(max(
            np.abs(r_minus @ psi_plus - psi_plus).max(),
            np.abs(r_minus @ psi_minus - psi_minus).max())),
    )
