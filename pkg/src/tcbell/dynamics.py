"""Coherent evolution under the resonant two-atom Tavis-Cummings Hamiltonian.

``H = g * sum_i (sigma+_i a + sigma-_i a^dag)`` in the interaction picture,
with hbar = 1.  Two independent propagators are provided:

* :func:`evolve_exact` sums the analytic solution block by block.  Total
  excitation ``n`` couples ``|0,0,n>``, ``|Psi+,n-1>`` and ``|1,1,n-2>``;
  the block has one dark state and a bright pair at ``+-omega_n`` with
  ``omega_n = g sqrt(4n - 2)``.  ``|Psi-, n>`` is stationary.
* :func:`evolve_oracle` builds the dense Hamiltonian on the truncated joint
  space and applies ``exp(-iHt)`` through a cached Hermitian
  eigendecomposition.  It knows nothing about the block structure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .fock import TAIL_TOL, AtomicState, FieldState, JointState, TruncationError, annihilation

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class ModelParams:
    nbar: float
    g: float = 1.0
    phi: float = 0.0

    def __post_init__(self):
        if not self.g > 0:
            raise ValueError(f"coupling g must be positive, got {self.g}")
        if not self.nbar >= 0:
            raise ValueError(f"mean photon number must be non-negative, got {self.nbar}")

    @classmethod
    def from_alpha(cls, alpha: complex, g: float = 1.0) -> ModelParams:
        return cls(nbar=abs(alpha) ** 2, g=g, phi=float(np.angle(alpha)))

    @property
    def alpha(self) -> complex:
        return math.sqrt(self.nbar) * complex(math.cos(self.phi), math.sin(self.phi))


def revival_time(params: ModelParams) -> float:
    return math.pi / params.g * math.sqrt(4.0 * params.nbar + 2.0)


def collapse_time(params: ModelParams) -> float:
    return 1.0 / (SQRT2 * params.g)


def scaled_time(t: float, params: ModelParams) -> float:
    """Interaction time in units of the revival time."""
    return t / revival_time(params)


def unscaled_time(tau: float, params: ModelParams) -> float:
    return tau * revival_time(params)


def _check_inputs(field: FieldState, t: float) -> None:
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    if abs(field.norm - 1.0) > 1e-10:
        raise ValueError(f"field state not normalized (norm {field.norm})")
    # only the top two Fock levels feed excitation blocks beyond the cutoff
    edge = float(np.sum(field.populations[-2:]))
    if edge >= TAIL_TOL:
        raise TruncationError(
            f"field weight {edge:.3e} in the top two Fock levels; raise the cutoff above {field.cutoff}"
        )


@dataclass(frozen=True, eq=False)
class ExactSolution:
    """Photonic states accompanying ``|0,0>``, ``|1,1>``, ``|Psi+>`` and the stationary ``|Psi->`` branch."""

    chi0: np.ndarray
    chi1: np.ndarray
    chiplus: np.ndarray
    cminus: complex
    field: FieldState

    def joint(self) -> JointState:
        stationary = self.cminus * self.field.amplitudes
        amps = np.array(
            [
                self.chi0,
                (self.chiplus + stationary) / SQRT2,
                (self.chiplus - stationary) / SQRT2,
                self.chi1,
            ]
        )
        return JointState(amps)


def exact_solution(atom: AtomicState, field: FieldState, t: float, g: float = 1.0) -> ExactSolution:
    _check_inputs(field, t)
    comp = atom.computational()
    c0, c1 = comp[0], comp[3]
    cplus = (comp[1] + comp[2]) / SQRT2
    cminus = (comp[1] - comp[2]) / SQRT2

    N = field.cutoff
    # p[k + 2] holds p_k; p_{-2}, p_{-1} and p_{N+1}, p_{N+2} are zero.
    p = np.zeros(N + 5, dtype=complex)
    p[2 : N + 3] = field.amplitudes
    n = np.arange(1, N + 3)
    pn, pn1, pn2 = p[n + 2], p[n + 1], p[n]
    sn, sn1 = np.sqrt(n), np.sqrt(n - 1)
    s = np.sqrt(2 * n - 1)

    bright = (sn * c0 * pn + sn1 * c1 * pn2) / s
    dark = (sn1 * c0 * pn - sn * c1 * pn2) / s
    omega_t = g * np.sqrt(4 * n - 2) * t
    xi_plus = 0.5 * np.exp(1j * omega_t) * (cplus * pn1 - bright)
    xi_minus = 0.5 * np.exp(-1j * omega_t) * (cplus * pn1 + bright)
    diff = xi_minus - xi_plus

    chi0 = np.zeros(N + 1, dtype=complex)
    chi0[0] = c0 * p[2]
    keep = n <= N
    chi0[n[keep]] = ((sn * diff + sn1 * dark) / s)[keep]

    chi1 = np.zeros(N + 1, dtype=complex)
    m = n >= 2
    chi1[n[m] - 2] = ((sn1 * diff - sn * dark) / s)[m]

    chiplus = np.zeros(N + 1, dtype=complex)
    keep = n - 1 <= N
    chiplus[n[keep] - 1] = (xi_minus + xi_plus)[keep]

    return ExactSolution(chi0, chi1, chiplus, cminus, field)


def evolve_exact(atom: AtomicState, field: FieldState, t: float, g: float = 1.0) -> JointState:
    """Closed-form evolution of ``atom (x) field`` for time ``t``.

    Components pushed above the cutoff by the evolution are dropped; the
    input check bounds the lost norm by the weight in the top two levels.
    """
    return exact_solution(atom, field, t, g).joint()


def hamiltonian(cutoff: int, g: float = 1.0) -> np.ndarray:
    """Dense interaction Hamiltonian on ``C^4 (x) C^(cutoff+1)``, atomic index outermost."""
    a = annihilation(cutoff)
    sp = np.array([[0, 0], [1, 0]], dtype=complex)  # |1><0|
    eye2 = np.eye(2)
    splus = np.kron(sp, eye2) + np.kron(eye2, sp)
    coupling = np.kron(splus, a)
    return g * (coupling + coupling.conj().T)


def excitation_number(cutoff: int) -> np.ndarray:
    """Diagonal of ``a^dag a + sum_i sigma+_i sigma-_i``."""
    atomic = np.array([0, 1, 1, 2])
    photons = np.arange(cutoff + 1)
    return (atomic[:, None] + photons[None, :]).ravel().astype(float)


@lru_cache(maxsize=16)
def _eigensystem(cutoff: int, g: float):
    return np.linalg.eigh(hamiltonian(cutoff, g))


def evolve_oracle(atom: AtomicState, field: FieldState, t: float, g: float = 1.0) -> JointState:
    """Brute-force ``exp(-iHt)`` by diagonalizing the full truncated Hamiltonian."""
    _check_inputs(field, t)
    energies, vecs = _eigensystem(field.cutoff, float(g))
    psi0 = JointState.product(atom, field).amplitudes.ravel()
    psit = vecs @ (np.exp(-1j * energies * t) * (vecs.conj().T @ psi0))
    return JointState(psit.reshape(4, field.cutoff + 1))


def energy(state: JointState, g: float = 1.0) -> float:
    psi = state.to_computational().amplitudes.ravel()
    return float(np.vdot(psi, hamiltonian(state.cutoff, g) @ psi).real)


def mean_excitations(state: JointState) -> float:
    psi = state.to_computational().amplitudes.ravel()
    return float(np.dot(excitation_number(state.cutoff), np.abs(psi) ** 2))
