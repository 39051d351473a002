"""Large-``nbar`` approximation of the joint state.

Expanding the block frequencies to second order around ``nbar + 1`` splits the
state into three atom-field branches::

    (c- Psi- + d- Phi-_phi) |alpha>
    + (c+ - d+)/2 (Psi+ - Phi+_{phi + 2 pi tau}) |alpha_tau^+>
    + (c+ + d+)/2 (Psi+ + Phi+_{phi - 2 pi tau}) |alpha_tau^->

where ``phi = arg(alpha)`` and ``|alpha_tau^+->`` carry the photon-number
dependent phases of :func:`photon_branch`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .dynamics import ModelParams, evolve_exact, unscaled_time
from .fock import (
    AtomicState,
    FieldState,
    JointState,
    bell_vector,
    coherent_state,
    default_cutoff,
    inner_product,
)
from .overlaps import branch_phases


class ApproximationValidityWarning(UserWarning):
    """The interaction time exceeds the range of the second-order expansion."""


def validity_limit(nbar: float) -> float:
    """Scaled time ``sqrt(nbar) / (2 pi)`` where third-order terms stop being negligible."""
    return math.sqrt(nbar) / (2.0 * math.pi)


def photon_branch(alpha: complex, tau: float, sign: int, cutoff: int | None = None) -> FieldState:
    if sign not in (-1, 1):
        raise ValueError(f"sign must be -1 or +1, got {sign}")
    if tau < 0:
        raise ValueError("tau must be non-negative")
    nbar = abs(alpha) ** 2
    coh = coherent_state(alpha, cutoff)
    phases = sign * branch_phases(nbar, tau, coh.cutoff)
    return FieldState(coh.amplitudes * np.exp(1j * phases))


@dataclass(frozen=True, eq=False)
class ApproxState:
    """Three branches of the approximate state with their unnormalized atomic companions."""

    atom: AtomicState
    alpha: complex
    tau: float
    stationary: FieldState
    plus: FieldState
    minus: FieldState
    companion_stationary: np.ndarray
    companion_plus: np.ndarray
    companion_minus: np.ndarray

    def unnormalized(self) -> np.ndarray:
        return (
            np.outer(self.companion_stationary, self.stationary.amplitudes)
            + np.outer(self.companion_plus, self.plus.amplitudes)
            + np.outer(self.companion_minus, self.minus.amplitudes)
        )

    @property
    def normalization(self) -> float:
        """Numerical norm of the branch sum (the authoritative ``N_tau``)."""
        return float(np.linalg.norm(self.unnormalized()))

    def joint(self) -> JointState:
        amps = self.unnormalized()
        return JointState(amps / np.linalg.norm(amps))


def _warn_validity(nbar: float, tau: float) -> None:
    if tau >= validity_limit(nbar):
        warnings.warn(
            f"tau={tau:g} is beyond sqrt(nbar)/(2 pi)={validity_limit(nbar):.4g}; "
            "the second-order approximation is unreliable here",
            ApproximationValidityWarning,
            stacklevel=3,
        )


def approx_state(
    atom: AtomicState, alpha: complex, tau: float, cutoff: int | None = None
) -> ApproxState:
    if abs(atom.norm - 1.0) > 1e-10:
        raise ValueError(f"atomic state not normalized (norm {atom.norm})")
    nbar = abs(alpha) ** 2
    if cutoff is None:
        cutoff = default_cutoff(nbar)
    _warn_validity(nbar, tau)
    phi = float(np.angle(alpha))
    a = atom.rebased(phi)
    rot = 2.0 * math.pi * tau
    psi_m, psi_p = bell_vector("psi-", phi), bell_vector("psi+", phi)

    return ApproxState(
        atom=a,
        alpha=complex(alpha),
        tau=tau,
        stationary=coherent_state(alpha, cutoff),
        plus=photon_branch(alpha, tau, +1, cutoff),
        minus=photon_branch(alpha, tau, -1, cutoff),
        companion_stationary=a.cminus * psi_m + a.dminus * bell_vector("phi-", phi),
        companion_plus=0.5 * (a.cplus - a.dplus) * (psi_p - bell_vector("phi+", phi + rot)),
        companion_minus=0.5 * (a.cplus + a.dplus) * (psi_p + bell_vector("phi+", phi - rot)),
    )


def normalization_closed_form(
    atom: AtomicState, alpha: complex, tau: float, cutoff: int | None = None
) -> float:
    """``N_tau`` from the branch overlaps, without assembling the joint state."""
    a = atom.rebased(float(np.angle(alpha)))
    coh = coherent_state(alpha, cutoff)
    plus = photon_branch(alpha, tau, +1, coh.cutoff)
    minus = photon_branch(alpha, tau, -1, coh.cutoff)
    z = inner_product(minus, coh)
    w = inner_product(minus, plus)
    s = math.sin(2.0 * math.pi * tau)
    sq = (
        1.0
        + (np.conj(a.cplus + a.dplus) * (a.cplus - a.dplus) * w).real * s**2
        + 2.0 * (a.dminus * np.conj(a.dplus)).real * z.imag * s
        + 2.0 * (np.conj(a.cplus) * a.dminus).imag * z.real * s
    )
    return math.sqrt(sq)


def approximation_fidelity(
    atom: AtomicState,
    alpha: complex,
    tau: float,
    g: float = 1.0,
    cutoff: int | None = None,
) -> float:
    """``|<approx_tau | exact(t_r tau)>|^2``."""
    approx = approx_state(atom, alpha, tau, cutoff).joint()
    field = coherent_state(alpha, approx.cutoff)
    t = unscaled_time(tau, ModelParams.from_alpha(alpha, g))
    exact = evolve_exact(atom, field, t, g)
    return min(1.0, approx.fidelity(exact))
