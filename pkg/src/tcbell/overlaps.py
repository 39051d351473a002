"""Overlaps of the rotating field branches with the coherent states ``|+-alpha>``.

The exact overlap ``<j alpha | alpha_tau^sign>`` is a Poisson-weighted phase
sum; the asymptotic form keeps only the dominant Gaussian term after Poisson
summation, which is accurate for ``4 nbar >> tau^2``.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .fock import coherent_state, default_cutoff


class AsymptoticValidityWarning(UserWarning):
    """Parameters lie outside the regime of an asymptotic approximation."""


@dataclass(frozen=True)
class OverlapParams:
    """``j = -1`` selects ``<-alpha|``, ``j = +1`` selects ``<alpha|``; ``sign`` picks ``|alpha_tau^+->``."""

    nbar: float
    tau: float
    j: int = -1
    sign: int = 1

    def __post_init__(self):
        if self.j not in (-1, 1):
            raise ValueError(f"j must be -1 or +1, got {self.j}")
        if self.sign not in (-1, 1):
            raise ValueError(f"sign must be -1 or +1, got {self.sign}")
        if self.nbar < 0:
            raise ValueError("nbar must be non-negative")


def branch_phases(nbar: float, tau: float, cutoff: int) -> np.ndarray:
    """Phase ``2 pi tau [nbar + 1 + n - (n - nbar)^2 / (4 nbar + 2)]`` for ``n = 0..cutoff``."""
    n = np.arange(cutoff + 1)
    return 2.0 * math.pi * tau * (nbar + 1.0 + n - (n - nbar) ** 2 / (4.0 * nbar + 2.0))


def overlap_exact(params: OverlapParams, cutoff: int | None = None) -> complex:
    nbar = params.nbar
    if cutoff is None:
        cutoff = default_cutoff(nbar)
    weights = np.abs(coherent_state(math.sqrt(nbar), cutoff).amplitudes) ** 2
    if params.j == -1:
        weights = weights * (-1.0) ** np.arange(cutoff + 1)
    phases = params.sign * branch_phases(nbar, params.tau, cutoff)
    return complex(np.sum(weights * np.exp(1j * phases)))


def fractional_offset(tau: float, j: int) -> float:
    """Signed distance ``f_j(tau)`` in ``[-1/2, 1/2)`` selecting the dominant Poisson term."""
    x = tau + (1 - j) / 4.0 + 0.5
    return x - math.floor(x) - 0.5


def overlap_approx(params: OverlapParams) -> complex:
    """Dominant-term asymptotic overlap; ``sqrt`` is the principal branch."""
    nbar, tau, s = params.nbar, params.tau, params.sign
    if not 4.0 * nbar > 100.0 * tau**2:
        warnings.warn(
            f"4*nbar={4 * nbar:g} is not >> tau^2={tau**2:g}; asymptotic overlap may be inaccurate",
            AsymptoticValidityWarning,
            stacklevel=2,
        )
    f = fractional_offset(tau, params.j)
    z = 1.0 + s * 1j * math.pi * tau
    phase = cmath.exp(s * 2j * math.pi * (nbar * f + (nbar + 1.0) * tau))
    return phase / cmath.sqrt(z) * cmath.exp(-2.0 * math.pi**2 * nbar * f**2 / z)


def b_factor() -> float:
    return 2.0 / math.sqrt(4.0 + math.pi**2)


def magic_nbar(m: int) -> float:
    """Mean photon number making ``<-alpha|alpha_{1/2}^+->`` real."""
    if m < 0:
        raise ValueError("m must be non-negative")
    return m + math.atan(math.pi / 2.0) / (2.0 * math.pi)


def half_revival_overlap(nbar: float, sign: int = 1) -> complex:
    """Polar form of ``<-alpha|alpha_{1/2}^sign>`` in the large-``nbar`` limit."""
    theta = 0.5 * math.atan(math.pi / 2.0) - (nbar + 1.0) * math.pi
    return math.sqrt(b_factor()) * cmath.exp(-sign * 1j * theta)


def phase_residual(nbar: float, sign: int = 1) -> float:
    """Wrapped phase difference between the polar form and :func:`overlap_approx` at ``tau = 1/2``."""
    a = overlap_approx(OverlapParams(nbar, 0.5, -1, sign))
    return float(np.angle(half_revival_overlap(nbar, sign) / a))


def revival_envelope(nbar: float, tau: float, j: int) -> float:
    """Gaussian factor ``|exp(-2 pi^2 nbar f^2 / (1 + i pi tau))|`` of the dominant term."""
    f = fractional_offset(tau, j)
    return math.exp(-2.0 * math.pi**2 * nbar * f**2 / (1.0 + (math.pi * tau) ** 2))
