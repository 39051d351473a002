"""Field, atomic and joint states on a truncated Fock space.

Atomic ordering is ``|A, B>`` with computational index ``2*A + B``, i.e.
``(|0,0>, |0,1>, |1,0>, |1,1>)``.  The Bell basis is ordered
``(Psi-, Psi+, Phi-_phi, Phi+_phi)`` with

    Psi+-   = (|0,1> +- |1,0>) / sqrt(2)
    Phi+-_p = (exp(-ip)|0,0> +- exp(ip)|1,1>) / sqrt(2)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy import linalg, stats

TAIL_TOL = 1e-12
DISPLACE_TAIL_TOL = 1e-8
NORM_TOL = 1e-10

BELL_LABELS = ("psi-", "psi+", "phi-", "phi+")

Basis = Literal["computational", "bell"]


class TruncationError(ValueError):
    """Raised when a Fock cutoff cannot hold the requested state."""


def poisson_tail(nbar: float, cutoff: int) -> float:
    """Poisson probability mass above ``cutoff`` for mean ``nbar``."""
    if nbar == 0:
        return 0.0
    return float(stats.poisson.sf(cutoff, nbar))


def default_cutoff(nbar: float) -> int:
    return int(math.ceil(nbar + 10.0 * math.sqrt(nbar) + 20.0))


def check_tail(nbar: float, cutoff: int, tol: float = TAIL_TOL) -> None:
    tail = poisson_tail(nbar, cutoff)
    if tail >= tol:
        raise TruncationError(
            f"cutoff {cutoff} leaves Poisson tail {tail:.3e} >= {tol:.0e} for nbar={nbar}"
        )


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FieldState:
    """Single-mode field amplitudes over photon numbers ``0..cutoff``."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.ndim != 1 or amps.size == 0:
            raise ValueError("field amplitudes must be a non-empty vector")
        if not np.all(np.isfinite(amps)):
            raise ValueError("field amplitudes must be finite")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def cutoff(self) -> int:
        return self.amplitudes.size - 1

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def mean_photon_number(self) -> float:
        p = self.populations
        return float(np.dot(np.arange(p.size), p) / p.sum())

    @property
    def photon_number_variance(self) -> float:
        p = self.populations / self.populations.sum()
        n = np.arange(p.size)
        mean = np.dot(n, p)
        return float(np.dot((n - mean) ** 2, p))

    def normalized(self) -> FieldState:
        return FieldState(self.amplitudes / self.norm)


def fock_state(n: int, cutoff: int) -> FieldState:
    if not 0 <= n <= cutoff:
        raise TruncationError(f"Fock level {n} outside cutoff {cutoff}")
    amps = np.zeros(cutoff + 1, dtype=complex)
    amps[n] = 1.0
    return FieldState(amps)


def coherent_state(alpha: complex, cutoff: int | None = None) -> FieldState:
    """Coherent state ``|alpha>`` renormalized on the truncated space.

    Magnitudes follow the multiplicative recurrence
    ``|p_n| = |p_{n-1}| * |alpha| / sqrt(n)`` accumulated in log form, so no
    factorial is ever formed and large ``|alpha|`` cannot overflow.
    """
    alpha = complex(alpha)
    nbar = abs(alpha) ** 2
    if cutoff is None:
        cutoff = default_cutoff(nbar)
    check_tail(nbar, cutoff)
    amps = np.zeros(cutoff + 1, dtype=complex)
    if nbar == 0.0:
        amps[0] = 1.0
        return FieldState(amps)
    n = np.arange(1, cutoff + 1)
    log_mag = np.concatenate(([0.0], np.cumsum(math.log(abs(alpha)) - 0.5 * np.log(n))))
    log_mag -= nbar / 2.0
    amps[:] = np.exp(log_mag) * np.exp(1j * np.angle(alpha) * np.arange(cutoff + 1))
    return FieldState(amps / np.linalg.norm(amps))


def inner_product(a: FieldState, b: FieldState) -> complex:
    """``<a|b>``, antilinear in the first argument."""
    if a.cutoff != b.cutoff:
        raise ValueError(f"cutoff mismatch: {a.cutoff} vs {b.cutoff}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def annihilation(cutoff: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, cutoff + 1)), k=1).astype(complex)


def displacement_matrix(beta: complex, dim: int) -> np.ndarray:
    """``exp(beta a^dag - beta^* a)`` exponentiated on a ``dim``-level space."""
    a = annihilation(dim - 1)
    return linalg.expm(beta * a.conj().T - np.conj(beta) * a)


def displace(state: FieldState, beta: complex) -> FieldState:
    """Apply ``D(beta)`` to ``state``.

    The exponential is formed on a padded space so that the truncation edge
    of the matrix exponential lies far outside the displaced support; the
    result is cut back to the input cutoff after checking the tail mass.
    """
    beta = complex(beta)
    if beta == 0:
        return state
    cutoff = state.cutoff
    pad = int(math.ceil(abs(beta) ** 2 + 12.0 * abs(beta) + 30.0))
    dim = cutoff + 1 + pad
    vec = np.zeros(dim, dtype=complex)
    vec[: cutoff + 1] = state.amplitudes
    out = displacement_matrix(beta, dim) @ vec
    tail = float(np.sum(np.abs(out[cutoff + 1 :]) ** 2))
    if tail > DISPLACE_TAIL_TOL:
        raise TruncationError(
            f"displaced state leaks {tail:.3e} beyond cutoff {cutoff}; raise the cutoff"
        )
    return FieldState(out[: cutoff + 1])


def bell_matrix(phi: float) -> np.ndarray:
    """Columns are the Bell states ``(Psi-, Psi+, Phi-_phi, Phi+_phi)`` in the computational basis."""
    s = 1.0 / math.sqrt(2.0)
    em, ep = np.exp(-1j * phi), np.exp(1j * phi)
    return s * np.array(
        [
            [0, 0, em, em],
            [1, 1, 0, 0],
            [-1, 1, 0, 0],
            [0, 0, -ep, ep],
        ],
        dtype=complex,
    )


def bell_vector(label: str, phi: float) -> np.ndarray:
    return bell_matrix(phi)[:, BELL_LABELS.index(label)]


@dataclass(frozen=True)
class AtomicState:
    """Two-qubit pure state by its Bell amplitudes relative to phase ``phi``."""

    cminus: complex = 0j
    cplus: complex = 0j
    dminus: complex = 0j
    dplus: complex = 0j
    phi: float = 0.0

    def __post_init__(self):
        for name in ("cminus", "cplus", "dminus", "dplus"):
            value = complex(getattr(self, name))
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, value)
        object.__setattr__(self, "phi", float(self.phi))

    @classmethod
    def bell(cls, label: str, phi: float = 0.0) -> AtomicState:
        amps = np.zeros(4, dtype=complex)
        amps[BELL_LABELS.index(label)] = 1.0
        return cls(*amps, phi=phi)

    @classmethod
    def from_computational(cls, amps, phi: float = 0.0) -> AtomicState:
        bell = bell_matrix(phi).conj().T @ np.asarray(amps, dtype=complex)
        return cls(*bell, phi=phi)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([self.cminus, self.cplus, self.dminus, self.dplus])

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> AtomicState:
        n = self.norm
        if n == 0:
            raise ValueError("cannot normalize the zero vector")
        return AtomicState(*(self.amplitudes / n), phi=self.phi)

    def computational(self) -> np.ndarray:
        return bell_matrix(self.phi) @ self.amplitudes

    def rebased(self, phi: float) -> AtomicState:
        """The same vector expressed in the Bell basis of reference phase ``phi``."""
        return AtomicState.from_computational(self.computational(), phi)

    def bell_fidelity(self, label: str, phi: float | None = None) -> float:
        """``|<Bell|psi>|^2`` for the normalized state, Bell state referenced to ``phi``."""
        vec = self.computational() / self.norm
        ref = self.phi if phi is None else phi
        return float(abs(np.vdot(bell_vector(label, ref), vec)) ** 2)


def bell_to_computational(atom: AtomicState) -> np.ndarray:
    if abs(atom.norm - 1.0) > NORM_TOL:
        raise ValueError(f"atomic state not normalized (norm {atom.norm})")
    return atom.computational()


def computational_to_bell(amps, phi: float) -> AtomicState:
    return AtomicState.from_computational(amps, phi)


@dataclass(frozen=True, eq=False)
class JointState:
    """Atom-field amplitudes ``A[k, n]``: atomic basis index ``k`` times photon number ``n``."""

    amplitudes: np.ndarray
    basis: Basis = "computational"
    phi: float = 0.0

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.ndim != 2 or amps.shape[0] != 4:
            raise ValueError("joint amplitudes must have shape (4, cutoff + 1)")
        if not np.all(np.isfinite(amps)):
            raise ValueError("joint amplitudes must be finite")
        if self.basis not in ("computational", "bell"):
            raise ValueError(f"unknown atomic basis {self.basis!r}")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def product(cls, atom: AtomicState, field: FieldState) -> JointState:
        return cls(np.outer(atom.computational(), field.amplitudes))

    @property
    def cutoff(self) -> int:
        return self.amplitudes.shape[1] - 1

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> JointState:
        return JointState(self.amplitudes / self.norm, self.basis, self.phi)

    def to_computational(self) -> JointState:
        if self.basis == "computational":
            return self
        return JointState(bell_matrix(self.phi) @ self.amplitudes)

    def to_bell(self, phi: float | None = None) -> JointState:
        phi = self.phi if phi is None else phi
        comp = self.to_computational().amplitudes
        return JointState(bell_matrix(phi).conj().T @ comp, "bell", phi)

    def inner(self, other: JointState) -> complex:
        a = self.to_computational().amplitudes
        b = other.to_computational().amplitudes
        if a.shape != b.shape:
            raise ValueError(f"cutoff mismatch: {self.cutoff} vs {other.cutoff}")
        return complex(np.vdot(a, b))

    def fidelity(self, other: JointState) -> float:
        return abs(self.inner(other)) ** 2 / (self.norm * other.norm) ** 2


def partial_trace_field(state: JointState) -> np.ndarray:
    """Reduced field density matrix ``rho[m, n] = sum_k A[k, m] A[k, n]^*``.

    Any unitary change of atomic basis leaves the result unchanged, so the
    basis tag of ``state`` is irrelevant here.
    """
    a = state.amplitudes
    return a.T @ a.conj()
