"""Two-cavity Bell measurement by coherent-state postselection.

The atoms meet a cavity prepared in ``|alpha>`` for scaled time ``tau1``; the
field is projected onto ``|alpha>``, and on failure onto ``|-alpha>``.  The
conditional atomic state then meets a second cavity in ``|i alpha>`` for
``tau2`` and the field is projected onto ``|i alpha>``, else ``|-i alpha>``.

Each detector pair heralds one Bell state, referenced to ``phi = arg(alpha)``:

    ( alpha,  i alpha) -> Psi-       ( alpha, -i alpha) -> Phi-_phi
    (-alpha,  i alpha) -> Phi+_phi   (-alpha, -i alpha) -> Psi+

The tree is evaluated exhaustively with exact conditional amplitudes.
Projections within one cavity are sequential von Neumann measurements, so the
``else`` projection acts on the component orthogonal to the first target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, NamedTuple

import numpy as np

from .approx import approx_state
from .dynamics import ModelParams, evolve_exact, unscaled_time
from .fock import (
    AtomicState,
    FieldState,
    JointState,
    coherent_state,
    default_cutoff,
)
from .overlaps import b_factor
from .sweep import SweepResult

ZERO_PROBABILITY = 1e-14

Engine = Literal["exact", "approx"]

# (first detector target, second detector target) in units of alpha
BRANCHES = {
    ("alpha", "i alpha"): "psi-",
    ("alpha", "-i alpha"): "phi-",
    ("-alpha", "i alpha"): "phi+",
    ("-alpha", "-i alpha"): "psi+",
}
FAIL = "FAIL"


@dataclass(frozen=True)
class ProtocolConfig:
    """``free_phase`` is the free-evolution angle accumulated between the cavities.

    It rotates the atomic excitations and, because the second cavity field
    and its detection reference evolve under the same free Hamiltonian, the
    second-cavity amplitude and targets by the same angle.
    """

    atom: AtomicState
    alpha: complex
    tau1: float = 0.5
    tau2: float = 0.5
    engine: Engine = "exact"
    g: float = 1.0
    cutoff: int | None = None
    free_phase: float = 0.0

    def __post_init__(self):
        for name in ("tau1", "tau2"):
            tau = getattr(self, name)
            if not 0.0 < tau < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {tau}")
        if not abs(self.alpha) > 0:
            raise ValueError("alpha must be non-zero")
        if self.engine not in ("exact", "approx"):
            raise ValueError(f"unknown engine {self.engine!r}")
        if abs(self.atom.norm - 1.0) > 1e-10:
            raise ValueError(f"atomic state not normalized (norm {self.atom.norm})")

    @property
    def nbar(self) -> float:
        return abs(self.alpha) ** 2

    @property
    def phi(self) -> float:
        return float(np.angle(self.alpha))


@dataclass(frozen=True)
class ProtocolOutcome:
    branch: tuple[str, str] | str
    probability: float
    postselected_atom: AtomicState | None = None
    bell_label: str | None = None
    fidelity: float | None = None
    details: dict = field(default_factory=dict)

    @property
    def name(self) -> str:
        if self.branch == FAIL:
            return FAIL
        return f"D1={self.branch[0]},D2={self.branch[1]}"


class Projection(NamedTuple):
    """Unnormalized conditional atomic state and its probability."""

    atom: AtomicState
    probability: float

    @property
    def flagged(self) -> bool:
        return self.probability < ZERO_PROBABILITY

    def normalized(self) -> AtomicState | None:
        return None if self.flagged else self.atom.normalized()


def project_field(joint: JointState, target: FieldState, phi: float = 0.0) -> Projection:
    """Apply ``1 (x) |target><target|``; the atom is returned in the Bell basis of ``phi``."""
    if abs(target.norm - 1.0) > 1e-10:
        raise ValueError("target field state must be normalized")
    amps = joint.to_computational().amplitudes @ target.amplitudes.conj()
    return Projection(AtomicState.from_computational(amps, phi), float(np.sum(np.abs(amps) ** 2)))


def project_sequence(
    joint: JointState, first: FieldState, second: FieldState, phi: float = 0.0
) -> tuple[Projection, Projection]:
    """Project onto ``first``; on failure project the remainder onto ``second``."""
    a = joint.to_computational().amplitudes
    amp1 = a @ first.amplitudes.conj()
    remainder = a - np.outer(amp1, first.amplitudes)
    amp2 = remainder @ second.amplitudes.conj()
    return (
        Projection(AtomicState.from_computational(amp1, phi), float(np.sum(np.abs(amp1) ** 2))),
        Projection(AtomicState.from_computational(amp2, phi), float(np.sum(np.abs(amp2) ** 2))),
    )


def interact(
    atom: AtomicState,
    alpha: complex,
    tau: float,
    engine: Engine = "exact",
    g: float = 1.0,
    cutoff: int | None = None,
) -> JointState:
    """Joint state after the atoms spend scaled time ``tau`` in a cavity prepared in ``|alpha>``."""
    if engine == "approx":
        return approx_state(atom, alpha, tau, cutoff).joint()
    field = coherent_state(alpha, cutoff)
    return evolve_exact(atom, field, unscaled_time(tau, ModelParams.from_alpha(alpha, g)), g)


def free_evolution(atom: AtomicState, angle: float) -> AtomicState:
    """``exp(-i angle * n_exc)`` on the atoms, ``n_exc`` counting excited qubits."""
    phases = np.exp(-1j * angle * np.array([0, 1, 1, 2]))
    return AtomicState.from_computational(phases * atom.computational(), atom.phi)


def run_protocol(config: ProtocolConfig) -> list[ProtocolOutcome]:
    """All four heralded outcomes followed by the aggregated failure outcome."""
    alpha = complex(config.alpha)
    phi = config.phi
    cutoff = config.cutoff if config.cutoff is not None else default_cutoff(config.nbar)
    alpha2 = 1j * alpha * np.exp(-1j * config.free_phase)

    joint1 = interact(config.atom, alpha, config.tau1, config.engine, config.g, cutoff)
    first = project_sequence(
        joint1, coherent_state(alpha, cutoff), coherent_state(-alpha, cutoff), phi
    )
    targets2 = (coherent_state(alpha2, cutoff), coherent_state(-alpha2, cutoff))

    outcomes = []
    failure = {"first_stage": 1.0 - first[0].probability - first[1].probability}
    for label1, proj1 in zip(("alpha", "-alpha"), first):
        atom1 = proj1.normalized()
        if atom1 is None:
            second = (Projection(AtomicState(phi=phi), 0.0),) * 2
        else:
            atom1 = free_evolution(atom1, config.free_phase)
            joint2 = interact(atom1, alpha2, config.tau2, config.engine, config.g, cutoff)
            second = project_sequence(joint2, *targets2, phi)
        success = 0.0
        for label2, proj2 in zip(("i alpha", "-i alpha"), second):
            p = proj1.probability * proj2.probability
            success += proj2.probability
            bell = BRANCHES[(label1, label2)]
            post = None if (proj1.flagged or proj2.flagged) else proj2.normalized()
            outcomes.append(
                ProtocolOutcome(
                    branch=(label1, label2),
                    probability=p,
                    postselected_atom=post,
                    bell_label=bell,
                    fidelity=None if post is None else post.bell_fidelity(bell, phi),
                )
            )
        failure[f"second_stage_after_{label1}"] = proj1.probability * (1.0 - success)

    p_fail = 1.0 - sum(o.probability for o in outcomes)
    outcomes.append(ProtocolOutcome(branch=FAIL, probability=p_fail, details=failure))
    return outcomes


def predicted_probabilities(atom: AtomicState, phi: float) -> dict[str, float]:
    """Large-``nbar`` branch probabilities at ``tau = 1/2`` and magic ``nbar``."""
    a = atom.rebased(phi)
    b = b_factor()
    cm, cp, dm, dp = (abs(x) ** 2 for x in a.amplitudes)
    return {
        "psi-": cm,
        "phi-": b * dm,
        "phi+": b * dp,
        "psi+": b**2 * cp,
        FAIL: (1 - b) * (dm + dp) + (1 - b**2) * cp,
    }


def total_success_probability(atom: AtomicState, phi: float) -> float:
    a = atom.rebased(phi)
    b = b_factor()
    return b + (1 - b) * (abs(a.cminus) ** 2 - b * abs(a.cplus) ** 2)


def _fidelity_row(outcomes: list[ProtocolOutcome]) -> list[float]:
    by_label = {o.bell_label: o for o in outcomes if o.bell_label}
    return [
        math.nan if by_label[k].fidelity is None else by_label[k].fidelity
        for k in ("psi-", "phi-", "phi+", "psi+")
    ] + [by_label[k].probability for k in ("psi-", "phi-", "phi+", "psi+")]


FIDELITY_COLUMNS = (
    "F_psi_minus",
    "F_phi_minus",
    "F_phi_plus",
    "F_psi_plus",
    "P_psi_minus",
    "P_phi_minus",
    "P_phi_plus",
    "P_psi_plus",
)


def fidelity_vs_nbar(
    atom: AtomicState,
    nbars,
    tau: float = 0.5,
    phase: float | None = None,
    engine: Engine = "exact",
    g: float = 1.0,
) -> SweepResult:
    """Per-branch Bell fidelity and probability against mean photon number.

    ``phase`` is the coherent-state phase; it defaults to the atom's
    reference phase so the Bell labels keep their meaning along the sweep.
    """
    phase = atom.phi if phase is None else phase
    rows = []
    for nbar in nbars:
        alpha = math.sqrt(nbar) * np.exp(1j * phase)
        cfg = ProtocolConfig(atom, alpha, tau, tau, engine, g)
        rows.append([float(nbar), *_fidelity_row(run_protocol(cfg))])
    return SweepResult(("nbar", *FIDELITY_COLUMNS), rows)


def fidelity_vs_tau(
    atom: AtomicState,
    nbar: float,
    taus,
    phase: float | None = None,
    engine: Engine = "exact",
    g: float = 1.0,
) -> SweepResult:
    phase = atom.phi if phase is None else phase
    alpha = math.sqrt(nbar) * np.exp(1j * phase)
    rows = []
    for tau in taus:
        cfg = ProtocolConfig(atom, alpha, tau, tau, engine, g)
        rows.append([float(tau), *_fidelity_row(run_protocol(cfg))])
    return SweepResult(("tau", *FIDELITY_COLUMNS), rows)




