import math
import warnings

import numpy as np
import pytest

from tcbell.approx import (
    ApproximationValidityWarning,
    approx_state,
    approximation_fidelity,
    normalization_closed_form,
    photon_branch,
    validity_limit,
)
from tcbell.fock import AtomicState, coherent_state, inner_product

PHI = 1.37


def alpha_of(nbar):
    return math.sqrt(nbar) * np.exp(1j * PHI)


def test_validity_limit():
    assert validity_limit(36.16) == pytest.approx(math.sqrt(36.16) / (2 * math.pi))
    with pytest.warns(ApproximationValidityWarning):
        approx_state(AtomicState.bell("psi+"), 1.0, 0.5)


def test_zero_time_is_initial_state(ref_atom):
    assert approximation_fidelity(ref_atom, alpha_of(20.0), 0.0) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("tau", [0.1, 0.37, 0.5, 0.8])
def test_numeric_norm_matches_closed_form(ref_atom, tau):
    alpha = alpha_of(40.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ApproximationValidityWarning)
        state = approx_state(ref_atom, alpha, tau)
    assert state.normalization == pytest.approx(normalization_closed_form(ref_atom, alpha, tau), abs=1e-12)


def test_joint_normalized(ref_atom):
    joint = approx_state(ref_atom, alpha_of(36.16), 0.5).joint()
    assert joint.norm == pytest.approx(1.0, abs=1e-12)


def test_singlet_branch_exact():
    atom = AtomicState.bell("psi-", PHI)
    assert approximation_fidelity(atom, alpha_of(20.0), 0.5) == pytest.approx(1.0, abs=1e-12)


def test_photon_branch_unit_norm_and_conjugate_phases():
    plus = photon_branch(alpha_of(16.0), 0.3, 1)
    minus = photon_branch(alpha_of(16.0), 0.3, -1)
    assert plus.norm == pytest.approx(1.0)
    coh = coherent_state(alpha_of(16.0))
    assert inner_product(coh, plus) == pytest.approx(np.conj(inner_product(coh, minus)), abs=1e-13)
    with pytest.raises(ValueError):
        photon_branch(1.0, 0.3, 0)


# frozen from the verified run on the reference atom at tau = 1/2
GOLDEN_F_HALF = {
    10.0: 0.864960387519,
    20.0: 0.917253377924,
    40.0: 0.953239522567,
    80.0: 0.974774219579,
    160.0: 0.986828629469,
}


@pytest.mark.parametrize("nbar", sorted(GOLDEN_F_HALF))
def test_fidelity_golden(ref_atom, nbar):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ApproximationValidityWarning)
        f = approximation_fidelity(ref_atom, alpha_of(nbar), 0.5)
    assert f == pytest.approx(GOLDEN_F_HALF[nbar], abs=1e-9)


def test_fidelity_improves_with_nbar(ref_atom):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ApproximationValidityWarning)
        fs = [approximation_fidelity(ref_atom, alpha_of(n), 0.5) for n in (10, 20, 40, 80, 160)]
    assert all(b > a for a, b in zip(fs, fs[1:]))
