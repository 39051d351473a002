import numpy as np
import pytest
from hypothesis import strategies as st

from tcbell.config import RunConfig
from tcbell.fock import AtomicState


@pytest.fixture
def ref_atom() -> AtomicState:
    """Reference atomic amplitudes, renormalized, Bell basis at phase 1.37."""
    return RunConfig().atom()


def random_atom(rng: np.random.Generator, phi: float = 0.0) -> AtomicState:
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    return AtomicState(*(v / np.linalg.norm(v)), phi=phi)


finite = st.floats(-1.0, 1.0, allow_nan=False)


@st.composite
def atoms(draw, phi=st.floats(-np.pi, np.pi)):
    v = np.array([complex(draw(finite), draw(finite)) for _ in range(4)])
    norm = np.linalg.norm(v)
    if norm < 1e-3:
        v = np.array([1, 0, 0, 0], dtype=complex)
        norm = 1.0
    return AtomicState(*(v / norm), phi=draw(phi))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
