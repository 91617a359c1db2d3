import numpy as np
import pytest

from cavrevive import (
    BasinParameter,
    ModelParams,
    basin_state,
    build_propagator,
    characteristic_times,
    coherent_field_amps,
    dicke_state,
    symmetric_product,
)

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


class Run:
    """A prepared model, propagator and initial state."""

    def __init__(self, params, qubit):
        self.params = params
        self.qubit = qubit
        self.prop = build_propagator(params)
        self.times = characteristic_times(params)
        self.psi0 = symmetric_product(qubit, coherent_field_amps(params.nbar, params.theta, params.fock_cutoff))


@pytest.fixture(scope="session")
def fig1_run():
    return Run(ModelParams(n_qubits=1, nbar=50.0), dicke_state(1, 0))


@pytest.fixture(scope="session")
def fig2_run():
    return Run(ModelParams(n_qubits=2, nbar=50.0), basin_state(BasinParameter(1 / np.sqrt(2), 2, 0.0)))
