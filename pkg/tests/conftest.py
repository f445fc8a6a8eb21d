import numpy as np
import pytest

from vlasov_sldg.mesh_basis import make_phase_space_grid


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)


@pytest.fixture
def small_grid():
    return make_phase_space_grid(8, 4 * np.pi, 10, 6.0, 2)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
