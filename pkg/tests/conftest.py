import numpy as np
import pytest

from qgatecheck.iofmt import load_fixture

TABLE1_Z = np.array([[0.898, 0.031, 0.061, 0.011],
                     [0.021, 0.885, 0.006, 0.088],
                     [0.064, 0.027, 0.099, 0.810],
                     [0.031, 0.096, 0.819, 0.054]])
TABLE1_X = np.array([[0.854, 0.044, 0.063, 0.039],
                     [0.013, 0.099, 0.013, 0.874],
                     [0.050, 0.021, 0.871, 0.058],
                     [0.019, 0.870, 0.040, 0.071]])

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def z_table():
    return load_fixture("z")


@pytest.fixture(scope="session")
def x_table():
    return load_fixture("x")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
