import numpy as np
import pytest

from phaserec import (
    PlaneWaveContext,
    discretize,
    make_potential,
    scattering_amplitude,
    solve_psi_on_support,
)

K2 = np.array([1.0, 0.0])
L2 = np.array([0.0, 1.0])
K3 = np.array([1.0, 0.0, 0.0])
L3 = np.array([0.0, 1.0, 0.0])

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def disc2d():
    return make_potential(2, "disc_constant", [0.5, 1.0], 1.0)


def _solve(potential, cells, k):
    grid = discretize(potential, cells)
    return solve_psi_on_support(grid, PlaneWaveContext(k, float(k @ k)))


@pytest.fixture(scope="session")
def disc2d_32(disc2d):
    return _solve(disc2d, 32, K2)


@pytest.fixture(scope="session")
def disc2d_48(disc2d):
    return _solve(disc2d, 48, K2)


@pytest.fixture(scope="session")
def f_disc2d_48(disc2d_48):
    return scattering_amplitude(disc2d_48, L2)


@pytest.fixture(scope="session")
def zero2d():
    return _solve(make_potential(2, "disc_constant", [0.0, 1.0], 1.0), 12, K2)


@pytest.fixture(scope="session")
def ball3d_12():
    return _solve(make_potential(3, "disc_constant", [0.3, 1.0], 1.0), 12, K3)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
