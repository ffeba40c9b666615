"""Shared fixtures: default trap, shared chemical potential, cached profiles and transfer."""
import pytest

from vortexgyro.condensate import TrapConfig, build_profile, solve_chemical_potential
from vortexgyro.stirap import PulseSchedule, evolve_amplitudes

_ACCEPTANCE_LINES = []


def record_acceptance(line):
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in _ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def trap():
    return TrapConfig()


@pytest.fixture(scope="session")
def mu0(trap):
    return solve_chemical_potential(trap, 0)


@pytest.fixture(scope="session")
def profiles(trap, mu0):
    cache = {}

    def get(l):
        if l not in cache:
            cache[l] = build_profile(trap, l, mu=mu0)
        return cache[l]

    return get


@pytest.fixture(scope="session")
def transfer_60_40():
    return evolve_amplitudes(PulseSchedule())


@pytest.fixture(scope="session")
def acceptance_report():
    """Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""
    return record_acceptance
