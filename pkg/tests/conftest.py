import pytest

from hulthen_kg.model import PotentialParams
from hulthen_kg.solver import solve_spectrum


def emes(a, delta=0.01):
    return PotentialParams.for_limit("emes", 2.0, a=a, delta=delta)


def emos(a, delta=0.01):
    return PotentialParams.for_limit("emos", 2.0, a=a, delta=delta)


@pytest.fixture(scope="session")
def emes_spectra():
    """EMES spectra keyed by (D, a), rows n = 1..4 with l < n."""
    return {(d, a): solve_spectrum(emes(a), d, range(1, 5), range(4), l_below_n=True)
            for d in (3, 4, 5) for a in (1, 0, -1)}


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
