import numpy as np
import pytest

from rcqm.lattice import Lattice
from rcqm.states import random_amplitudes
from rcqm.transforms import default_packet


@pytest.fixture(scope="session")
def lat1():
    return Lattice(dim=1, n=256, dx=0.25, mass=1.0)


@pytest.fixture(scope="session")
def lat2():
    return Lattice(dim=2, n=48, dx=1.25, mass=1.0)


@pytest.fixture(scope="session")
def lat3():
    # box of 60/m so the e^{-m|x|} tails of omega f do not wrap around
    return Lattice(dim=3, n=40, dx=1.5, mass=1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def packet(lattice, rng, t_max=0.0):
    return random_amplitudes(lattice, rng, **default_packet(lattice, t_max=t_max))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "SUMMARY", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split(".")[0].split()[-1])):
            terminalreporter.write_line(line)
