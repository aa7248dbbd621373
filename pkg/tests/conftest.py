import sys

import numpy as np
import pytest

from spinstar.model import StarModel, excitation


@pytest.fixture
def star3():
    return StarModel(3)


@pytest.fixture
def cops(star3):
    return excitation(star3, 0)


@pytest.fixture
def lops(star3):
    return excitation(star3, 3)


def random_hermitian(rng, n):
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return x + x.conj().T


def random_state(rng, dim):
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return psi / np.linalg.norm(psi)


W4 = np.array([0.5, -0.5, -0.5, -0.5], dtype=complex)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    results = getattr(acceptance, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
