import numpy as np
import pytest

from qpe import rng as qrng

# Filled by test_acceptance; printed once at the end of the session.
ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return qrng.stream(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


def haar_unitaries(n, dim=2, seed=0):
    g = np.random.default_rng(seed)
    for _ in range(n):
        z = (g.normal(size=(dim, dim)) + 1j * g.normal(size=(dim, dim))) / np.sqrt(2)
        q, r = np.linalg.qr(z)
        yield q * (np.diag(r) / np.abs(np.diag(r)))
