import numpy as np
import pytest

from somor import SecondOrderSystem


def spd(rng, n, shift=1.0):
    a = rng.standard_normal((n, n))
    return a @ a.T / n + shift * np.eye(n)


def random_sos(rng, n, m=1, p=1, k0=1, kv=1):
    """Stable system: SPD mass, damping and stiffness give a stable pencil."""
    M = spd(rng, n)
    K = spd(rng, n, shift=0.5)
    D = spd(rng, n, shift=0.2) * 0.5
    B = rng.standard_normal((n, m))
    C = rng.standard_normal((p, n))
    X0 = rng.standard_normal((n, k0))
    V0 = rng.standard_normal((n, kv))
    return SecondOrderSystem(M, D, K, B, C, X0=X0, V0=V0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)


@pytest.fixture
def scalar_sos():
    # M=1, D=3, K=2: poles -1 and -2
    return SecondOrderSystem(1.0, 3.0, 2.0, 1.0, 1.0, X0=1.0, V0=1.0)


# acceptance summary lines, filled by tests/test_acceptance.py
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE:
        terminalreporter.write_line(line)
