import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_poly(rng, degree):
    return (rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)) / np.sqrt(2.0)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance checks")
        for line in RESULTS:
            terminalreporter.write_line(line)
