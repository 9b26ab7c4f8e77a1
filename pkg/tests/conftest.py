import sys
import numpy as np
import pytest

from golaypq import generate_golay_pair


@pytest.fixture(params=["numba", "numpy"])
def accel(request, monkeypatch):
    """Run a test once per kernel backend."""
    if request.param == "numpy":
        monkeypatch.setenv("GOLAYPQ_DISABLE_NUMBA", "1")
    else:
        monkeypatch.delenv("GOLAYPQ_DISABLE_NUMBA", raising=False)
    return request.param


@pytest.fixture(scope="session")
def pair64():
    return generate_golay_pair(6)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
