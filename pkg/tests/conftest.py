import numpy as np
import pytest

from stiefel_log import _accel
from stiefel_log.problems import trial_rng


@pytest.fixture
def rng(request):
    # one stream per test, stable across runs and test ordering
    return trial_rng(sum(map(ord, request.node.name)))


@pytest.fixture(params=["numba", "numpy"])
def engine(request):
    """Run a test once on each Sylvester back-substitution kernel."""
    if request.param == "numba" and not _accel.NUMBA_AVAILABLE:
        pytest.skip("numba not installed")
    previous = _accel.use_numba(request.param == "numba")
    yield request.param
    _accel.use_numba(previous)


def random_skew(rng, n, scale=None):
    G = rng.standard_normal((n, n))
    A = 0.5 * (G - G.T)
    if scale is not None:
        A *= scale / np.linalg.norm(A)
    return A


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
