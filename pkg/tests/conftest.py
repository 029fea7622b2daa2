import numpy as np
import pytest

from inhomgraph.graph_core import EdgeProbabilityMatrix, kernel_from_pairs

ACCEPTANCE_LINES: list[str] = []


def random_kernel(n, rng, low=0.0, high=1.0):
    upper = np.triu(rng.uniform(low, high, size=(n, n)), k=1)
    return EdgeProbabilityMatrix(upper + upper.T)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def k3():
    """n=3 with p12=0.2, p13=0.7, p23=0.5."""
    return kernel_from_pairs(3, {(1, 2): 0.2, (1, 3): 0.7, (2, 3): 0.5})


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
