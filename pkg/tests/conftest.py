import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sabicluster.usage import from_array  # noqa: E402

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def small_matrix():
    return from_array(
        [
            [1.0, 2.0, 3.0, 0.5],
            [2.0, 4.0, 6.0, 0.1],
            [0.3, 0.1, 0.9, 0.7],
            [5.0, 6.0, 7.0, 0.2],
        ]
    )


@pytest.fixture
def scaling_matrix():
    """10x6 matrix whose rows are positive multiples of one non-constant row."""
    base = np.array([0.2, 0.9, 0.4, 0.7, 0.1, 0.5])
    scales = np.linspace(0.3, 1.0, 10)[:, None]
    return from_array(scales * base)
