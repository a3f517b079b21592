import numpy as np
import pytest

from artifact.hausdorff_seq import MomentSequence

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def seq():
    def make(alpha, beta, *moments):
        return MomentSequence(alpha, beta, [np.atleast_2d(np.asarray(x, dtype=complex)) for x in moments])

    return make
