import math

import numpy as np
import pytest

from wynnpade import NodeSet, evaluate_sweep

ACCEPTANCE_RESULTS = []


def record_criterion(number, title, passed, detail=""):
    ACCEPTANCE_RESULTS.append((number, title, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(ACCEPTANCE_RESULTS):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {number:>2}. {title}: {detail}")


@pytest.fixture(scope="session")
def sine_nodes():
    x = np.linspace(-math.pi, 0.0, 21)
    return NodeSet.from_arrays(x, np.sin(x))


@pytest.fixture(scope="session")
def sine_sweep(sine_nodes):
    """Evaluations over both arches right of the nodes, 2000 open-interval queries each."""
    first = np.linspace(0.0, math.pi, 2002)[1:-1]
    second = np.linspace(math.pi, 2 * math.pi, 2002)[1:-1]
    return evaluate_sweep(sine_nodes, first), evaluate_sweep(sine_nodes, second)
