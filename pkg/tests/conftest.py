import functools

import pytest

from fracsoliton.groundstate import SolverOptions, solve_ground_state
from fracsoliton.specfun import ProblemParams
from fracsoliton.spectral import Grid

ACCEPTANCE_LINES = []


@functools.lru_cache(maxsize=None)
def ground_state(alpha, p, kind="signed_power", L=400.0, n=2 ** 15):
    """Solved profile, shared across test modules."""
    params = ProblemParams(alpha, p, kind, boundary=(alpha == 2.0))
    init = "sech2" if alpha == 2.0 else "lorentzian"
    q, report = solve_ground_state(params, Grid(L, n), SolverOptions(init=init))
    return params, q, report


@pytest.fixture
def solved():
    return ground_state


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
