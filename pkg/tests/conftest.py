import pytest

from fbm_minimax.discrete import build_model
from fbm_minimax.solver import solve


@pytest.fixture(scope="session")
def model_075_200():
    return build_model(0.75, 200)


@pytest.fixture(scope="session")
def solved_075_200(model_075_200):
    return solve(model_075_200)


@pytest.fixture(scope="session")
def model_075_500():
    return build_model(0.75, 500)


@pytest.fixture(scope="session")
def solved_075_500(model_075_500):
    return solve(model_075_500)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
