import pytest

from atomphoton.core import make_params

# filled by test_acceptance, printed at the end of the run
ACCEPTANCE_LINES = []


@pytest.fixture
def recoil_params():
    return make_params(0.05, 0.1, 100.0)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
