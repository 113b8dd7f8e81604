import pytest

from foldrel.units import NATURAL, electron_si


@pytest.fixture
def natural():
    return NATURAL


@pytest.fixture
def si():
    return electron_si()


@pytest.fixture(params=["natural", "si"])
def any_units(request):
    return NATURAL if request.param == "natural" else electron_si()


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
