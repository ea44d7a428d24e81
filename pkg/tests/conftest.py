import pytest

_LINES = []


@pytest.fixture
def report(capsys):
    """Print one verdict line per acceptance criterion, bypassing capture."""
    def emit(number, passed, detail):
        line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {detail}"
        _LINES.append(line)
        with capsys.disabled():
            print("\n" + line)
    return emit


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
