import pytest

_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Call with (number, passed, detail); the line is echoed and kept for the summary."""

    def record(n, passed: bool, detail: str) -> bool:
        line = f"criterion {n!s:>3}: {'PASS' if passed else 'FAIL'}  {detail}"
        print(line)
        _LINES.append(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance")
        for line in sorted(_LINES):
            terminalreporter.write_line(line)
