import gmpy2
import pytest

from gaplab.scalar import ToleranceContext

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def ctx():
    return ToleranceContext()


@pytest.fixture
def hp():
    """Run the test body at 256-bit precision."""
    with gmpy2.context(gmpy2.get_context(), precision=256):
        yield


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion for the terminal summary."""

    def record(number: int, ok: bool, detail: str = "") -> None:
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
