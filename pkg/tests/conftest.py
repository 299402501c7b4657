import pytest

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def record_criterion():
    """Record one acceptance line; the summary is printed at session end."""

    def record(number: int, passed: bool, detail: str):
        ACCEPTANCE[number] = (passed, detail)
        print(f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {number:2d}. {detail}")
