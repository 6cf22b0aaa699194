import pytest

# (criterion number, label, passed, detail) appended by the acceptance tests
ACCEPTANCE_LINES = []


@pytest.fixture
def record_criterion():
    def record(number, label, passed, detail):
        ACCEPTANCE_LINES.append((number, label, bool(passed), detail))
        return bool(passed)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, label, passed, detail in sorted(ACCEPTANCE_LINES, key=lambda x: (x[0], x[1])):
        terminalreporter.write_line(f"criterion {number} [{'PASS' if passed else 'FAIL'}] {label}: {detail}")
