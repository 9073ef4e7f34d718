import pytest

# filled by tests/test_acceptance.py: criterion number -> (passed, line)
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n][1])


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE
