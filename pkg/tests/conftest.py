import re

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=25, deadline=None, derandomize=True)
settings.load_profile("default")

ACCEPTANCE_LINES: dict = {}


def _line(number, title, passed, measured):
    return f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {title}  [{measured}]"


@pytest.fixture
def record_criterion():
    """Call with (number, title, passed, measured) to add a line to the acceptance summary."""
    def record(number, title, passed, measured):
        line = _line(number, title, passed, measured)
        ACCEPTANCE_LINES[number] = line
        print(line)
    return record


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    # a criterion that raised before recording still gets a FAIL line
    m = re.match(r"test_criterion_(\d+)_(\w+)", item.name)
    if m and report.when == "call" and report.failed and int(m.group(1)) not in ACCEPTANCE_LINES:
        err = call.excinfo.typename if call.excinfo else "error"
        ACCEPTANCE_LINES[int(m.group(1))] = _line(int(m.group(1)), m.group(2).replace("_", " "), False, err)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
