import re

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")

_CRITERIA = {}


@pytest.fixture
def record(request):
    """Attach a short measured-value note to the acceptance summary line."""

    def _record(text):
        request.node.user_properties.append(("note", text))

    return _record


def pytest_runtest_logreport(report):
    match = re.search(r"test_acceptance\.py::test_criterion_(\d+)", report.nodeid)
    if not match:
        return
    key = int(match.group(1))
    if report.when == "call" or report.outcome != "passed":
        status = "PASS" if report.outcome == "passed" else "FAIL"
        if _CRITERIA.get(key, ("PASS",))[0] == "FAIL":
            return
        notes = "; ".join(v for k, v in report.user_properties if k == "note")
        _CRITERIA[key] = (status, notes)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA):
        status, notes = _CRITERIA[key]
        line = f"criterion {key:2d}: {status}"
        terminalreporter.write_line(f"{line}  ({notes})" if notes else line)
