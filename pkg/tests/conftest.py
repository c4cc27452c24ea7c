import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

_ACCEPTANCE = []


@pytest.fixture
def acceptance_line():
    """Record one PASS/FAIL line per acceptance criterion for the terminal summary."""

    def record(number, title, ok, detail=""):
        _ACCEPTANCE.append((number, title, ok, detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(_ACCEPTANCE):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number}: {title}  {detail}".rstrip())
