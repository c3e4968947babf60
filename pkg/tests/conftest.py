from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_CRITERIA_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_CRITERIA_KEY] = []


@pytest.fixture
def record_criterion(request):
    """Record one acceptance line ``(number, title, passed, detail)``."""
    def record(number, title, passed, detail):
        line = f"criterion {number:2d} {'PASS' if passed else 'FAIL'}  {title}: {detail}"
        request.config.stash[_CRITERIA_KEY].append((number, line))
        print(line)
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = sorted(config.stash.get(_CRITERIA_KEY, []))
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in lines:
            terminalreporter.write_line(line)
