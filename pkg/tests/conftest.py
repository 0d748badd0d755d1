import random

import pytest


@pytest.fixture
def rng():
    return random.Random(20240611)

ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(name, ok, detail)`` then assert ``ok``."""
    def record(name, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
        request.config.stash[ACCEPTANCE].append(line)
        print(line)
        assert ok, line
    return record
