import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=25, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("PRELIE_HYPOTHESIS", "default"))

ACCEPTANCE: dict = {}


def record(criterion: int, title: str, ok: bool):
    prev = ACCEPTANCE.get(criterion)
    ACCEPTANCE[criterion] = (title, ok and (prev is None or prev[1]))


@pytest.fixture(scope="session")
def corpus_result():
    from prelie.runner import run_corpus

    return run_corpus()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok = ACCEPTANCE[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {n:>2}: {title}")
