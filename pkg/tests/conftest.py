import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

CRITERIA = {
    1: "diamond coefficient matrix",
    2: "triangle reduction",
    3: "oracle equivalence on random models",
    4: "fixed points and perturbation",
    5: "edge sandwich and round trip",
    6: "representation completeness",
    7: "triangle inequality",
    8: "simulation consistency",
    9: "bounds branch behaviour",
    10: "CLI determinism and exit codes",
}

_outcomes = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion covered by the test")


def pytest_runtest_logreport(report):
    n = getattr(report, "criterion", None)
    if n is None:
        return
    failed = report.failed or (report.when == "call" and report.skipped)
    if failed or n not in _outcomes:
        _outcomes[n] = _outcomes.get(n, True) and not failed


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = marker.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        if n in _outcomes:
            verdict = "PASS" if _outcomes[n] else "FAIL"
        else:
            verdict = "NOT RUN"
        terminalreporter.write_line(f"criterion {n:2d}: {verdict}  {CRITERIA[n]}")
