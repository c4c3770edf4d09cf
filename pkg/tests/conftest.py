import math

import pytest
from hypothesis import HealthCheck, settings

from beamnet import NetworkParams, OutageConstraint, TruncatedHalfNormalError

settings.register_profile(
    "beamnet", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("beamnet")

DEG = math.pi / 180.0

_ACCEPTANCE = {}


@pytest.fixture
def params():
    return NetworkParams(lam=0.0)


@pytest.fixture
def outage():
    return OutageConstraint(0.15)


@pytest.fixture
def hn3():
    return TruncatedHalfNormalError(3 * DEG)


def pytest_runtest_logreport(report):
    label = getattr(report, "acceptance_label", None)
    if label is None:
        for key, value in report.user_properties:
            if key == "acceptance":
                label = value
    if label is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE[label] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance")
    for label in sorted(_ACCEPTANCE):
        outcome = _ACCEPTANCE[label]
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{mark}  {label}")
