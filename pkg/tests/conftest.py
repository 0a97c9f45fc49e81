import pytest
from hypothesis import HealthCheck, settings

from jpasim import DeviceParams, derive

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=50,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

# one line per acceptance criterion, printed after the run
_ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(num: int, ok: bool, detail: str) -> bool:
    _ACCEPTANCE_LINES[num] = f"criterion {num:2d}  {'PASS' if ok else 'FAIL'}  {detail}"
    return ok


@pytest.fixture(scope="session")
def dev30() -> DeviceParams:
    return DeviceParams(f0=7e9, Ic=2e-6, Q=30)


@pytest.fixture(scope="session")
def params30(dev30):
    return derive(dev30)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE_LINES):
        terminalreporter.write_line(_ACCEPTANCE_LINES[num])
