import numpy as np
import pytest

from phaseframe.calibrate import zero_phase
from phaseframe.presets import PLUS_STATE, xpi2_dynamical, xpi2_geometric

_CRITERIA = {}


def record(number: int, title: str, passed: bool, detail: str = ''):
    """Register the outcome of one acceptance criterion for the final summary."""
    prev = _CRITERIA.get(number)
    ok = passed and (prev is None or prev[1])
    details = detail if prev is None else f'{prev[2]}; {detail}'
    _CRITERIA[number] = (title, ok, details)
    return passed


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section('acceptance criteria')
    for n in sorted(_CRITERIA):
        title, ok, detail = _CRITERIA[n]
        terminalreporter.write_line(f'criterion {n} {"PASS" if ok else "FAIL"}: {title} [{detail}]')


@pytest.fixture(scope='session')
def calibrated_c():
    return zero_phase(xpi2_dynamical, PLUS_STATE).c


@pytest.fixture(scope='session')
def xpi2_pair(calibrated_c):
    return xpi2_geometric(), xpi2_dynamical(calibrated_c)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
