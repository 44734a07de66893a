import random

import pytest
from hypothesis import settings

from padic_rankin.modforms import cusp_eigenforms
from padic_rankin.ordinary import katz_system

SEED = 20240611

settings.register_profile("seeded", derandomize=True, max_examples=60, deadline=None)
settings.load_profile("seeded")


def pytest_report_header(config):
    return f"property-test seed: {SEED} (hypothesis derandomized)"


@pytest.fixture
def rng():
    return random.Random(SEED)


_systems = {}
_forms = {}


def cached_system(p, N, k, **kw):
    key = (p, N, k, tuple(sorted(kw.items())))
    if key not in _systems:
        _systems[key] = katz_system(p, N, k, **kw)
    return _systems[key]


def cached_forms(k, p, N):
    key = (k, p, N)
    if key not in _forms:
        _forms[key] = cusp_eigenforms(k, p, N)
    return _forms[key]


@pytest.fixture
def delta11():
    return cached_forms(12, 11, 2)[0]


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.REPORT_LINES:
        terminalreporter.section("acceptance report")
        for text in test_acceptance.REPORT_LINES:
            terminalreporter.write_line(text)
