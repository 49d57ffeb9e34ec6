import os
import sys

import pytest
from hypothesis import HealthCheck, settings

from powerops import modelfile
from powerops.dyer_lashof import DyerLashofAlgebra
from powerops.rings import HRing

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture])
settings.load_profile("default")

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def data():
    return modelfile.load_builtin("c4_p5", M=12)


@pytest.fixture(scope="session")
def ring():
    return HRing(5, 24, 12)


@pytest.fixture(scope="session")
def exact():
    return HRing(5, None, 12)


@pytest.fixture(scope="session")
def algebra(data):
    return DyerLashofAlgebra(data)


@pytest.fixture(scope="session")
def session():
    from powerops.verify import Session
    return Session()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    setattr(item, "rep_" + rep.when, rep)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line[1])
