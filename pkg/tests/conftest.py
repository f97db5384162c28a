import os

import pytest
from hypothesis import HealthCheck, settings

from mfpop.kacmoody import validate_cartan
from mfpop.tuplegen import build_problem

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=50, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

A2 = validate_cartan([[2, -1], [-1, 2]], [1, 1])
A1 = validate_cartan([[2]], [1])
AFFINE_A1 = validate_cartan([[2, -2], [-2, 2]], [1, 1])

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE = {}


@pytest.fixture(scope="session")
def remark():
    return build_problem(A2, [1, -1], [(1, 1), (1, 1)])


@pytest.fixture(scope="session")
def sl2():
    return lambda m=1, z=0: build_problem(A1, [z], [(m,)])


@pytest.fixture(scope="session")
def a2_n1():
    return build_problem(A2, [0], [(1, 1)])


@pytest.fixture(scope="session")
def affine():
    return build_problem(AFFINE_A1, [0, 1], [(1, 0), (0, 1)], gram=[["1/2", 0], [0, "1/2"]])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"ACCEPTANCE {n} {'PASS' if ok else 'FAIL'}: {detail}")
