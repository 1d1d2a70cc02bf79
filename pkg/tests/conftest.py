import pytest
from hypothesis import HealthCheck, settings

from soncgp import parse_polynomial

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large]
)
settings.load_profile("default")

EX1 = "1/4 + x1^8 + x1^2*x2^6 + 4*x1^3*x2^3"
EX2 = "187/208 + x1^80 + x2^78 - 8*x1^5*x2^3"
EX3 = "17/20 + 3*x1^8*x2^4 + 2*x1^6*x2^8 - 10*x1^3*x2^3 + x1^5*x2^4"
MOTZKIN = "1/3 + 1/3*x1^4*x2^2 + 1/3*x1^2*x2^4 - x1^2*x2^2"
EX5 = "5/12 + 5/24*x1^6 + 5/24*x1^2*x2^4 + 5/24*x1^2*x2^2 - 5/8*x1*x2"
BOUNDARY3 = "2 + x1^6 + x2^6 + x3^6 + x1^2*x2*x3^2 - x1^4 - x2^4 - x3^4 - x2*x3^3 - x1*x2^2"


@pytest.fixture
def ex1():
    return parse_polynomial(EX1, 2)


@pytest.fixture
def ex2():
    return parse_polynomial(EX2, 2)


@pytest.fixture
def ex3():
    return parse_polynomial(EX3, 2)


@pytest.fixture
def motzkin():
    return parse_polynomial(MOTZKIN, 2)


@pytest.fixture
def ex5():
    return parse_polynomial(EX5, 2)


@pytest.fixture
def boundary3():
    return parse_polynomial(BOUNDARY3, 3)


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (int(k.split("-")[0].rstrip("abcde")), k)):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
