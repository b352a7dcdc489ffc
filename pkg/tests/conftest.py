from fractions import Fraction

import mpmath
import pytest

from effdist.interval import ComplexInterval, Interval

mpmath.mp.dps = 60

# filled by test_acceptance, printed at the end of the session
ACCEPTANCE_LINES = {}


def mpf(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    if hasattr(x, "to_fraction"):
        return mpf(x.to_fraction())
    return mpmath.mpf(x)


def holds(iv: Interval, value) -> bool:
    """Does the enclosure contain a high-precision mpmath value?"""
    v = mpmath.mpf(value)
    return mpf(iv.lo) <= v <= mpf(iv.hi)


def holds_c(box: ComplexInterval, value) -> bool:
    z = mpmath.mpc(value)
    return holds(box.re, z.real) and holds(box.im, z.imag)


@pytest.fixture
def oracle():
    return mpmath


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
