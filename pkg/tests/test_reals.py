from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from conftest import holds
from effdist.dyadic import Dyadic
from effdist.reals import RealOracle, real_at


@given(st.fractions(max_denominator=10**6), st.integers(0, 100))
def test_rational_oracle_width_and_containment(x, k):
    r = RealOracle.from_fraction(x)
    iv = real_at(r, k)
    assert iv.lo.to_fraction() <= x <= iv.hi.to_fraction()
    assert iv.width() <= Dyadic(1, -k)
    assert r.exact == x


@pytest.mark.parametrize("text,ref", [
    ("sqrt(2)", mpmath.sqrt(2)), ("pi", mpmath.pi), ("1/3", mpmath.mpf(1) / 3), ("5/8", mpmath.mpf(5) / 8),
])
@pytest.mark.parametrize("k", [0, 8, 64, 200])
def test_parse(text, ref, k):
    iv = RealOracle.parse(text).eval(k)
    assert holds(iv, ref)
    assert iv.width() <= Dyadic(1, -k)


def test_arithmetic_keeps_exact():
    a = RealOracle.parse("1/3") + RealOracle.parse("1/6")
    assert a.exact == Fraction(1, 2)
    b = 1 - RealOracle.parse("1/3")
    assert b.exact == Fraction(2, 3)


def test_inexact_sum():
    s = RealOracle.parse("sqrt(2)") + RealOracle.parse("pi")
    assert s.exact is None
    iv = s.eval(50)
    assert holds(iv, mpmath.sqrt(2) + mpmath.pi) and iv.width() <= Dyadic(1, -50)


def test_bad_input():
    with pytest.raises(TypeError):
        RealOracle.parse(1.5)
