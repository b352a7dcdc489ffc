from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from effdist.dyadic import Dyadic
from effdist.interval import ComplexInterval, Interval, iv_arith

small = st.builds(Dyadic, st.integers(-2**20, 2**20), st.integers(-24, 4))


@st.composite
def intervals(draw):
    a, b = draw(small), draw(small)
    return Interval(min(a, b), max(a, b))


def sample(iv):
    lo, hi = iv.lo.to_fraction(), iv.hi.to_fraction()
    return [lo, hi, (lo + hi) / 2, lo + (hi - lo) / 3]


def inside(iv, x):
    return iv.lo.to_fraction() <= x <= iv.hi.to_fraction()


@given(intervals(), intervals())
def test_arithmetic_encloses(a, b):
    for x in sample(a):
        for y in sample(b):
            assert inside(a + b, x + y)
            assert inside(a - b, x - y)
            assert inside(a * b, x * y)
            assert inside(a.sqr(), x * x)


@given(intervals(), intervals(), st.integers(0, 30))
def test_division_encloses(a, b, prec):
    if b.contains_zero():
        with pytest.raises(ZeroDivisionError):
            a.div(b, prec)
        return
    q = a.div(b, prec)
    for x in sample(a):
        for y in sample(b):
            assert inside(q, x / y)


@given(intervals(), st.integers(0, 20))
def test_round_is_outward(a, prec):
    r = a.round(prec)
    assert r.lo <= a.lo and a.hi <= r.hi


@given(intervals(), st.integers(0, 5))
def test_power(a, n):
    for x in sample(a):
        assert inside(a ** n, x ** n)


@given(intervals(), intervals(), intervals(), intervals())
def test_complex_product_encloses(a, b, c, d):
    z, w = ComplexInterval(a, b), ComplexInterval(c, d)
    p = z * w
    for x in sample(a)[:2]:
        for y in sample(b)[:2]:
            for u in sample(c)[:2]:
                for v in sample(d)[:2]:
                    assert inside(p.re, x * u - y * v)
                    assert inside(p.im, x * v + y * u)


def test_mag_mig_width():
    iv = Interval(Dyadic(-3), Dyadic(1))
    assert iv.mag() == 3 and iv.mig() == 0 and iv.width() == 4
    assert Interval(Dyadic(2), Dyadic(5)).mig() == 2


def test_hull_intersection():
    a, b = Interval(0, 2), Interval(1, 3)
    assert a.hull(b) == Interval(0, 3)
    assert a.intersection(b) == Interval(1, 2)
    assert a.intersects(b) and not a.intersects(Interval(5, 6))


def test_iv_arith_dispatch():
    a, b = Interval(1, 2), Interval(3, 4)
    assert iv_arith("add", a, b) == Interval(4, 6)
    assert iv_arith("neg", a) == Interval(-2, -1)
    with pytest.raises(ValueError):
        iv_arith("pow", a, b)


def test_from_fraction_encloses():
    iv = Interval.from_fraction(Fraction(1, 3), 20)
    assert inside(iv, Fraction(1, 3)) and iv.width() <= Dyadic(1, -20)
