from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from effdist.dyadic import Dyadic, as_dyadic, parse_rational

ints = st.integers(-10**12, 10**12)
exps = st.integers(-80, 40)
dyadics = st.builds(Dyadic, ints, exps)


@given(dyadics, dyadics)
def test_ring_ops_are_exact(a, b):
    fa, fb = a.to_fraction(), b.to_fraction()
    assert (a + b).to_fraction() == fa + fb
    assert (a - b).to_fraction() == fa - fb
    assert (a * b).to_fraction() == fa * fb
    assert (-a).to_fraction() == -fa


@given(dyadics, dyadics)
def test_order_matches_fractions(a, b):
    fa, fb = a.to_fraction(), b.to_fraction()
    assert (a < b) == (fa < fb)
    assert (a == b) == (fa == fb)
    if a == b:
        assert hash(a) == hash(b)


@given(st.fractions(), st.integers(0, 60))
def test_directed_rounding_brackets(x, prec):
    lo, hi = Dyadic.floor_of(x, prec), Dyadic.ceil_of(x, prec)
    assert lo.to_fraction() <= x <= hi.to_fraction()
    assert (hi - lo).to_fraction() <= Fraction(1, 1 << prec)


@given(dyadics, st.integers(0, 40))
def test_round_floor_ceil(a, prec):
    assert a.round_floor(prec) <= a <= a.round_ceil(prec)


@given(dyadics)
def test_json_round_trip(a):
    assert Dyadic.from_json(a.to_json()) == a


def test_normal_form():
    assert Dyadic(4, 0) == Dyadic(1, 2)
    assert Dyadic(6, -1).to_fraction() == 3
    assert Dyadic(0, 17) == Dyadic(0)


@pytest.mark.parametrize("text,value", [
    ("5/8", Fraction(5, 8)), ("1/2^3", Fraction(1, 8)), ("-3", Fraction(-3)), ("0.25", Fraction(1, 4)),
])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


def test_as_dyadic_rejects_non_dyadic():
    assert as_dyadic(Fraction(3, 4)) == Dyadic(3, -2)
    with pytest.raises((ValueError, TypeError)):
        as_dyadic(Fraction(1, 3))


def test_decimal_is_exact():
    assert Dyadic(1, -3).decimal() == "0.125"
    assert Fraction(Dyadic(-5, -4).decimal()) == Fraction(-5, 16)
