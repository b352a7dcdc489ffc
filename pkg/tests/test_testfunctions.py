from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from effdist.dyadic import Dyadic
from effdist.errors import SpecError
from effdist.interval import Interval
from effdist.testfunctions import (Complement, TestFunction, eval_tf, make_w, make_w_complement,
                                   modulus_tf, tf_from_json, tf_to_json, zero_tf)

xs = st.builds(lambda j: Fraction(j, 64), st.integers(-64 * 12, 64 * 12))


@st.composite
def bumps(draw):
    n = draw(st.integers(1, 5))
    steps = draw(st.lists(st.integers(1, 16), min_size=n + 1, max_size=n + 1))
    x = Fraction(draw(st.integers(-64, 0)), 8)
    pts = [(x, Fraction(0))]
    for i, s in enumerate(steps):
        x += Fraction(s, 8)
        y = Fraction(0) if i == n else Fraction(draw(st.integers(-8, 8)), 4)
        pts.append((x, y))
    return TestFunction(tuple((Dyadic.from_fraction(a), Dyadic.from_fraction(b)) for a, b in pts))


@given(st.integers(0, 8), xs)
def test_partition_of_unity(n, x):
    d = Dyadic.from_fraction(x)
    assert eval_tf(make_w(n), d) + eval_tf(make_w_complement(n), d) == Interval.point(1)


@given(st.integers(0, 8), xs)
def test_sandwich_and_monotone(n, x):
    d = Dyadic.from_fraction(x)
    v, v1 = eval_tf(make_w(n), d), eval_tf(make_w(n + 1), d)
    assert 0 <= v.lo and v.hi <= 1
    assert v.hi <= v1.lo
    if abs(x) <= n:
        assert v == Interval.point(1)
    if abs(x) >= n + 1:
        assert v == Interval.point(0)


@given(bumps(), xs, xs, st.integers(0, 12))
@settings(max_examples=200)
def test_modulus_validity(f, x, y, k):
    a = modulus_tf(f, k)
    if abs(x - y) < Fraction(1, 1 << a):
        assert abs(f.at(x) - f.at(y)) < Fraction(1, 1 << k)


@given(bumps(), xs, st.integers(0, 12))
def test_interval_eval_contains_samples(f, x, w):
    lo = Dyadic.from_fraction(x)
    hi = lo + Dyadic(w, -4)
    iv = eval_tf(f, Interval(lo, hi))
    for s in (x, x + Fraction(w, 32), x + Fraction(w, 16)):
        assert iv.lo.to_fraction() <= f.at(s) <= iv.hi.to_fraction()


@given(bumps())
def test_json_round_trip(f):
    assert tf_from_json(tf_to_json(f)) == f


def test_w_shape():
    w = make_w(2)
    assert w.support == (Dyadic(-3), Dyadic(3))
    assert w.lip == 1 and w.sup_norm == 1 and w.is_even()
    assert w.l1_norm() == 5
    assert w.slope_jump_total() == 4
    assert isinstance(make_w_complement(2), Complement)


def test_modulus_values():
    assert modulus_tf(make_w(1), 0) == 1
    assert modulus_tf(make_w(1), 3) == 4
    assert modulus_tf(zero_tf(), 10) == 0


def test_json_kinds():
    assert tf_from_json({"kind": "w", "n": 3}) == make_w(3)
    assert isinstance(tf_from_json('{"kind": "w_complement", "n": 1}'), Complement)
    for bad in ('{"kind": "nope"}', "[[0, 1], [1, 0]]", "not json", '[[1, 0], [0, 0]]'):
        with pytest.raises(SpecError):
            tf_from_json(bad)


def test_constructor_rejects_bad_points():
    with pytest.raises(ValueError):
        TestFunction(((Dyadic(0), Dyadic(1)), (Dyadic(1), Dyadic(0))))
    with pytest.raises(ValueError):
        make_w(-1)
