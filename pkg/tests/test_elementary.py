from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from conftest import holds, holds_c, mpf
from effdist import elementary as el
from effdist.dyadic import Dyadic
from effdist.errors import BranchCut
from effdist.interval import ComplexInterval, Interval

points = st.builds(lambda m, e: Dyadic(m, e), st.integers(-2**16, 2**16), st.integers(-14, -4))
precs = st.integers(2, 80)

FUNCS = [
    ("exp", el.exp, mpmath.exp),
    ("sin", el.sin, mpmath.sin),
    ("cos", el.cos, mpmath.cos),
    ("atan", el.atan, mpmath.atan),
    ("gauss", el.exp_neg_sq_half, lambda x: mpmath.exp(-x * x / 2)),
]


@pytest.mark.parametrize("name,fn,ref", FUNCS, ids=[f[0] for f in FUNCS])
@given(x=points, k=precs)
@settings(max_examples=60, deadline=None)
def test_point_enclosure_and_width(name, fn, ref, x, k):
    v = fn(x, k)
    assert holds(v, ref(mpf(x)))
    if name != "exp":
        assert v.width() <= Dyadic(1, -k)


@given(x=points, k=precs)
@settings(max_examples=60, deadline=None)
def test_exp_relative_width(x, k):
    v = el.exp(x, k)
    ref = mpmath.exp(mpf(x))
    assert holds(v, ref)
    assert mpf(v.width()) <= max(1, ref) * mpmath.mpf(2) ** (-k + 1)


@given(x=st.builds(Dyadic, st.integers(1, 2**20), st.integers(-16, 4)), k=precs)
@settings(max_examples=80, deadline=None)
def test_sqrt_log(x, k):
    assert holds(el.sqrt(x, k), mpmath.sqrt(mpf(x)))
    assert holds(el.log(x, k), mpmath.log(mpf(x)))


@given(a=points, w=st.integers(0, 2**12), k=st.integers(4, 40))
@settings(max_examples=80, deadline=None)
def test_interval_arguments_enclose_range(a, w, k):
    b = a + Dyadic(w, -12)
    iv = Interval(a, b)
    for name, fn, ref in FUNCS:
        v = fn(iv, k)
        for s in (a, b, (a + b).shift(-1)):
            assert holds(v, ref(mpf(s))), name


def test_sin_over_a_peak():
    v = el.sin(Interval(Dyadic(1), Dyadic(2)), 20)
    assert v.hi == 1
    c = el.cos(Interval(Dyadic(-1), Dyadic(1)), 20)
    assert c.hi == 1


@pytest.mark.parametrize("k", [1, 10, 53, 200])
def test_constants(k):
    assert holds(el.pi_interval(k), mpmath.pi)
    assert holds(el.ln2_interval(k), mpmath.log(2))
    assert el.pi_interval(k).width() <= Dyadic(1, -k)


def test_cexp_i_unit_circle():
    z = el.cexp_i(Dyadic(3, -1), 30)
    assert holds_c(z, mpmath.expj(mpmath.mpf(1.5)))


def test_clog_right_half_plane():
    z = ComplexInterval.point(Dyadic(1, -1), Dyadic(-3, -2))
    v = el.clog(z, 30)
    assert holds_c(v, mpmath.log(mpmath.mpc(0.5, -0.75)))
    with pytest.raises(BranchCut):
        el.clog(ComplexInterval.point(Dyadic(-1, -1), Dyadic(1, -2)), 20)
    with pytest.raises(BranchCut):
        el.clog(ComplexInterval(Interval(-2, -1), Interval(Dyadic(-1, -4), Dyadic(1, -4))), 20)


def test_domain_errors():
    with pytest.raises(ValueError):
        el.sqrt(Interval(-2, -1), 10)
    with pytest.raises(ValueError):
        el.log(Interval(0, 1), 10)
    with pytest.raises(ValueError):
        el.iv_elem("tan", Interval(0, 1), 10)


def test_iv_elem_dispatch():
    assert holds(el.iv_elem("exp", Interval.point(1), 30), mpmath.e)


def test_deterministic():
    a = el.sin(Dyadic(12345, -10), 100)
    b = el.sin(Dyadic(12345, -10), 100)
    assert a == b
