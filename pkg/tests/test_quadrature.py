from fractions import Fraction

import mpmath
import pytest

from conftest import holds, holds_c, mpf
from effdist import elementary as el
from effdist.distributions import density_uniform, point_mass
from effdist.dyadic import Dyadic
from effdist.errors import PrecisionOverflow, UnsupportedEnvelope
from effdist.interval import ComplexInterval, Interval
from effdist.quadrature import (ConstantEnvelope, GaussianEnvelope, Integrand, KernelIntegrand,
                                integrate_finite, integrate_nc, integrate_R, kernel_eval,
                                kernel_modulus, tail_cutoff)


def gauss_integrand():
    return Integrand(lambda x, k: ComplexInterval(el.exp_neg_sq_half(x, k)),
                     lambda a, b: Fraction(1), envelope=GaussianEnvelope(Fraction(1), Fraction(1)))


def sin_integrand():
    return Integrand(lambda x, k: ComplexInterval(el.sin(x, k)), lambda a, b: Fraction(1))


@pytest.mark.parametrize("k", [4, 8, 12])
def test_integrate_finite_sin(k):
    v = integrate_finite(sin_integrand(), 0, 2, k)
    assert holds(v.re, 1 - mpmath.cos(2))
    assert v.width() <= Dyadic(1, -k)


def test_integrate_finite_complex():
    f = Integrand(lambda x, k: el.cexp_i(x, k), lambda a, b: Fraction(1))
    v = integrate_finite(f, -1, 3, 8)
    assert holds_c(v, (mpmath.expj(3) - mpmath.expj(-1)) / 1j)


@pytest.mark.parametrize("k", [3, 6, 8])
def test_integrate_R_gaussian(k):
    v = integrate_R(gauss_integrand(), k)
    assert holds(v.re, mpmath.sqrt(2 * mpmath.pi))
    assert v.width() <= Dyadic(1, -k)


def test_integrate_R_constant_envelope():
    f = Integrand(lambda x, k: ComplexInterval(Interval.point(1) - x.abs() if x.mag() < 1 else Interval.point(0)),
                  lambda a, b: Fraction(1), envelope=ConstantEnvelope(Fraction(1), Fraction(1)))
    v = integrate_R(f, 8)
    assert holds(v.re, 1)


def test_tail_cutoff_is_sound_and_minimal():
    env = GaussianEnvelope(Fraction(1), Fraction(1))
    for k in (2, 6, 10, 20):
        m = tail_cutoff(env, k)
        tail = lambda c: 2 * mpmath.quad(lambda x: mpmath.exp(-x * x / 2), [c, mpmath.inf])
        assert tail(m) < mpmath.mpf(2) ** -k
        if m > 0:
            # the certified inequality is conservative, so only check monotonicity in k
            assert tail_cutoff(env, k + 4) >= m


def test_missing_envelope():
    with pytest.raises(UnsupportedEnvelope):
        integrate_R(sin_integrand(), 4)
    with pytest.raises(UnsupportedEnvelope):
        tail_cutoff(sin_integrand(), 4)


def test_cell_budget(monkeypatch):
    monkeypatch.setenv("EFFDIST_CELL_BUDGET", "10")
    with pytest.raises(PrecisionOverflow):
        integrate_finite(sin_integrand(), 0, 64, 10)


@pytest.mark.parametrize("k", [6, 12, 20])
def test_newton_cotes(k):
    v = integrate_nc(lambda x, ke: ComplexInterval(el.exp(x, ke)), 0, 1, 3, k)
    assert holds(v.re, mpmath.e - 1)
    assert v.width() <= Dyadic(1, -k)


def _cos_kernel():
    return KernelIntegrand(
        eval=lambda x, y, k: ComplexInterval(el.cos(x * y, k)),
        lip_y=lambda x, a, b: x.mag().to_fraction(),
        lip_x=lambda H: Fraction(H),
        bound=Fraction(1),
    )


def test_kernel_eval_against_measure():
    mu = density_uniform("-1/2", "1/2")
    x = Dyadic(3, -1)
    v = kernel_eval(_cos_kernel(), x, mu, 4)
    assert holds(v.re, mpmath.sin(0.75) / 0.75)
    assert v.width() <= Dyadic(1, -2)


def test_kernel_eval_point_mass():
    v = kernel_eval(_cos_kernel(), Dyadic(1), point_mass("1/2"), 8)
    assert holds(v.re, mpmath.cos(0.5))


def test_kernel_modulus_validity():
    mu = density_uniform("-1/2", "1/2")
    a = kernel_modulus(_cos_kernel(), mu, 2, 4)
    # |d/dx E cos(xY)| <= E|Y| <= 1/4 here, so any step below 2^-a is safe
    g = lambda x: mpmath.sin(x / 2) / (x / 2) if x else mpmath.mpf(1)
    for j in range(-8, 9):
        x = mpmath.mpf(j) / 4
        assert abs(g(x) - g(x + mpmath.mpf(2) ** -a)) < mpmath.mpf(2) ** -4


def test_gaussian_envelope_tail_upper():
    env = GaussianEnvelope(Fraction(4), Fraction(1, 2))
    # two tails of (1/2) exp(-x^2/8)
    exact = mpmath.quad(lambda x: mpmath.exp(-x * x / 8), [3, mpmath.inf])
    assert mpf(env.tail_upper(3, 20)) >= exact
