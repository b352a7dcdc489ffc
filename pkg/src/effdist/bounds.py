"""Rational upper bounds used by derivative estimates."""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial, isqrt

__all__ = ["sqrt_upper", "sqrt_lower", "abs_normal_moment_upper", "shifted_moment_upper", "INV_SQRT_2PI_UP"]

# 1/sqrt(2 pi) = 0.3989...
INV_SQRT_2PI_UP = Fraction(2, 5)


def sqrt_upper(x, bits: int = 40) -> Fraction:
    """A rational ``>= sqrt(x)`` within about ``2**-bits`` relative."""
    x = Fraction(x)
    if x <= 0:
        return Fraction(0)
    n = -((-x.numerator << (2 * bits)) // x.denominator)
    r = isqrt(n)
    if r * r < n:
        r += 1
    return Fraction(r, 1 << bits)


def sqrt_lower(x, bits: int = 40) -> Fraction:
    """A rational ``<= sqrt(x)`` within about ``2**-bits`` relative."""
    x = Fraction(x)
    if x <= 0:
        return Fraction(0)
    n = (x.numerator << (2 * bits)) // x.denominator
    return Fraction(isqrt(n), 1 << bits)


def abs_normal_moment_upper(j: int) -> Fraction:
    """Upper bound on ``E|Z|**j`` for a standard normal ``Z``."""
    if j == 0:
        return Fraction(1)
    if j % 2 == 0:
        v = 1
        for i in range(j - 1, 0, -2):
            v *= i
        return Fraction(v)
    # sqrt(2/pi) 2^((j-1)/2) ((j-1)/2)!  with sqrt(2/pi) < 1
    h = (j - 1) // 2
    return Fraction((1 << h) * factorial(h))


def shifted_moment_upper(c, var, r: int) -> Fraction:
    """Upper bound on ``E(c + |S|)**r`` for ``S ~ N(0, var)`` and ``c >= 0``."""
    c, var = Fraction(c), Fraction(var)
    sd = sqrt_upper(var)
    tot = Fraction(0)
    for j in range(r + 1):
        tot += comb(r, j) * c ** (r - j) * sd ** j * abs_normal_moment_upper(j)
    return tot
