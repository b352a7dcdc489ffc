"""Closed intervals with dyadic endpoints, real and complex.

Arithmetic on :class:`Interval` is exact; the result of ``a op b`` is the
exact image set ``{x op y}`` (its hull, for products).  Rounding only happens
in :meth:`Interval.round`, division and square roots, and always outward.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

from .dyadic import Dyadic, as_dyadic

__all__ = ["Interval", "ComplexInterval", "iv_arith", "as_interval"]

_ZERO = Dyadic(0)
_ONE = Dyadic(1)


def _mk(lo: Dyadic, hi: Dyadic) -> "Interval":
    iv = object.__new__(Interval)
    iv.lo = lo
    iv.hi = hi
    return iv


class Interval:
    """The set ``[lo, hi]`` with ``lo <= hi`` dyadic."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = as_dyadic(lo)
        hi = lo if hi is None else as_dyadic(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    # -- constructors -----------------------------------------------------

    @classmethod
    def point(cls, x) -> "Interval":
        d = as_dyadic(x)
        return _mk(d, d)

    @classmethod
    def from_fraction(cls, x: Fraction, prec: int) -> "Interval":
        """Tightest enclosure of ``x`` by multiples of ``2**-prec``."""
        x = Fraction(x)
        if x.denominator & (x.denominator - 1) == 0:
            d = Dyadic.from_fraction(x)
            if d.e >= -prec:
                return _mk(d, d)
        return _mk(Dyadic.floor_of(x, prec), Dyadic.ceil_of(x, prec))

    @classmethod
    def from_fractions(cls, lo: Fraction, hi: Fraction, prec: int) -> "Interval":
        return _mk(Dyadic.floor_of(lo, prec), Dyadic.ceil_of(hi, prec))

    @classmethod
    def ball(cls, center, radius) -> "Interval":
        c, r = as_dyadic(center), as_dyadic(radius)
        if r < 0:
            raise ValueError("negative radius")
        return _mk(c - r, c + r)

    @classmethod
    def hull_of(cls, items: Iterable["Interval"]) -> "Interval":
        items = list(items)
        lo = min(i.lo for i in items)
        hi = max(i.hi for i in items)
        return _mk(lo, hi)

    # -- queries ----------------------------------------------------------

    def width(self) -> Dyadic:
        return self.hi - self.lo

    def mid(self) -> Dyadic:
        return (self.lo + self.hi).shift(-1)

    def rad(self) -> Dyadic:
        return (self.hi - self.lo).shift(-1)

    def mag(self) -> Dyadic:
        """``max |x|`` over the interval."""
        a, b = abs(self.lo), abs(self.hi)
        return a if a >= b else b

    def mig(self) -> Dyadic:
        """``min |x|`` over the interval."""
        if self.lo.m > 0:
            return self.lo
        if self.hi.m < 0:
            return -self.hi
        return _ZERO

    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains_zero(self) -> bool:
        return self.lo.m <= 0 <= self.hi.m

    def __contains__(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        if isinstance(x, float):
            return float(self.lo) <= x <= float(self.hi)
        if not isinstance(x, (Dyadic, int, Fraction)):
            x = Fraction(x)
        return self.lo <= x and self.hi >= x

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def hull(self, other: "Interval") -> "Interval":
        lo = self.lo if self.lo <= other.lo else other.lo
        hi = self.hi if self.hi >= other.hi else other.hi
        return _mk(lo, hi)

    def intersection(self, other: "Interval") -> "Interval":
        lo = self.lo if self.lo >= other.lo else other.lo
        hi = self.hi if self.hi <= other.hi else other.hi
        if lo > hi:
            raise ValueError("disjoint intervals")
        return _mk(lo, hi)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Interval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self) -> int:
        return hash((self.lo, self.hi))

    def __repr__(self) -> str:
        return f"Interval({self.lo.decimal()}, {self.hi.decimal()})"

    def __iter__(self):
        yield self.lo
        yield self.hi

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other) -> "Interval":
        if isinstance(other, Interval):
            return _mk(self.lo + other.lo, self.hi + other.hi)
        d = as_dyadic(other)
        return _mk(self.lo + d, self.hi + d)

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        return _mk(-self.hi, -self.lo)

    def __sub__(self, other) -> "Interval":
        if isinstance(other, Interval):
            return _mk(self.lo - other.hi, self.hi - other.lo)
        d = as_dyadic(other)
        return _mk(self.lo - d, self.hi - d)

    def __rsub__(self, other) -> "Interval":
        return (-self) + other

    def __mul__(self, other) -> "Interval":
        if not isinstance(other, Interval):
            return self.scale(as_dyadic(other))
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        if a.m >= 0 and c.m >= 0:
            return _mk(a * c, b * d)
        if b.m <= 0 and d.m <= 0:
            return _mk(b * d, a * c)
        p = (a * c, a * d, b * c, b * d)
        return _mk(min(p), max(p))

    __rmul__ = __mul__

    def scale(self, d: Dyadic) -> "Interval":
        if d.m >= 0:
            return _mk(self.lo * d, self.hi * d)
        return _mk(self.hi * d, self.lo * d)

    def shift(self, j: int) -> "Interval":
        """Exact multiplication by ``2**j``."""
        return _mk(self.lo.shift(j), self.hi.shift(j))

    def sqr(self) -> "Interval":
        """``{x*x}``, tighter than ``self * self`` when the interval straddles 0."""
        if self.lo.m >= 0:
            return _mk(self.lo * self.lo, self.hi * self.hi)
        if self.hi.m <= 0:
            return _mk(self.hi * self.hi, self.lo * self.lo)
        m = self.mag()
        return _mk(_ZERO, m * m)

    def __pow__(self, n: int) -> "Interval":
        if n < 0:
            raise ValueError("negative power")
        if n == 0:
            return _mk(_ONE, _ONE)
        if n % 2 == 0:
            return self.sqr() ** (n // 2) if n > 2 else self.sqr()
        lo, hi = self.lo ** n, self.hi ** n
        return _mk(lo, hi)

    def abs(self) -> "Interval":
        return _mk(self.mig(), self.mag())

    def round(self, prec: int) -> "Interval":
        """Outward rounding to multiples of ``2**-prec``."""
        return _mk(self.lo.round_floor(prec), self.hi.round_ceil(prec))

    def widen(self, r) -> "Interval":
        r = as_dyadic(r)
        return _mk(self.lo - r, self.hi + r)

    def div(self, other: "Interval", prec: int) -> "Interval":
        """Outward-rounded enclosure of ``self / other`` (``other`` must exclude 0)."""
        if not isinstance(other, Interval):
            other = Interval.point(other)
        if other.contains_zero():
            raise ZeroDivisionError("divisor interval contains zero")
        a, b = self.lo.to_fraction(), self.hi.to_fraction()
        c, d = other.lo.to_fraction(), other.hi.to_fraction()
        q = (a / c, a / d, b / c, b / d)
        return Interval.from_fractions(min(q), max(q), prec)

    def div_int(self, n: int, prec: int) -> "Interval":
        if n == 0:
            raise ZeroDivisionError
        if n & (n - 1) == 0 and n > 0:
            return self.shift(-(n.bit_length() - 1))
        return self.div(Interval.point(n), prec)

    def to_fractions(self) -> tuple:
        return self.lo.to_fraction(), self.hi.to_fraction()

    def to_json(self) -> dict:
        return {"lo": self.lo.to_json(), "hi": self.hi.to_json()}


def as_interval(x) -> Interval:
    if isinstance(x, Interval):
        return x
    return Interval.point(x)


class ComplexInterval:
    """Rectangle ``re + i*im`` of two intervals."""

    __slots__ = ("re", "im")

    def __init__(self, re: Interval, im: Interval = None):
        self.re = as_interval(re)
        self.im = Interval.point(0) if im is None else as_interval(im)

    @classmethod
    def point(cls, re, im=0) -> "ComplexInterval":
        return cls(Interval.point(re), Interval.point(im))

    @classmethod
    def box(cls, radius) -> "ComplexInterval":
        """``[-r, r] + i[-r, r]``."""
        r = as_dyadic(radius)
        b = _mk(-r, r)
        return cls(b, b)

    def width(self) -> Dyadic:
        """Largest component width."""
        a, b = self.re.width(), self.im.width()
        return a if a >= b else b

    def __add__(self, other) -> "ComplexInterval":
        if isinstance(other, ComplexInterval):
            return _cmk(self.re + other.re, self.im + other.im)
        return _cmk(self.re + other, self.im)

    __radd__ = __add__

    def __sub__(self, other) -> "ComplexInterval":
        if isinstance(other, ComplexInterval):
            return _cmk(self.re - other.re, self.im - other.im)
        return _cmk(self.re - other, self.im)

    def __neg__(self) -> "ComplexInterval":
        return _cmk(-self.re, -self.im)

    def __mul__(self, other) -> "ComplexInterval":
        if isinstance(other, ComplexInterval):
            a, b, c, d = self.re, self.im, other.re, other.im
            return _cmk(a * c - b * d, a * d + b * c)
        if isinstance(other, Interval):
            return _cmk(self.re * other, self.im * other)
        d = as_dyadic(other)
        return _cmk(self.re.scale(d), self.im.scale(d))

    __rmul__ = __mul__

    def sqr(self) -> "ComplexInterval":
        a, b = self.re, self.im
        return _cmk(a.sqr() - b.sqr(), (a * b).shift(1))

    def mul_i(self) -> "ComplexInterval":
        return _cmk(-self.im, self.re)

    def conj(self) -> "ComplexInterval":
        return _cmk(self.re, -self.im)

    def shift(self, j: int) -> "ComplexInterval":
        return _cmk(self.re.shift(j), self.im.shift(j))

    def widen(self, r) -> "ComplexInterval":
        return _cmk(self.re.widen(r), self.im.widen(r))

    def round(self, prec: int) -> "ComplexInterval":
        return _cmk(self.re.round(prec), self.im.round(prec))

    def abs_sq(self) -> Interval:
        return self.re.sqr() + self.im.sqr()

    def abs_upper(self) -> Fraction:
        """A rational upper bound on ``max |z|`` over the rectangle."""
        s = self.abs_sq().hi.to_fraction()
        return _sqrt_upper(s)

    def hull(self, other: "ComplexInterval") -> "ComplexInterval":
        return _cmk(self.re.hull(other.re), self.im.hull(other.im))

    def intersects(self, other: "ComplexInterval") -> bool:
        return self.re.intersects(other.re) and self.im.intersects(other.im)

    def __contains__(self, z) -> bool:
        if isinstance(z, ComplexInterval):
            return z.re in self.re and z.im in self.im
        if isinstance(z, complex):
            return z.real in self.re and z.imag in self.im
        if isinstance(z, tuple):
            return z[0] in self.re and z[1] in self.im
        return z in self.re and 0 in self.im

    def __eq__(self, other) -> bool:
        if not isinstance(other, ComplexInterval):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"ComplexInterval(re={self.re!r}, im={self.im!r})"


def _cmk(re: Interval, im: Interval) -> ComplexInterval:
    z = object.__new__(ComplexInterval)
    z.re = re
    z.im = im
    return z


def _sqrt_upper(x: Fraction, bits: int = 64) -> Fraction:
    from math import isqrt

    if x <= 0:
        return Fraction(0)
    n = -((-x.numerator << (2 * bits)) // x.denominator)
    r = isqrt(n)
    if r * r < n:
        r += 1
    return Fraction(r, 1 << bits)


def iv_arith(op: str, a: Interval, b: Union[Interval, None] = None) -> Interval:
    """Dispatch ``add``, ``sub``, ``mul`` or ``neg`` on intervals (exact)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    raise ValueError(f"unknown interval op {op!r}")
