"""Exact dyadic rationals ``m * 2**e``.

Dyadic numbers are closed under addition, subtraction and multiplication, so
every certified value in the package is carried with exact endpoints.  The
only inexact step is an explicit rounding to a fixed number of fractional
bits, which callers apply in a known direction.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Union

__all__ = ["Dyadic", "DyadicLike", "as_dyadic", "parse_rational"]


def _raw(m: int, e: int) -> "Dyadic":
    # caller guarantees canonical form
    d = object.__new__(Dyadic)
    d.m = m
    d.e = e
    return d


class Dyadic:
    """The number ``m * 2**e`` in canonical form (``m`` odd, or ``m == e == 0``)."""

    __slots__ = ("m", "e")

    def __init__(self, m: int = 0, e: int = 0):
        if m == 0:
            e = 0
        else:
            tz = (m & -m).bit_length() - 1
            if tz:
                m >>= tz
                e += tz
        self.m = m
        self.e = e

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_int(cls, n: int) -> "Dyadic":
        return cls(n, 0)

    @classmethod
    def from_fraction(cls, x: Fraction) -> "Dyadic":
        """Exact conversion; raises ``ValueError`` if the denominator is not a power of two."""
        x = Fraction(x)
        den = x.denominator
        if den & (den - 1):
            raise ValueError(f"{x} is not a dyadic rational")
        return cls(x.numerator, -(den.bit_length() - 1))

    @classmethod
    def floor_of(cls, x: Union[Fraction, int, "Dyadic"], prec: int) -> "Dyadic":
        """Largest multiple of ``2**-prec`` that is ``<= x``."""
        if isinstance(x, Dyadic):
            return x.round_floor(prec)
        x = Fraction(x)
        return cls((x.numerator << prec) // x.denominator, -prec) if prec >= 0 else \
            cls((x.numerator // (x.denominator << -prec)), -prec)

    @classmethod
    def ceil_of(cls, x: Union[Fraction, int, "Dyadic"], prec: int) -> "Dyadic":
        """Smallest multiple of ``2**-prec`` that is ``>= x``."""
        if isinstance(x, Dyadic):
            return x.round_ceil(prec)
        x = Fraction(x)
        return -cls.floor_of(-x, prec)

    # -- conversions ------------------------------------------------------

    def to_fraction(self) -> Fraction:
        if self.e >= 0:
            return Fraction(self.m << self.e)
        return Fraction(self.m, 1 << -self.e)

    def __float__(self) -> float:
        try:
            return math.ldexp(float(self.m), self.e)
        except OverflowError:
            return float(self.to_fraction())

    def floor(self) -> int:
        return self.m << self.e if self.e >= 0 else self.m >> -self.e

    def ceil(self) -> int:
        return self.m << self.e if self.e >= 0 else -((-self.m) >> -self.e)

    def round_floor(self, prec: int) -> "Dyadic":
        """Round down to a multiple of ``2**-prec``."""
        if self.e >= -prec:
            return self
        return Dyadic(self.m >> (-prec - self.e), -prec)

    def round_ceil(self, prec: int) -> "Dyadic":
        """Round up to a multiple of ``2**-prec``."""
        if self.e >= -prec:
            return self
        return Dyadic(-((-self.m) >> (-prec - self.e)), -prec)

    def scaled_int(self, prec: int) -> int:
        """``self * 2**prec`` as an exact integer; requires ``self.e >= -prec``."""
        s = self.e + prec
        if s < 0:
            raise ValueError("not representable at this precision")
        return self.m << s

    def shift(self, j: int) -> "Dyadic":
        """Exact multiplication by ``2**j``."""
        if self.m == 0:
            return self
        return _raw(self.m, self.e + j)

    def sign(self) -> int:
        return (self.m > 0) - (self.m < 0)

    def bit_size(self) -> int:
        """Rough magnitude: ``ceil(log2 |self|)`` up to one, 0 for zero."""
        if self.m == 0:
            return 0
        return self.m.bit_length() + self.e

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Dyadic):
            if isinstance(other, int):
                other = Dyadic(other)
            else:
                return NotImplemented
        if self.m == 0:
            return other
        if other.m == 0:
            return self
        e1, e2 = self.e, other.e
        if e1 == e2:
            return Dyadic(self.m + other.m, e1)
        if e1 < e2:
            return Dyadic(self.m + (other.m << (e2 - e1)), e1)
        return Dyadic((self.m << (e1 - e2)) + other.m, e2)

    __radd__ = __add__

    def __neg__(self) -> "Dyadic":
        return _raw(-self.m, self.e)

    def __pos__(self) -> "Dyadic":
        return self

    def __abs__(self) -> "Dyadic":
        return self if self.m >= 0 else _raw(-self.m, self.e)

    def __sub__(self, other):
        if not isinstance(other, Dyadic):
            if isinstance(other, int):
                other = Dyadic(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        if isinstance(other, int):
            return Dyadic(other) - self
        return NotImplemented

    def __mul__(self, other):
        if not isinstance(other, Dyadic):
            if isinstance(other, int):
                other = Dyadic(other)
            else:
                return NotImplemented
        if self.m == 0 or other.m == 0:
            return _ZERO
        # product of odd mantissas is odd
        return _raw(self.m * other.m, self.e + other.e)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Dyadic":
        if n < 0:
            raise ValueError("negative powers are not dyadic")
        if self.m == 0:
            return _ONE if n == 0 else _ZERO
        return _raw(self.m ** n, self.e * n)

    # -- comparisons ------------------------------------------------------

    def _cmp(self, other) -> int:
        if isinstance(other, Dyadic):
            a, b = self, other
        elif isinstance(other, int):
            a, b = self, Dyadic(other)
        elif isinstance(other, Fraction):
            f = self.to_fraction()
            return (f > other) - (f < other)
        else:
            raise TypeError(f"cannot compare Dyadic with {type(other).__name__}")
        if a.e == b.e:
            x, y = a.m, b.m
        elif a.e < b.e:
            x, y = a.m, b.m << (b.e - a.e)
        else:
            x, y = a.m << (a.e - b.e), b.m
        return (x > y) - (x < y)

    def __lt__(self, other) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other) -> bool:
        return self._cmp(other) >= 0

    def __eq__(self, other) -> bool:
        if isinstance(other, Dyadic):
            return self.m == other.m and self.e == other.e
        if isinstance(other, (int, Fraction)):
            return self._cmp(other) == 0
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.to_fraction())

    def __bool__(self) -> bool:
        return self.m != 0

    # -- text -------------------------------------------------------------

    def __repr__(self) -> str:
        return f"Dyadic({self.m}, {self.e})"

    def __str__(self) -> str:
        return self.decimal()

    def decimal(self) -> str:
        """Exact decimal expansion (always finite for a dyadic)."""
        if self.e >= 0:
            return str(self.m << self.e)
        digits = -self.e
        n = abs(self.m) * 5 ** digits
        s = str(n).rjust(digits + 1, "0")
        whole, frac = s[:-digits], s[-digits:].rstrip("0")
        out = whole + ("." + frac if frac else "")
        return "-" + out if self.m < 0 else out

    def to_json(self) -> dict:
        return {"m": self.m, "e": self.e}

    @classmethod
    def from_json(cls, obj: dict) -> "Dyadic":
        d = cls(int(obj["m"]), int(obj["e"]))
        return d


_ZERO = Dyadic(0)
_ONE = Dyadic(1)

DyadicLike = Union[Dyadic, int, Fraction]

_POW2_RE = re.compile(r"^\s*([+-]?\d+)\s*/\s*2\s*\^\s*(\d+)\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"3"``, ``"-5/8"``, ``"1/3"``, ``"m/2^e"`` or a finite decimal into a Fraction."""
    if not isinstance(text, str):
        return Fraction(text)
    m = _POW2_RE.match(text)
    if m:
        return Fraction(int(m.group(1)), 1 << int(m.group(2)))
    return Fraction(text.strip())


def as_dyadic(x) -> Dyadic:
    """Coerce ints, dyadic Fractions and strings like ``"m/2^e"`` to :class:`Dyadic`."""
    if isinstance(x, Dyadic):
        return x
    if isinstance(x, int):
        return Dyadic(x)
    if isinstance(x, str):
        x = parse_rational(x)
    if isinstance(x, Fraction):
        return Dyadic.from_fraction(x)
    if isinstance(x, float):
        m, e = math.frexp(x)
        return Dyadic(int(m * (1 << 53)), e - 53)
    raise TypeError(f"cannot interpret {x!r} as a dyadic rational")
