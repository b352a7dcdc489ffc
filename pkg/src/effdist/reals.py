"""Computable reals as precision-indexed interval oracles."""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Callable, Optional

from .dyadic import Dyadic, as_dyadic, parse_rational
from .elementary import pi_interval
from .interval import Interval

__all__ = ["RealOracle", "real_at"]


class RealOracle:
    """A real number given by ``eval(k)``, an interval of width ``<= 2**-k`` containing it.

    ``exact`` holds the value when it is a known rational; arithmetic on
    oracles keeps it when possible so downstream code can take exact paths.
    """

    __slots__ = ("_fn", "exact", "label", "_cache")

    def __init__(self, fn: Callable[[int], Interval], exact: Optional[Fraction] = None,
                 label: str = ""):
        self._fn = fn
        self.exact = exact
        self.label = label
        self._cache = {}

    def eval(self, k: int) -> Interval:
        if k < 0:
            k = 0
        iv = self._cache.get(k)
        if iv is None:
            iv = self._fn(k)
            self._cache[k] = iv
        return iv

    __call__ = eval

    def __repr__(self) -> str:
        return f"RealOracle({self.label or '?'})"

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_dyadic(cls, x) -> "RealOracle":
        d = as_dyadic(x)
        iv = Interval.point(d)
        return cls(lambda k: iv, exact=d.to_fraction(), label=d.decimal())

    @classmethod
    def from_fraction(cls, x) -> "RealOracle":
        x = Fraction(x)
        if x.denominator & (x.denominator - 1) == 0:
            return cls.from_dyadic(x)
        return cls(lambda k: Interval.from_fraction(x, k), exact=x, label=str(x))

    @classmethod
    def sqrt_of(cls, x) -> "RealOracle":
        """Square root of a nonnegative rational, by integer square roots."""
        x = Fraction(x)
        if x < 0:
            raise ValueError("square root of a negative number")

        def fn(k: int) -> Interval:
            n = (x.numerator << (2 * k)) // x.denominator
            r = isqrt(n)
            lo = Dyadic(r, -k)
            if r * r * x.denominator == x.numerator << (2 * k):
                return Interval(lo, lo)
            return Interval(lo, Dyadic(r + 1, -k))

        return cls(fn, label=f"sqrt({x})")

    @classmethod
    def pi(cls) -> "RealOracle":
        return cls(pi_interval, label="pi")

    @classmethod
    def parse(cls, text) -> "RealOracle":
        """``"5/8"``, ``"1/3"``, ``"m/2^e"``, decimals and ``"sqrt(r)"``."""
        if isinstance(text, RealOracle):
            return text
        if isinstance(text, str):
            s = text.strip()
            if s.startswith("sqrt(") and s.endswith(")"):
                return cls.sqrt_of(parse_rational(s[5:-1]))
            if s == "pi":
                return cls.pi()
            return cls.from_fraction(parse_rational(s))
        if isinstance(text, (int, Fraction, Dyadic)):
            return cls.from_fraction(Fraction(text.to_fraction() if isinstance(text, Dyadic) else text))
        raise TypeError(f"cannot build a real from {text!r}")

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other) -> "RealOracle":
        o = RealOracle.parse(other) if not isinstance(other, RealOracle) else other
        ex = self.exact + o.exact if self.exact is not None and o.exact is not None else None
        if ex is not None:
            return RealOracle.from_fraction(ex)
        return RealOracle(lambda k: self.eval(k + 1) + o.eval(k + 1), label=f"({self.label}+{o.label})")

    __radd__ = __add__

    def __neg__(self) -> "RealOracle":
        if self.exact is not None:
            return RealOracle.from_fraction(-self.exact)
        return RealOracle(lambda k: -self.eval(k), label=f"-{self.label}")

    def __sub__(self, other) -> "RealOracle":
        o = RealOracle.parse(other) if not isinstance(other, RealOracle) else other
        return self + (-o)

    def __rsub__(self, other) -> "RealOracle":
        return RealOracle.parse(other) + (-self)


def real_at(r: RealOracle, k: int) -> Interval:
    """Enclosure of ``r`` of width at most ``2**-k``."""
    return r.eval(k)
