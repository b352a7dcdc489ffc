"""Compactly supported piecewise-linear test functions.

A :class:`TestFunction` is the linear interpolant of dyadic points
``(x_0, 0), (x_1, y_1), ..., (x_r, 0)`` and vanishes outside ``[x_0, x_r]``.
The trapezoids ``w_n`` (1 on ``[-n, n]``, 0 outside ``[-n-1, n+1]``) and
their complements ``1 - w_n`` are the workhorses of the tightness and
characteristic-function code.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Tuple, Union

from .dyadic import Dyadic, as_dyadic
from .errors import SpecError
from .interval import Interval, _mk
from .piecewise import PiecewisePoly

__all__ = [
    "TestFunction", "Complement", "make_w", "make_w_complement", "eval_tf",
    "modulus_tf", "zero_tf", "tf_from_json", "tf_to_json",
]

_ONE = Dyadic(1)
_ZERO = Dyadic(0)


def _frac_to_dyadic_up(x: Fraction, prec: int = 64) -> Dyadic:
    d = x.denominator
    if d & (d - 1) == 0:
        return Dyadic.from_fraction(x)
    return Dyadic.ceil_of(x, prec)


@dataclass(frozen=True)
class TestFunction:
    """Piecewise-linear function through ``points``, zero outside them."""

    __test__ = False  # keep pytest from collecting this class

    points: Tuple[Tuple[Dyadic, Dyadic], ...]
    lip: Dyadic = field(init=False, compare=False)
    sup_norm: Dyadic = field(init=False, compare=False)

    def __post_init__(self):
        pts = tuple((as_dyadic(x), as_dyadic(y)) for x, y in self.points)
        if not pts:
            raise ValueError("a test function needs at least one point")
        if pts[0][1] != 0 or pts[-1][1] != 0:
            raise ValueError("first and last values must be 0")
        for (x0, _), (x1, _) in zip(pts, pts[1:]):
            if x1 < x0:
                raise ValueError("breakpoints must be ordered")
        # drop duplicate abscissae with equal values
        clean: List[Tuple[Dyadic, Dyadic]] = [pts[0]]
        for p in pts[1:]:
            if p[0] == clean[-1][0]:
                if p[1] != clean[-1][1]:
                    raise ValueError("jump discontinuity at a breakpoint")
                continue
            clean.append(p)
        object.__setattr__(self, "points", tuple(clean))
        lip = Fraction(0)
        for (x0, y0), (x1, y1) in zip(clean, clean[1:]):
            s = abs((y1 - y0).to_fraction() / (x1 - x0).to_fraction())
            lip = max(lip, s)
        object.__setattr__(self, "lip", _frac_to_dyadic_up(lip))
        object.__setattr__(self, "sup_norm", max((abs(y) for _, y in clean), default=_ZERO))

    # -- geometry ------------------------------------------------------------

    @property
    def support(self) -> Tuple[Dyadic, Dyadic]:
        return self.points[0][0], self.points[-1][0]

    @property
    def support_radius(self) -> Dyadic:
        """``max(|a|, |b|)`` for support ``[a, b]``."""
        a, b = self.support
        return max(abs(a), abs(b))

    def is_zero(self) -> bool:
        return self.sup_norm == 0

    def is_even(self) -> bool:
        pts = self.points
        return all(x == -x2 and y == y2 for (x, y), (x2, y2) in zip(pts, reversed(pts)))

    def at(self, x) -> Fraction:
        """Exact value at a rational point."""
        x = Fraction(x.to_fraction() if isinstance(x, Dyadic) else x)
        pts = self.points
        if x <= pts[0][0].to_fraction() or x >= pts[-1][0].to_fraction():
            return Fraction(0)
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            a, b = x0.to_fraction(), x1.to_fraction()
            if a <= x <= b:
                ya, yb = y0.to_fraction(), y1.to_fraction()
                return ya + (yb - ya) * (x - a) / (b - a)
        return Fraction(0)

    def to_poly(self) -> PiecewisePoly:
        return PiecewisePoly.from_points([(x.to_fraction(), y.to_fraction()) for x, y in self.points])

    def l1_norm(self) -> Fraction:
        """Exact ``int |f|``."""
        return self.to_poly().abs_integral_upper()

    def slope_jump_total(self) -> Fraction:
        """Total variation of the derivative, including the jumps at the ends."""
        slopes = [Fraction(0)]
        for (x0, y0), (x1, y1) in zip(self.points, self.points[1:]):
            slopes.append((y1 - y0).to_fraction() / (x1 - x0).to_fraction())
        slopes.append(Fraction(0))
        return sum((abs(b - a) for a, b in zip(slopes, slopes[1:])), Fraction(0))

    def slope_jumps(self) -> List[Tuple[Fraction, Fraction]]:
        """``(x_j, jump of f' at x_j)`` for every breakpoint."""
        slopes = [Fraction(0)]
        for (x0, y0), (x1, y1) in zip(self.points, self.points[1:]):
            slopes.append((y1 - y0).to_fraction() / (x1 - x0).to_fraction())
        slopes.append(Fraction(0))
        return [(x.to_fraction(), slopes[i + 1] - slopes[i]) for i, (x, _) in enumerate(self.points)]

    def to_json(self) -> list:
        return [[x.to_json(), y.to_json()] for x, y in self.points]


@dataclass(frozen=True)
class Complement:
    """``1 - f`` for a test function ``f`` with values in ``[0, 1]``."""

    base: TestFunction

    @property
    def lip(self) -> Dyadic:
        return self.base.lip

    @property
    def sup_norm(self) -> Dyadic:
        return _ONE

    def to_json(self) -> dict:
        return {"kind": "complement", "of": self.base.to_json()}


AnyTF = Union[TestFunction, Complement]


def zero_tf() -> TestFunction:
    return TestFunction(((_ZERO, _ZERO),))


def make_w(n: int) -> TestFunction:
    """Trapezoid equal to 1 on ``[-n, n]`` and supported on ``[-n-1, n+1]``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    pts = [(-n - 1, 0), (-n, 1), (n, 1), (n + 1, 0)]
    return TestFunction(tuple((Dyadic(x), Dyadic(y)) for x, y in pts))


def make_w_complement(n: int) -> Complement:
    return Complement(make_w(n))


def _image(f: TestFunction, x: Interval) -> Tuple[Fraction, Fraction]:
    xs = [x.lo, x.hi] + [bx for bx, _ in f.points if x.lo < bx < x.hi]
    vals = [f.at(v) for v in xs]
    return min(vals), max(vals)


def eval_tf(f: AnyTF, x, prec: int = 64) -> Interval:
    """Enclosure of ``f`` over the interval ``x`` (exact when the values are dyadic)."""
    if not isinstance(x, Interval):
        x = Interval.point(x)
    if isinstance(f, Complement):
        return Interval.point(1) - eval_tf(f.base, x, prec)
    lo, hi = _image(f, x)
    if lo.denominator & (lo.denominator - 1) == 0 and hi.denominator & (hi.denominator - 1) == 0:
        return _mk(Dyadic.from_fraction(lo), Dyadic.from_fraction(hi))
    return Interval.from_fractions(lo, hi, prec)


def modulus_tf(f: AnyTF, k: int) -> int:
    """Smallest ``a >= 0`` with ``lip * 2**-a < 2**-k``."""
    lip = f.lip.to_fraction()
    if lip == 0:
        return 0
    v = lip * (Fraction(2) ** k)
    a = 0
    p = Fraction(1)
    while p <= v:
        p *= 2
        a += 1
    return a


def tf_to_json(f: AnyTF) -> str:
    return json.dumps(f.to_json(), separators=(",", ":"))


def tf_from_json(obj) -> AnyTF:
    """Inverse of :func:`tf_to_json`; also accepts ``{"kind": "w", "n": 2}``."""
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise SpecError(f"invalid test-function JSON: {exc}") from None
    try:
        if isinstance(obj, dict):
            kind = obj.get("kind")
            if kind == "complement":
                base = tf_from_json(obj["of"])
                if not isinstance(base, TestFunction):
                    raise SpecError("complement of a complement")
                return Complement(base)
            if kind == "w":
                return make_w(int(obj["n"]))
            if kind == "w_complement":
                return make_w_complement(int(obj["n"]))
            raise SpecError(f"unknown test-function kind {kind!r}")
        pts = []
        for pair in obj:
            x, y = pair
            pts.append((_dy(x), _dy(y)))
        return TestFunction(tuple(pts))
    except SpecError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"invalid test function: {exc}") from None


def _dy(v) -> Dyadic:
    if isinstance(v, dict):
        return Dyadic.from_json(v)
    return as_dyadic(v)
