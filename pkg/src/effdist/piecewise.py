"""Piecewise polynomials with rational coefficients and their Fourier integrals.

A :class:`PiecewisePoly` is zero outside its pieces.  Each piece stores
monomial coefficients in ``x``.  The Fourier integral
``int P(x) exp(i t x) dx`` is computed in closed form: by a Taylor expansion
of the exponential on short pieces (``|t| h <= 2``) and by repeated
integration by parts otherwise.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import List, Sequence, Tuple

from . import elementary as el
from .dyadic import Dyadic
from .interval import ComplexInterval, Interval, _cmk

__all__ = ["PiecewisePoly"]

Piece = Tuple[Fraction, Fraction, Tuple[Fraction, ...]]


def _peval(c: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for a in reversed(c):
        acc = acc * x + a
    return acc


def _pmul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return tuple(out)


def _pderiv(p):
    return tuple(j * p[j] for j in range(1, len(p))) or (Fraction(0),)


def _pshift(p, c):
    """Coefficients of ``u -> p(c + u)``."""
    out = [Fraction(0)] * len(p)
    n = len(p)
    for j in range(n - 1, -1, -1):
        # Horner on polynomials: out = out*(u + c) + p[j]
        nxt = [Fraction(0)] * n
        for i, a in enumerate(out):
            if a:
                nxt[i] += a * c
                if i + 1 < n:
                    nxt[i + 1] += a
        nxt[0] += p[j]
        out = nxt
    return tuple(out)


def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return tuple(p)


def _civ(x: Fraction, prec: int) -> Interval:
    return Interval.from_fraction(x, prec)


class PiecewisePoly:
    """Sum over pieces of ``poly(x) * 1[a <= x < b]``."""

    __slots__ = ("pieces",)

    def __init__(self, pieces: Sequence[Piece]):
        ps = []
        for a, b, c in pieces:
            a, b = Fraction(a), Fraction(b)
            if b < a:
                raise ValueError("piece with b < a")
            if b == a:
                continue
            c = _trim(tuple(Fraction(v) for v in c))
            if len(c) == 1 and c[0] == 0:
                continue
            ps.append((a, b, c))
        ps.sort(key=lambda p: p[0])
        for (a0, b0, _), (a1, _, _) in zip(ps, ps[1:]):
            if a1 < b0:
                raise ValueError("overlapping pieces")
        self.pieces: List[Piece] = ps

    @classmethod
    def from_points(cls, pts: Sequence[Tuple[Fraction, Fraction]]) -> "PiecewisePoly":
        """Linear interpolant through ``pts``; zero outside."""
        pieces = []
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            x0, y0, x1, y1 = map(Fraction, (x0, y0, x1, y1))
            if x1 == x0:
                continue
            s = (y1 - y0) / (x1 - x0)
            pieces.append((x0, x1, (y0 - s * x0, s)))
        return cls(pieces)

    @classmethod
    def constant(cls, a, b, value) -> "PiecewisePoly":
        return cls([(a, b, (Fraction(value),))])

    def breakpoints(self) -> List[Fraction]:
        xs = set()
        for a, b, _ in self.pieces:
            xs.add(a)
            xs.add(b)
        return sorted(xs)

    def support(self) -> Tuple[Fraction, Fraction]:
        if not self.pieces:
            return Fraction(0), Fraction(0)
        return self.pieces[0][0], self.pieces[-1][1]

    def degree(self) -> int:
        return max((len(c) - 1 for _, _, c in self.pieces), default=0)

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        for a, b, c in self.pieces:
            if a <= x < b:
                return _peval(c, x)
        return Fraction(0)

    def _split(self, xs: Sequence[Fraction]) -> List[Piece]:
        out = []
        for a, b, c in self.pieces:
            cuts = [x for x in xs if a < x < b]
            pts = [a] + cuts + [b]
            for u, v in zip(pts, pts[1:]):
                out.append((u, v, c))
        return out

    def __mul__(self, other: "PiecewisePoly") -> "PiecewisePoly":
        xs = sorted(set(self.breakpoints()) | set(other.breakpoints()))
        left = self._split(xs)
        right = {(a, b): c for a, b, c in other._split(xs)}
        out = []
        for a, b, c in left:
            d = right.get((a, b))
            if d is not None:
                out.append((a, b, _pmul(c, d)))
        return PiecewisePoly(out)

    def scale(self, s) -> "PiecewisePoly":
        s = Fraction(s)
        return PiecewisePoly([(a, b, tuple(s * v for v in c)) for a, b, c in self.pieces])

    def integral(self) -> Fraction:
        tot = Fraction(0)
        for a, b, c in self.pieces:
            anti = (Fraction(0),) + tuple(v / (j + 1) for j, v in enumerate(c))
            tot += _peval(anti, b) - _peval(anti, a)
        return tot

    def abs_integral_upper(self) -> Fraction:
        """Upper bound on ``int |P|``; exact when every piece is linear."""
        tot = Fraction(0)
        for a, b, c in self.pieces:
            if len(c) <= 2:
                ya, yb = _peval(c, a), _peval(c, b)
                if ya * yb >= 0:
                    tot += abs(ya + yb) * (b - a) / 2
                else:
                    # split at the root
                    r = a + (b - a) * abs(ya) / (abs(ya) + abs(yb))
                    tot += (abs(ya) * (r - a) + abs(yb) * (b - r)) / 2
            else:
                mid, h = (a + b) / 2, (b - a) / 2
                q = _pshift(c, mid)
                tot += 2 * h * sum(abs(v) * h ** j for j, v in enumerate(q))
        return tot

    def sup_abs_upper(self) -> Fraction:
        m = Fraction(0)
        for a, b, c in self.pieces:
            mid, h = (a + b) / 2, (b - a) / 2
            if len(c) <= 2:
                m = max(m, abs(_peval(c, a)), abs(_peval(c, b)))
            else:
                q = _pshift(c, mid)
                m = max(m, sum(abs(v) * h ** j for j, v in enumerate(q)))
        return m

    # -- Fourier ------------------------------------------------------------

    def fourier(self, t, k: int) -> ComplexInterval:
        """Enclosure of ``int P(x) exp(i t x) dx`` for real ``t`` (a dyadic or an interval).

        For a point ``t`` the width is at most ``2**-k``.
        """
        if not isinstance(t, Interval):
            t = Interval.point(t)
        if not self.pieces:
            return ComplexInterval.point(0)
        kw = k + 6 + len(self.pieces).bit_length()
        for _ in range(6):
            res = self._fourier_at(t, kw)
            if not t.is_point() or res.width() <= Dyadic(1, -k):
                return res
            kw += 12 + kw // 4
        return res

    def _fourier_at(self, t: Interval, kw: int) -> ComplexInterval:
        acc = ComplexInterval.point(0)
        tmig = t.mig().to_fraction()
        for a, b, c in self.pieces:
            h = (b - a) / 2
            if tmig * h <= 2:
                acc = acc + self._piece_taylor(a, b, c, t, kw)
            else:
                acc = acc + self._piece_parts(a, b, c, t, kw)
        return acc

    @staticmethod
    def _piece_taylor(a, b, c, t: Interval, kw: int) -> ComplexInterval:
        mid, h = (a + b) / 2, (b - a) / 2
        q = _pshift(c, mid)
        tmag = t.mag().to_fraction()
        th = tmag * h
        # moments of u^m over [-h, h]
        def mom(m):
            return Fraction(0) if m & 1 else 2 * h ** (m + 1) / (m + 1)
        scale = sum(abs(v) * 2 * h ** (j + 1) / (j + 1) for j, v in enumerate(q))
        tol = Fraction(1, 1 << (kw + 3))
        # remainder after N terms <= th^N / N! * e^th * scale; e^th < 8 here unless t is wide
        eb = 8 if th <= 2 else 3 ** (int(th) + 1)
        N = 1
        rem = th * eb * scale
        while rem >= tol:
            N += 1
            rem = rem * th / N
        # a term-by-term sum: sum_n (i t)^n / n! * sum_j q_j mom(j + n)
        re = Interval.point(0)
        im = Interval.point(0)
        tp = Interval.point(1)
        prec = kw + 4 + N.bit_length()
        for n in range(N):
            coef = sum((v * mom(j + n) for j, v in enumerate(q)), Fraction(0)) / factorial(n)
            if coef:
                term = tp * _civ(coef, prec + max(0, tmag.numerator.bit_length() - tmag.denominator.bit_length()) * n)
                r = n & 3
                if r == 0:
                    re = re + term
                elif r == 1:
                    im = im + term
                elif r == 2:
                    re = re - term
                else:
                    im = im - term
            tp = tp * t if n else t
        rb = Dyadic.ceil_of(rem, kw + 4) if rem else Dyadic(0)
        inner = _cmk(re.widen(rb).round(kw + 4), im.widen(rb).round(kw + 4))
        phase = el.cexp_i(t * Dyadic.from_fraction(mid) if _is_dyadic(mid) else _mulfrac(t, mid, kw + 8),
                          kw + 4 + max(0, scale.numerator.bit_length() - scale.denominator.bit_length()))
        return (phase * inner).round(kw + 2)

    @staticmethod
    def _piece_parts(a, b, c, t: Interval, kw: int) -> ComplexInterval:
        # int_a^b p e^{itx} dx = [e^{itx} sum_j (-1)^j p^(j)(x) / (it)^(j+1)]_a^b
        derivs = [c]
        while len(derivs[-1]) > 1 or derivs[-1][0] != 0:
            d = _pderiv(derivs[-1])
            if len(d) == 1 and d[0] == 0:
                break
            derivs.append(d)
        mag = max(abs(_peval(d, x)) for d in derivs for x in (a, b))
        extra = max(0, mag.numerator.bit_length() - mag.denominator.bit_length()) + 4
        prec = kw + extra + 4
        inv_t = Interval.point(1).div(t, prec + 4)
        out = ComplexInterval.point(0)
        for x, sgn in ((b, 1), (a, -1)):
            ex = el.cexp_i(t * Dyadic.from_fraction(x) if _is_dyadic(x) else _mulfrac(t, x, prec + 8), prec)
            s = ComplexInterval.point(0)
            ip = inv_t
            for j, d in enumerate(derivs):
                v = _civ(_peval(d, x), prec + 4) * ip
                # (-1)^j / (i t)^(j+1) = (-1)^j (-i)^(j+1) / t^(j+1)
                r = (j + 1) & 3
                sg = -1 if j & 1 else 1
                if r == 0:
                    term = _cmk(v, Interval.point(0))
                elif r == 1:
                    term = _cmk(Interval.point(0), -v)
                elif r == 2:
                    term = _cmk(-v, Interval.point(0))
                else:
                    term = _cmk(Interval.point(0), v)
                s = s + (term if sg > 0 else -term)
                ip = (ip * inv_t).round(prec + 8)
            contrib = ex * s
            out = out + contrib if sgn > 0 else out - contrib
        return out.round(kw + 2)


def _is_dyadic(x: Fraction) -> bool:
    d = x.denominator
    return d & (d - 1) == 0


def _mulfrac(t: Interval, x: Fraction, prec: int) -> Interval:
    lo, hi = t.lo.to_fraction() * x, t.hi.to_fraction() * x
    if lo > hi:
        lo, hi = hi, lo
    return Interval.from_fractions(lo, hi, prec)
