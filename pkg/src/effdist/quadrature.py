"""Rigorous integration over finite intervals and over the real line.

``integrate_finite`` sums certified cell enclosures: nothing is assumed
beyond the integrand's own enclosures and its Lipschitz bound.  ``integrate_R`` adds an analytic tail from the integrand's envelope.
``integrate_nc`` is a high-order alternative (closed 7-point Newton-Cotes)
for smooth integrands whose eighth derivative is bounded by the caller.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, log2, sqrt as fsqrt, pi as fpi
from typing import Callable, Optional, Union

from . import elementary as el
from .config import cell_budget
from .dyadic import Dyadic, as_dyadic
from .errors import PrecisionOverflow, UnsupportedEnvelope
from .interval import ComplexInterval, Interval, _cmk, _mk

__all__ = [
    "GaussianEnvelope", "ConstantEnvelope", "Integrand", "KernelIntegrand",
    "integrate_finite", "tail_cutoff", "integrate_R", "integrate_nc",
    "kernel_eval", "kernel_modulus", "ceil_log2", "mag_bits",
]


def ceil_log2(x: Fraction) -> int:
    """Smallest integer ``j`` with ``x <= 2**j`` (``x > 0``)."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("ceil_log2 of a non-positive number")
    n, d = x.numerator, x.denominator
    j = n.bit_length() - d.bit_length()
    # adjust so that 2**(j-1) < x <= 2**j
    while Fraction(2) ** j < x:
        j += 1
    while Fraction(2) ** (j - 1) >= x:
        j -= 1
    return j


def mag_bits(x) -> int:
    """``max(0, ceil(log2 x))``, and 0 for ``x <= 0``."""
    x = Fraction(x)
    return max(0, ceil_log2(x)) if x > 0 else 0


def _pow2(j: int) -> Fraction:
    return Fraction(1 << j) if j >= 0 else Fraction(1, 1 << -j)


# -- envelopes ---------------------------------------------------------------

@dataclass(frozen=True)
class GaussianEnvelope:
    """``|f(x)| <= scale * exp(-x**2 / (2 * sigma2))``."""

    sigma2: Fraction
    scale: Fraction

    def tail_upper(self, m: int, prec: int) -> Fraction:
        """Upper bound on ``int_{|x| > m} scale * exp(-x^2/(2 sigma2)) dx``.

        Uses ``P(|Z| > u) <= exp(-u**2/2)`` for a standard normal ``Z``.
        """
        s2 = Fraction(self.sigma2)
        pre = el.sqrt(Interval.from_fraction(2 * s2, prec + 8) * el.pi_interval(prec + 8), prec + 4)
        expo = Interval.from_fraction(-Fraction(m * m) / (2 * s2), prec + 8)
        # prec is chosen by the caller relative to the threshold being tested
        e = el.exp(expo, prec + 4 + ceil_log2(pre.hi.to_fraction() * self.scale + 1))
        return (pre * e).hi.to_fraction() * Fraction(self.scale)

    def at(self, x: Interval, prec: int) -> Fraction:
        """Upper bound of the envelope over ``x``."""
        m = x.mig()
        v = el.exp(Interval.point(-(m * m)).div(Interval.from_fraction(2 * Fraction(self.sigma2), prec), prec), prec)
        return v.hi.to_fraction() * Fraction(self.scale)


@dataclass(frozen=True)
class ConstantEnvelope:
    """``|f(x)| <= M`` and ``f(x) = 0`` for ``|x| > c``."""

    M: Fraction
    c: Fraction

    def at(self, x: Interval, prec: int = 0) -> Fraction:
        if x.mig().to_fraction() > self.c:
            return Fraction(0)
        return Fraction(self.M)


Envelope = Union[GaussianEnvelope, ConstantEnvelope]


@dataclass
class Integrand:
    """A complex-valued function of one real variable.

    ``eval(x, k)`` encloses ``{f(y) : y in x}``; any extra width from
    evaluating transcendental functions is at most ``2**-k``.
    ``lip_on(a, b)`` bounds ``|f'|`` (so each component's slope) on ``[a, b]``.
    """

    eval: Callable[[Interval, int], ComplexInterval]
    lip_on: Callable[[Dyadic, Dyadic], Fraction]
    envelope: Optional[Envelope] = None
    label: str = ""


@dataclass
class KernelIntegrand:
    """A binary function ``F(x, y)`` for kernel integrals in ``y``.

    ``lip_y(x, a, b)`` bounds ``|dF/dy|`` for ``y`` in ``[a, b]``;
    ``lip_x(H)`` bounds ``|dF/dx|`` for ``|x|, |y| <= H``; ``bound`` is
    ``sup |F|`` (effective boundedness) and ``envelope_y`` dominates
    ``|F(x, .)|`` uniformly in ``x`` for Lebesgue integrals.
    """

    eval: Callable[[Interval, Interval, int], ComplexInterval]
    lip_y: Callable[[Interval, Fraction, Fraction], Fraction]
    lip_x: Callable[[Fraction], Fraction]
    bound: Optional[Fraction] = None
    envelope_y: Optional[Envelope] = None
    label: str = ""

    def section(self, x: Interval) -> Integrand:
        return Integrand(
            eval=lambda y, k: self.eval(x, y, k),
            lip_on=lambda a, b: self.lip_y(x, Fraction(a.to_fraction()), Fraction(b.to_fraction())),
            envelope=self.envelope_y,
            label=f"{self.label}(x, .)",
        )


# -- finite intervals ----------------------------------------------------------

def _zero() -> ComplexInterval:
    return ComplexInterval.point(0)


def integrate_finite(f: Integrand, a, b, k: int) -> ComplexInterval:
    """Enclosure of ``int_a^b f`` of width at most ``2**-k`` per component.

    Each cell ``[x, x+h]`` contributes ``h f(mid) +- lip h^2 / 4``, which
    encloses the cell integral whenever ``lip`` bounds the slope.
    """
    a, b = as_dyadic(a), as_dyadic(b)
    if a > b:
        raise ValueError("integrate_finite needs a <= b")
    if a == b:
        return _zero()
    length = (b - a).to_fraction()
    lb = max(0, ceil_log2(length))
    lip = Fraction(f.lip_on(a, b))
    # lip * h * length / 2 <= 2**-(k+1), evaluation slack * length <= 2**-(k+2)
    j = k + (ceil_log2(lip * length) if lip > 0 else -lb)
    ke = k + 2 + lb
    budget = cell_budget()
    target = Dyadic(1, -k)
    lipd = Dyadic.ceil_of(lip, 32)
    while True:
        h = Dyadic(1, -j)
        n = ceil(length / h.to_fraction())
        if n > budget:
            raise PrecisionOverflow(f"integration over [{a}, {b}] needs {n} cells (budget {budget})")
        re_lo = re_hi = im_lo = im_hi = Dyadic(0)
        slack = Dyadic(0)
        x = a
        for _ in range(n):
            y = x + h
            if y > b:
                y = b
            w = y - x
            v = f.eval(Interval.point((x + y).shift(-1)), ke)
            re_lo = re_lo + v.re.lo * w
            re_hi = re_hi + v.re.hi * w
            im_lo = im_lo + v.im.lo * w
            im_hi = im_hi + v.im.hi * w
            slack = slack + w * w
            x = y
        slack = (slack * lipd).shift(-2)
        res = _cmk(_mk(re_lo - slack, re_hi + slack), _mk(im_lo - slack, im_hi + slack))
        if res.width() <= target:
            return res
        j += 1
        ke += 2


# -- the real line ---------------------------------------------------------------

def tail_cutoff(f: Union[Integrand, Envelope], k: int) -> int:
    """An ``m`` with ``int |f| w_m^c < 2**-k``, from the envelope alone."""
    env = f.envelope if isinstance(f, Integrand) else f
    if env is None:
        raise UnsupportedEnvelope("tail_cutoff needs an envelope")
    if isinstance(env, ConstantEnvelope):
        if env.M == 0:
            return 0
        return ceil(Fraction(env.c))
    if env.scale == 0:
        return 0
    thr = _pow2(-k)

    def ok(m: int) -> bool:
        return env.tail_upper(m, k + 8) < thr

    # float guess, then exact minimal search
    s2 = float(env.sigma2)
    val = float(env.scale) * fsqrt(2 * fpi * s2)
    guess = 0
    if val > 0 and val >= float(thr):
        guess = int(fsqrt(max(0.0, 2 * s2 * (k * 0.6931471805599453 + (log2(val) * 0.6931471805599453)))))
    m = max(0, guess - 2)
    while not ok(m):
        m += 1
    while m > 0 and ok(m - 1):
        m -= 1
    return m


def integrate_R(f: Integrand, k: int) -> ComplexInterval:
    """Enclosure of ``int_R f`` of width at most ``2**-k`` per component."""
    env = f.envelope
    if env is None:
        raise UnsupportedEnvelope("integrate_R needs an envelope")
    if isinstance(env, ConstantEnvelope):
        m = tail_cutoff(env, k)
        return integrate_finite(f, -(m + 1), m + 1, k)
    m = tail_cutoff(env, k + 2)
    core = integrate_finite(f, -(m + 1), m + 1, k + 1)
    return core.widen(Dyadic(1, -(k + 2)))


# -- Newton-Cotes ------------------------------------------------------------------

_NC7 = (41, 216, 27, 272, 27, 216, 41)


def integrate_nc(fpt: Callable[[Interval, int], ComplexInterval], a, b, d8, k: int,
                 max_evals: Optional[int] = None) -> ComplexInterval:
    """Composite closed 7-point Newton-Cotes rule with a certified remainder.

    ``d8`` bounds ``|f^(8)|`` on ``[a, b]``.  The rule's error on one panel
    of 6 steps of size ``h`` is ``-(9/1400) h^9 f^(8)(xi)``.  The result
    has width at most ``2**-k`` per component.
    """
    a, b = Fraction(a), Fraction(b)
    if a > b:
        raise ValueError("integrate_nc needs a <= b")
    if a == b:
        return _zero()
    L = b - a
    d8 = Fraction(d8)
    tol = _pow2(-(k + 2))
    P = 1
    while L * Fraction(9, 8400) * (L / (6 * P)) ** 8 * d8 > tol:
        P *= 2
    rem = L * Fraction(9, 8400) * (L / (6 * P)) ** 8 * d8
    nev = 6 * P + 1
    budget = cell_budget() if max_evals is None else max_evals
    if nev > budget:
        raise PrecisionOverflow(f"Newton-Cotes rule needs {nev} evaluations (budget {budget})")
    h = L / (6 * P)
    lb = max(0, ceil_log2(L))
    ke = k + 4 + lb
    rb = Dyadic.ceil_of(rem, k + 4)
    target = Dyadic(1, -k)
    for _ in range(8):
        pn = ke + 16
        acc = _zero()
        for i in range(nev):
            x = a + i * h
            if i % 6:
                c = _NC7[i % 6]
            else:
                c = 41 if i in (0, nev - 1) else 82
            v = fpt(Interval.from_fraction(x, pn), ke)
            acc = acc + v * Dyadic(c)
        w = Interval.from_fraction(h / 140, ke + 8 + lb)
        res = (acc * w).widen(rb).round(k + 4)
        if res.width() <= target:
            return res
        ke += 8
    return res


# -- kernel integrals --------------------------------------------------------------

def kernel_eval(F: KernelIntegrand, x, measure, k: int) -> ComplexInterval:
    """Enclosure of ``int F(x, y) dmu(y)`` (or ``dy`` when ``measure`` is ``"lebesgue"``)."""
    if not isinstance(x, Interval):
        x = Interval.point(x)
    if measure is None or measure == "lebesgue":
        if F.envelope_y is None:
            raise UnsupportedEnvelope("Lebesgue kernel integral needs an envelope in y")
        return integrate_R(F.section(x), k)
    from .distributions import tightness
    from .testfunctions import TestFunction, eval_tf, make_w

    if F.bound is None:
        raise UnsupportedEnvelope("measure kernel integral needs a bound on |F|")
    M = Fraction(F.bound)
    mb = max(0, ceil_log2(M)) if M > 0 else 0
    L = tightness(measure, k + 3 + mb)
    R = L + 1
    lam = Fraction(F.lip_y(x, Fraction(-R), Fraction(R))) + M  # slope of F * w_L
    # interpolation error lam * delta / 2 <= 2**-(k+3)
    j = k + 2 + (ceil_log2(lam) if lam > 0 else 0)
    delta = Dyadic(1, -j)
    n = (2 * R) << j
    if n + 1 > cell_budget():
        raise PrecisionOverflow(f"kernel grid needs {n + 1} points")
    ke = k + 5
    re_pts, im_pts = [], []
    rho = Dyadic(0)
    w = make_w(L)
    for i in range(n + 1):
        y = Dyadic(-R) + delta * i
        wy = eval_tf(w, y)
        if wy.hi.m == 0:
            re_pts.append((y, Dyadic(0)))
            im_pts.append((y, Dyadic(0)))
            continue
        v = F.eval(x, Interval.point(y), ke) * wy
        vr, vi = v.re.round(ke), v.im.round(ke)
        re_pts.append((y, vr.mid()))
        im_pts.append((y, vi.mid()))
        rho = max(rho, vr.rad(), vi.rad())
    pr = measure.windowed_eval(TestFunction(tuple(re_pts)), Dyadic(0), k + 3)
    pi_ = measure.windowed_eval(TestFunction(tuple(im_pts)), Dyadic(0), k + 3)
    slack = Dyadic(1, -(k + 3)) + Dyadic(1, -(k + 3)) + rho
    re = pr.re.widen(slack)
    im = pi_.re.widen(slack)
    return _cmk(re, im)


def kernel_modulus(F: KernelIntegrand, measure, H: int, k: int) -> int:
    """Modulus of ``x -> int F(x, y) dmu(y)`` on ``|x| <= H``.

    The inner precision is ``k' = k + 2*ceil(M) + 3``; the window radius is
    ``max(H, L(k'))`` and the step exponent is the modulus of ``F`` there.
    """
    from .distributions import tightness

    M = Fraction(F.bound)
    kp = k + 2 * ceil(M) + 3
    ell = max(H, tightness(measure, kp))
    lip = Fraction(F.lip_x(Fraction(ell + 1)))
    if lip == 0:
        return 0
    v = lip * _pow2(kp)
    a = 0
    while _pow2(a) <= v:
        a += 1
    return a
