"""Certified de Moivre-Laplace limit theorem.

For ``Y_m = (S_m - m p) / sqrt(m p q)`` with ``S_m`` binomial(m, p), the
characteristic function is

    psi_m(t) = (p exp(i t sqrt(q/(m p))) + q exp(-i t sqrt(p/(m q))))**m

and, whenever the bracket ``t^2/2m + |t|^3 ((q/mp)^1.5 + (p/mq)^1.5)`` is
below 1/2,

    |log psi_m(t) + t^2/2| <= |t|^3 ((q/p)^1.5 + (p/q)^1.5) / sqrt(m) + bracket^2.

``dml_modulus`` turns this into an ``m`` threshold for a target precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import List, Optional

from . import elementary as el
from .bounds import sqrt_lower, sqrt_upper
from .config import search_cap
from .dyadic import Dyadic, as_dyadic
from .errors import BranchCut, BudgetExhausted, PrecisionOverflow, SpecError
from .interval import ComplexInterval, Interval, _cmk, _mk
from .reals import RealOracle

__all__ = [
    "BernoulliParams", "DmlBound", "std_binomial_char", "std_binomial_char_iv", "std_radius",
    "remainder_bound", "dml_error_bound", "dml_modulus", "gaussian_char", "log_deviation",
    "clt_gap_rows", "GapRow",
]

_HALF = Dyadic(1, -1)


class BernoulliParams:
    """Success probability ``p`` (a computable real certified to lie in (0, 1))."""

    def __init__(self, p):
        self.p = p if isinstance(p, RealOracle) else RealOracle.parse(p)
        self.q = 1 - self.p
        for prec in (8, 32, 128, 512):
            pi = self.p.eval(prec)
            if pi.lo > 0 and pi.hi < 1:
                return
            if pi.hi <= 0 or pi.lo >= 1:
                break
        raise SpecError(f"cannot certify 0 < p < 1 for p = {self.p.label}")

    def enclosures(self, prec: int):
        return self.p.eval(prec), self.q.eval(prec)

    def __repr__(self) -> str:
        return f"BernoulliParams(p={self.p.label})"


def std_radius(params: BernoulliParams, m: int) -> Fraction:
    """Upper bound on ``|Y_m|``: ``max(sqrt(m q/p), sqrt(m p/q))``."""
    pi, qi = params.enclosures(64)
    r = max(qi.hi.to_fraction() / pi.lo.to_fraction(), pi.hi.to_fraction() / qi.lo.to_fraction())
    return sqrt_upper(m * r)


def _steps(params: BernoulliParams, m: int, prec: int):
    """Enclosures of ``sqrt(q/(m p))`` and ``sqrt(p/(m q))``."""
    pi, qi = params.enclosures(prec + 4)
    mi = Interval.point(m)
    a = el.sqrt(qi.div(mi * pi, prec + 4), prec + 2)
    b = el.sqrt(pi.div(mi * qi, prec + 4), prec + 2)
    return pi, qi, a, b


def _cpow(z: ComplexInterval, m: int, prec: int) -> ComplexInterval:
    out = None
    base = z
    while m:
        if m & 1:
            out = base if out is None else (out * base).round(prec)
        m >>= 1
        if m:
            base = base.sqr().round(prec)
    return out


def std_binomial_char_iv(params: BernoulliParams, m: int, t: Interval, k: int) -> ComplexInterval:
    """Enclosure of ``psi_m`` over the interval ``t``; width ``<= 2**-k`` for a point."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if not isinstance(t, Interval):
        t = Interval.point(as_dyadic(t))
    tb = max(0, t.mag().bit_size())
    w = k + 2 * m.bit_length() + 8
    target = Dyadic(1, -k)
    for _ in range(6):
        pi, qi, a, b = _steps(params, m, w + tb)
        z = el.cexp_i(t * a, w + 2) * pi + el.cexp_i(-(t * b), w + 2) * qi
        res = _cpow(z.round(w + 2), m, w + 2).round(k + 3)
        if not t.is_point() or res.width() <= target:
            return res
        w += 16 + w // 2
    raise PrecisionOverflow(f"psi_{m} at t={t} did not reach width 2^-{k}")


def std_binomial_char(params: BernoulliParams, m: int, t, k: int) -> ComplexInterval:
    """Enclosure of ``psi_m(t) = E exp(i t Y_m)`` at a dyadic ``t``."""
    return std_binomial_char_iv(params, m, Interval.point(as_dyadic(t)), k)


def remainder_bound(n: int, t) -> Interval:
    """``|t|**n / n!``, the Taylor remainder bound for ``exp(i t)`` after ``n`` terms."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not isinstance(t, Interval):
        t = Interval.point(as_dyadic(t))
    v = t.mag().to_fraction() ** n / factorial(n)
    return Interval.from_fraction(v, 64)


@dataclass(frozen=True)
class DmlBound:
    K: Dyadic
    m: int
    main_term: Interval
    square_term: Interval
    bracket: Interval
    total: Interval
    valid: bool

    def below(self, k: int) -> bool:
        """Certified ``valid and total < 2**-k``."""
        return self.valid and self.total.hi < Dyadic(1, -k)

    def to_json(self) -> dict:
        return {
            "K": str(self.K.to_fraction()), "m": self.m, "valid": self.valid,
            "main_term": [self.main_term.lo.decimal(), self.main_term.hi.decimal()],
            "square_term": [self.square_term.lo.decimal(), self.square_term.hi.decimal()],
            "bracket": [self.bracket.lo.decimal(), self.bracket.hi.decimal()],
            "total": [self.total.lo.decimal(), self.total.hi.decimal()],
        }


def _pow_three_halves(x: Interval, prec: int) -> Interval:
    # cube, then square root
    return el.sqrt(x * x * x, prec)


def dml_error_bound(params: BernoulliParams, K, m: int, k: int) -> DmlBound:
    """Bound on ``sup_{|t| <= K} |log psi_m(t) + t**2/2|``, evaluated at ``|t| = K``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    K = abs(as_dyadic(K))
    prec = k + 24 + m.bit_length()
    zero = Interval.point(0)
    if K == 0:
        return DmlBound(K, m, zero, zero, zero, zero, True)
    pi, qi = params.enclosures(prec)
    r_qp = qi.div(pi, prec)
    r_pq = pi.div(qi, prec)
    Ki = Interval.point(K)
    K2 = Ki.sqr()
    K3 = K2 * Ki
    mi = Interval.point(m)
    sm = el.sqrt(mi, prec)
    main = (K3 * (_pow_three_halves(r_qp, prec) + _pow_three_halves(r_pq, prec))).div(sm, prec)
    c1 = _pow_three_halves(r_qp.div(mi, prec), prec)
    c2 = _pow_three_halves(r_pq.div(mi, prec), prec)
    bracket = K2.div(Interval.point(2 * m), prec) + K3 * c1 + K3 * c2
    square = bracket.sqr()
    total = (main + square).round(prec)
    valid = bracket.hi < _HALF
    return DmlBound(K, m, main.round(prec), square.round(prec), bracket.round(prec), total, valid)


def dml_modulus(params: BernoulliParams, K, k: int) -> int:
    """Smallest power of two ``m`` whose bound is valid and below ``2**-k``."""
    K = as_dyadic(K)
    if K <= 0:
        raise ValueError("K must be > 0")
    m = 1
    for _ in range(search_cap()):
        if dml_error_bound(params, K, m, k).below(k):
            return m
        m *= 2
    raise BudgetExhausted(f"no m up to 2^{search_cap()} meets 2^-{k}")


def gaussian_char(t, k: int) -> Interval:
    """Enclosure of ``exp(-t**2/2)`` of width at most ``2**-k``."""
    if not isinstance(t, Interval):
        t = Interval.point(as_dyadic(t))
    return el.exp_neg_sq_half(t, k)


def log_deviation(params: BernoulliParams, m: int, t, k: int) -> Optional[Interval]:
    """Enclosure of ``|log psi_m(t) + t**2/2|`` (principal branch).

    Returns ``None`` when the enclosure of ``psi_m(t)`` reaches the branch cut.
    """
    t = as_dyadic(t)
    psi = std_binomial_char(params, m, t, k + 4)
    try:
        lg = el.clog(psi, k + 2)
    except BranchCut:
        return None
    half_t2 = Interval.point(t * t).shift(-1)
    dev = _cmk(lg.re + half_t2, lg.im)
    s = dev.abs_sq()
    lo = Dyadic.floor_of(sqrt_lower(max(Fraction(0), s.lo.to_fraction()), k + 8), k + 8)
    hi = Dyadic.ceil_of(dev.abs_upper(), k + 8)
    return _mk(lo, hi)


@dataclass(frozen=True)
class GapRow:
    m: int
    t: Dyadic
    psi: ComplexInterval
    gauss: Interval
    gap_upper: Fraction
    allowed: Fraction
    ok: bool


def clt_gap_rows(params: BernoulliParams, m: int, ts, k_target: int, k_eval: int) -> List[GapRow]:
    """Certified ``|psi_m(t) - exp(-t**2/2)|`` against ``exp(-t**2/2) (exp(2**-k_target) - 1)``."""
    rows = []
    e = el.exp(Interval.point(Dyadic(1, -k_target)), k_eval + 4) - Interval.point(1)
    for t in ts:
        t = as_dyadic(t)
        psi = std_binomial_char(params, m, t, k_eval)
        g = gaussian_char(t, k_eval)
        diff = _cmk(psi.re - g, psi.im)
        gap = diff.abs_upper()
        widths = psi.width().to_fraction() + g.width().to_fraction()
        allowed = (g * e).hi.to_fraction() + widths
        rows.append(GapRow(m, t, psi, g, gap, allowed, gap <= allowed))
    return rows
