"""Characteristic functions as certified oracles.

``char_from_dist`` turns any distribution oracle into its characteristic
function by splitting off a tight window; the closed-form families
(``constant_one``, ``sinc_uniform``, ``gaussian``, ``binomial_std``) are
evaluated directly.  ``equicont_modulus`` and ``levy_transfer`` carry
convergence of distributions over to their characteristic functions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Optional, Tuple

from . import elementary as el
from .bounds import abs_normal_moment_upper
from .config import grid_cap
from .convergence import ConvergenceCert
from .distributions import DistOracle, _as_t, seq_tightness, tightness
from .dyadic import Dyadic, parse_rational
from .errors import GridBudgetExceeded, SpecError
from .interval import ComplexInterval, Interval, _cmk, _mk
from .quadrature import ceil_log2
from .reals import RealOracle
from .testfunctions import make_w

__all__ = [
    "CharOracle", "ConvergenceCert", "char_from_dist", "constant_one", "sinc_uniform",
    "gaussian_phi", "binomial_std", "equicont_modulus", "levy_transfer", "levy_grid",
    "char_from_spec", "lip_modulus", "sinc", "sinc_shrinking_cert",
]

Band = Tuple[Fraction, Callable[[Interval, int], ComplexInterval]]


def lip_modulus(lip, k: int) -> int:
    """Smallest ``b >= 0`` with ``lip * 2**-b <= 2**-k``."""
    lip = Fraction(lip)
    if lip <= 0:
        return 0
    return max(0, k + ceil_log2(lip))


def _window_modulus(L: int, k: int) -> int:
    # smallest b with 2**b > (L + 1) * 2**(k + 2)
    return k + 2 + (L + 1).bit_length()


@dataclass
class CharOracle:
    """A characteristic function ``phi(t) = mu(exp(i t x))``.

    ``fn(t, k)`` encloses ``phi`` over an interval ``t``; for a point ``t``
    the width is at most ``2**-k`` per component.  ``modulus(k)`` is a
    step exponent ``b`` with ``|t - s| < 2**-b`` implying
    ``|phi(t) - phi(s)| < 2**-k``.

    The optional ``deriv_bound(r)`` bounds ``sup |phi^(r)|``.  When it is
    not known, ``band(j)`` returns ``(a, fn_a)`` where ``fn_a`` is a
    characteristic-like function of a measure carried by ``[-a, a]`` and
    ``|phi - fn_a| < 2**-j`` everywhere.
    """

    fn: Callable[[Interval, int], ComplexInterval]
    modulus: Callable[[int], int]
    unit_at_zero: bool = True
    pos_def: bool = True
    deriv_bound: Optional[Callable[[int], Fraction]] = None
    band: Optional[Callable[[int], Band]] = None
    label: str = ""
    params: dict = field(default_factory=dict)

    def eval(self, t, k: int) -> ComplexInterval:
        tt = _as_t(t)
        if isinstance(tt, RealOracle):
            b = self.modulus(k + 2)
            ti = tt.eval(b + 1)
            return self.fn(Interval.point(ti.mid()), k + 1).widen(Dyadic(1, -(k + 2)))
        return self.fn(tt, k)

    __call__ = eval

    def __repr__(self) -> str:
        return f"CharOracle({self.label or self.params})"


# -- from a distribution ------------------------------------------------------

def char_from_dist(mu: DistOracle) -> CharOracle:
    """The characteristic function of ``mu``, evaluated through a tight window."""
    R = mu.support_radius()

    def fn(t: Interval, k: int) -> ComplexInterval:
        L = tightness(mu, k + 2)
        v = mu.windowed_eval(make_w(L), t, k + 2)
        if R is not None and R <= L:
            return v
        return v.widen(Dyadic(1, -(k + 2)))

    def modulus(k: int) -> int:
        return _window_modulus(tightness(mu, k + 2), k)

    def band(j: int) -> Band:
        L = tightness(mu, j)
        w = make_w(L)
        return Fraction(L + 1), lambda t, k: mu.windowed_eval(w, t, k)

    deriv_bound = None
    if R is not None:
        Rf = Fraction(R)
        deriv_bound = lambda r: Rf ** r

    return CharOracle(fn, modulus, deriv_bound=deriv_bound, band=None if R is not None else band,
                      label=f"char({mu.params()})", params={"kind": "char_of", "dist": mu.params()})


# -- closed-form families ----------------------------------------------------

def constant_one() -> CharOracle:
    """``phi = 1``, the characteristic function of the point mass at 0."""
    one = ComplexInterval.point(1)
    return CharOracle(lambda t, k: one, lambda k: 0,
                      deriv_bound=lambda r: Fraction(1 if r == 0 else 0),
                      label="constant_one", params={"kind": "constant_one"})


def sinc(u: Interval, k: int) -> Interval:
    """Enclosure of ``sin(u)/u`` (1 at 0) over ``u``; width about ``2**-k`` for a point."""
    one = Fraction(1)
    mig, mag = u.mig().to_fraction(), u.mag().to_fraction()
    if mig >= one:
        p = k + 4 + max(0, mag.numerator.bit_length() - mag.denominator.bit_length())
        return el.sin(u, p).div(u, k + 4)
    if mag > 2:
        return _mk(Dyadic(-1, -2), Dyadic(1))
    # alternating series 1 - u^2/3! + u^4/5! - ...
    tol = Fraction(1, 1 << (k + 3))
    N = 1
    while mag ** (2 * N) / factorial(2 * N + 1) >= tol:
        N += 1
    prec = k + 8
    u2 = u.sqr().round(prec + 4)
    coef = [Interval.from_fraction(Fraction((-1) ** j, factorial(2 * j + 1)), prec + 4) for j in range(N)]
    acc = coef[-1]
    for c in reversed(coef[:-1]):
        acc = (acc * u2 + c).round(prec + 4)
    rem = Dyadic.ceil_of(mag ** (2 * N) / factorial(2 * N + 1), prec)
    return acc.widen(rem).round(k + 3)


def sinc_uniform(a="1/2") -> CharOracle:
    """``phi(t) = sin(a t)/(a t)``, the characteristic function of uniform ``[-a, a]``."""
    af = parse_rational(a) if isinstance(a, str) else Fraction(a)
    if af <= 0:
        raise SpecError("sinc_uniform needs a > 0")
    exact = af.denominator & (af.denominator - 1) == 0

    def fn(t: Interval, k: int) -> ComplexInterval:
        if exact:
            u = t * Dyadic.from_fraction(af)
        else:
            u = t * Interval.from_fraction(af, k + 8 + max(0, t.mag().bit_size()))
        return _cmk(sinc(u, k), Interval.point(0))

    return CharOracle(fn, lambda k: lip_modulus(af, k),
                      deriv_bound=lambda r: af ** r,
                      label=f"sinc_uniform({af})", params={"kind": "sinc_uniform", "a": str(af)})


def gaussian_phi() -> CharOracle:
    """``phi(t) = exp(-t**2/2)``."""
    zero = Interval.point(0)

    def fn(t: Interval, k: int) -> ComplexInterval:
        return _cmk(el.exp_neg_sq_half(t, k + 1), zero)

    # |phi'| <= exp(-1/2) < 1
    return CharOracle(fn, lambda k: k, deriv_bound=abs_normal_moment_upper,
                      label="gaussian", params={"kind": "gaussian"})


def binomial_std(p="1/2", m: int = 1) -> CharOracle:
    """Characteristic function of a standardized binomial(m, p) count."""
    from .dml import BernoulliParams, std_binomial_char_iv, std_radius

    bp = p if isinstance(p, BernoulliParams) else BernoulliParams(p)
    if m < 1:
        raise SpecError("binomial_std needs m >= 1")
    R = std_radius(bp, m)

    def fn(t: Interval, k: int) -> ComplexInterval:
        return std_binomial_char_iv(bp, m, t, k)

    return CharOracle(fn, lambda k: lip_modulus(R, k), deriv_bound=lambda r: R ** r,
                      label=f"binomial_std({bp.p.label}, {m})",
                      params={"kind": "binomial_std", "p": bp.p.label, "m": m})


def char_from_spec(obj) -> CharOracle:
    """Build a characteristic function from a family id, or from a distribution spec."""
    from .distributions import dist_from_spec

    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise SpecError(f"invalid characteristic-function JSON: {exc}") from None
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SpecError("characteristic-function spec must be an object with a 'kind'")
    kind = obj["kind"]
    try:
        if kind == "constant_one":
            return constant_one()
        if kind == "sinc_uniform":
            return sinc_uniform(str(obj.get("a", "1/2")))
        if kind == "gaussian":
            return gaussian_phi()
        if kind == "binomial_std":
            return binomial_std(str(obj.get("p", "1/2")), int(obj.get("m", 1)))
        if kind == "char_of":
            return char_from_dist(dist_from_spec(obj["dist"]))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, SpecError):
            raise
        raise SpecError(f"invalid {kind} spec: {exc}") from None
    return char_from_dist(dist_from_spec(obj))


# -- convergence transfers ------------------------------------------------------

def equicont_modulus(cert: ConvergenceCert, k: int) -> int:
    """A step exponent valid for every term of the sequence and for its limit."""
    return _window_modulus(seq_tightness(cert, k + 2), k)


def levy_grid(M: int, beta: int):
    """The dyadic frequencies ``-M + j 2**-beta`` for ``0 <= j <= 2 M 2**beta``."""
    n = 2 * M * (1 << beta) + 1
    if n > grid_cap():
        raise GridBudgetExceeded(f"frequency grid of {n} points exceeds the cap {grid_cap()}")
    step = Dyadic(1, -beta)
    return [Dyadic(-M) + step * j for j in range(n)]


def levy_transfer(cert: ConvergenceCert, M: int, k: int) -> int:
    """A threshold ``eta`` with ``|phi_m(t) - phi(t)| < 3 * 2**-k`` for ``m >= eta``, ``|t| <= M``."""
    if cert.exp_modulus is None:
        raise ValueError("the certificate carries no exp_modulus")
    beta = equicont_modulus(cert, k)
    grid = levy_grid(M, beta)
    return max([cert.start] + [int(cert.exp_modulus(t, beta)) for t in grid])


def sinc_shrinking_cert() -> ConvergenceCert:
    """``phi_m(t) = sinc(t 2**-m)`` converging to 1, rated by ``|sinc(u) - 1| <= u**2/6``."""
    def modulus(M: int, k: int) -> int:
        m = 0
        while Fraction(M, 1 << m) ** 2 / 6 >= Fraction(1, 1 << k):
            m += 1
        return m

    return ConvergenceCert(lambda m: sinc_uniform(Fraction(1, 1 << m)), constant_one(), modulus,
                           label="sinc_shrinking")
