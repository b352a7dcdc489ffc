"""Gaussian smoothing transfers between characteristic functions and distributions.

For a test function ``f`` put

    g_n(z) = (1/2pi) exp(-z^2/2n) int f(y) exp(-i z y) dy,
    h_n(x) = int exp(i z x) g_n(z) dz = E f(x + Z/sqrt(n)).

Fubini gives ``mu(h_n) = int phi(z) g_n(z) dz``, and ``h_n -> f`` uniformly
at an explicit rate.  That identity recovers ``mu(f)`` from ``phi``
(``glivenko_eval``), converts convergence of characteristic functions into
convergence of distributions (``glivenko_modulus``), and, with the damped
inversion ``f_n(x) = (1/2pi) int phi(t) exp(-t^2/n) exp(-ixt) dt``,
constructs the distribution of a characteristic function (``bochner_dist``).

All integrals over the frequency line use the 7-point Newton-Cotes rule with
an eighth-derivative bound from Leibniz' rule; the tails are cut where
either the Gaussian factor or the ``1/z^2`` decay of the Fourier transform
of a piecewise-linear ``f`` makes them negligible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Tuple

from . import elementary as el
from .bounds import abs_normal_moment_upper, shifted_moment_upper, sqrt_upper
from .charfun import CharOracle, lip_modulus
from .convergence import ConvergenceCert
from .distributions import DistOracle
from .dyadic import Dyadic
from .errors import ImaginaryResidual, NegativityViolation
from .interval import ComplexInterval, Interval, _mk
from .piecewise import PiecewisePoly
from .quadrature import GaussianEnvelope, Integrand, ceil_log2, integrate_nc, tail_cutoff
from .testfunctions import TestFunction, modulus_tf

__all__ = [
    "SmoothingPlan", "smoothing_params", "fourier_weight", "fourier_weight_integrand",
    "weight_l1_bound", "smoothed_expectation", "glivenko_eval", "glivenko_modulus",
    "glivenko_certificate", "bochner_density", "bochner_mass", "psi_cert", "bochner_dist",
    "BochnerDist",
]

# 1/(2 pi) = 0.15915..., 1/pi = 0.31830..., 1/(2 sqrt(pi)) = 0.28209...
INV_2PI_UP = Fraction(16, 100)
INV_PI_UP = Fraction(32, 100)
INV_2SQRTPI_UP = Fraction(283, 1000)


def _pow2(j: int) -> Fraction:
    return Fraction(1 << j) if j >= 0 else Fraction(1, 1 << -j)


def _inv_2pi(prec: int) -> Interval:
    return Interval.point(1).div(el.pi_interval(prec + 4).shift(1), prec)


# -- smoothing plan ------------------------------------------------------------

@dataclass(frozen=True)
class SmoothingPlan:
    """Truncation radius ``L`` and smoothing parameter ``n`` for ``sup |h_n - f| < 2**-k``."""

    L: int
    n: int
    k_target: int

    def to_json(self) -> dict:
        return {"L": self.L, "n": self.n, "k": self.k_target}


def _gauss_radius(M: Fraction, k: int) -> int:
    """Minimal integer ``L`` with certified ``2 M exp(-L^2/2) < 2**-(k+1)``."""
    if M <= 0:
        return 0
    thr = _pow2(-(k + 1))
    L = 0
    while True:
        prec = k + 8 + max(0, ceil_log2(M))
        e = el.exp(Interval.point(Dyadic(-L * L, -1)), prec)
        if 2 * M * e.hi.to_fraction() < thr:
            return L
        L += 1


def _plan(M: Fraction, alpha: int, k: int) -> SmoothingPlan:
    if M <= 0:
        return SmoothingPlan(0, 1, k)
    L = _gauss_radius(M, k)
    return SmoothingPlan(L, L * L * (1 << (2 * alpha)) + 1, k)


def smoothing_params(f: TestFunction, k: int) -> SmoothingPlan:
    """The plan ``(L, n)`` with ``n = L^2 4^alpha(k+1) + 1`` for the modulus ``alpha`` of ``f``."""
    if f.is_zero():
        return SmoothingPlan(0, 1, k)
    return _plan(f.sup_norm.to_fraction(), modulus_tf(f, k + 1), k)


def _plan_modulated(f: TestFunction, tmag: Fraction, k: int) -> SmoothingPlan:
    """Plan for ``f(x) exp(i t x)`` with ``|t| <= tmag``."""
    if f.is_zero():
        return SmoothingPlan(0, 1, k)
    M = f.sup_norm.to_fraction()
    if tmag == 0:
        return _plan(M, modulus_tf(f, k + 1), k)
    lip = f.lip.to_fraction() + tmag * M
    return _plan(M, lip_modulus(lip, k + 1), k)


# -- the weight g_n -------------------------------------------------------------

def fourier_weight(f: TestFunction, n: int, z, k: int) -> ComplexInterval:
    """Enclosure of ``g_n(z) = (1/2pi) exp(-z^2/2n) int f(y) exp(-izy) dy``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not isinstance(z, Interval):
        z = Interval.point(z)
    if f.is_zero():
        return ComplexInterval.point(0)
    P = f.to_poly()
    return _weight(P, Fraction(n), Interval.point(0), z, k)


def _weight(P: PiecewisePoly, sigma2: Fraction, shift: Interval, z: Interval, k: int) -> ComplexInterval:
    # (1/2pi) exp(-z^2/(2 sigma2)) int P(y) exp(-i (z - shift) y) dy
    fl1 = P.abs_integral_upper()
    mb = max(0, ceil_log2(fl1)) if fl1 > 0 else 0
    kk = k + 4 + mb
    for _ in range(6):
        F = P.fourier(-(z - shift), kk)
        g = el.exp(-(z.sqr().div(Interval.from_fraction(2 * sigma2, kk + 8), kk + 4)), kk)
        v = (F * (g * _inv_2pi(kk + 4))).round(k + 3)
        if not z.is_point() or v.width() <= Dyadic(1, -k):
            return v
        kk += 8 + kk // 4
    return v


def fourier_weight_integrand(f: TestFunction, n: int) -> Integrand:
    """``g_n`` as an :class:`Integrand` with its Gaussian envelope."""
    P = f.to_poly()
    fl1 = f.l1_norm()
    R = f.support_radius.to_fraction()
    env = GaussianEnvelope(Fraction(n), fl1 * INV_2PI_UP)

    def lip(a, b):
        # |g'| <= (1/2pi) |f|_1 E(R + |S|), S ~ N(0, 1/n)
        return INV_2PI_UP * fl1 * shifted_moment_upper(R, Fraction(1, n), 1)

    return Integrand(lambda z, k: _weight(P, Fraction(n), Interval.point(0), z, k), lip, env, label=f"g_{n}")


def weight_l1_bound(f: TestFunction, n: int) -> Fraction:
    """Upper bound on ``int |g_n|``.

    Uses ``|F(z)| <= min(|f|_1, J/z^2)`` where ``J`` is the total jump of ``f'``,
    and the Gaussian bound ``(|f|_1/2pi) sqrt(2 pi n)``.
    """
    fl1 = f.l1_norm()
    J = f.slope_jump_total()
    gauss = INV_2PI_UP * fl1 * sqrt_upper(Fraction(2 * n) * Fraction(315, 100))
    jump = Fraction(2, 3) * sqrt_upper(fl1 * J) if J > 0 else gauss  # 2/pi < 2/3
    return min(gauss, jump)


# -- characteristic-function inputs ----------------------------------------------

def _phi_parts(phi: CharOracle, j: int) -> Tuple[Callable, Callable[[int], Fraction], Fraction]:
    """``(fn, deriv_bound, err)`` with ``|phi - fn| <= err`` and derivative bounds for ``fn``."""
    if phi.deriv_bound is not None:
        return phi.fn, phi.deriv_bound, Fraction(0)
    if phi.band is None:
        raise ValueError(f"{phi!r} has neither derivative bounds nor a band approximation")
    a, fa = phi.band(j)
    a = Fraction(a)
    return fa, (lambda r: a ** r), _pow2(-j)


def _leibniz8(db: Callable[[int], Fraction], c: Fraction, var: Fraction) -> Fraction:
    """``sum_r C(8,r) db(r) E(c + |S|)^(8-r)`` for ``S ~ N(0, var)``."""
    return sum((comb(8, r) * Fraction(db(r)) * shifted_moment_upper(c, var, 8 - r) for r in range(9)), Fraction(0))


def _round3(T: int) -> int:
    """Round up to a multiple of 3 so that Newton-Cotes nodes are dyadic."""
    T = max(T, 1)
    return T + (-T) % 3


def _cutoff(env: GaussianEnvelope, J: Fraction, shift: Fraction, j: int) -> int:
    """``T`` with tail ``< 2**-j``: the minimum of the Gaussian and ``J/(pi (T-|shift|))`` cuts."""
    tg = tail_cutoff(env, j)
    if J > 0:
        tj = int(shift) + 1 + int(J * INV_PI_UP * _pow2(j)) + 1
        return _round3(min(tg, tj))
    return _round3(tg)


def _fubini(phi: CharOracle, P: PiecewisePoly, sigma2: Fraction, shift: Interval, k: int) -> ComplexInterval:
    """``(1/2pi) int phi(z) exp(-z^2/(2 sigma2)) F(z - shift) dz`` with ``F(u) = int P(y) e^{-iuy} dy``."""
    fl1 = P.abs_integral_upper()
    if fl1 == 0:
        return ComplexInterval.point(0)
    a, b = P.support()
    R = max(abs(a), abs(b))
    jumps = _jump_total(P)
    smag = shift.mag().to_fraction()
    # |F(z - shift)| <= min(|f|_1, J/(z - shift)^2): l1 bound independent of the shift
    gl1 = INV_2PI_UP * fl1 * sqrt_upper(2 * sigma2 * Fraction(315, 100))
    if jumps > 0:
        gl1 = min(gl1, Fraction(2, 3) * sqrt_upper(fl1 * jumps))
    env = GaussianEnvelope(sigma2, fl1 * INV_2PI_UP)
    T = _cutoff(env, jumps, smag, k + 3)
    j = k + 3 + max(0, ceil_log2(gl1))
    fn, db, err = _phi_parts(phi, j)
    d8 = INV_2PI_UP * fl1 * _leibniz8(db, R, 1 / sigma2)

    def fpt(z: Interval, ke: int) -> ComplexInterval:
        return fn(z, ke + 2) * _weight(P, sigma2, shift, z, ke + 2)

    core = integrate_nc(fpt, -T, T, d8, k + 1)
    rad = Dyadic(1, -(k + 3))
    if err:
        rad = rad + Dyadic.ceil_of(err * gl1, k + 8)
    return core.widen(rad)


def _jump_total(P: PiecewisePoly) -> Fraction:
    """Total variation of the derivative of a continuous piecewise-linear ``P``."""
    slopes = [Fraction(0)]
    prev_b = None
    for a, b, c in P.pieces:
        if prev_b is not None and a != prev_b:
            slopes.append(Fraction(0))
        if len(c) > 2:
            raise ValueError("jump total is defined for piecewise-linear functions")
        slopes.append(c[1] if len(c) > 1 else Fraction(0))
        prev_b = b
    slopes.append(Fraction(0))
    return sum((abs(y - x) for x, y in zip(slopes, slopes[1:])), Fraction(0))


def smoothed_expectation(phi: CharOracle, f: TestFunction, n: int, k: int) -> ComplexInterval:
    """Enclosure of ``mu(h_n) = int phi(z) g_n(z) dz`` of width at most ``2**-k``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if f.is_zero():
        return ComplexInterval.point(0)
    return _fubini(phi, f.to_poly(), Fraction(n), Interval.point(0), k)


# -- Glivenko ---------------------------------------------------------------------

def _real_part(v: ComplexInterval, what: str) -> Interval:
    if not v.im.contains_zero():
        raise ImaginaryResidual(f"{what}: imaginary part {v.im} excludes 0")
    return v.re


def glivenko_eval(phi: CharOracle, f: TestFunction, k: int) -> Interval:
    """Enclosure of ``mu(f)`` computed from the characteristic function of ``mu`` alone."""
    if f.is_zero():
        return Interval.point(0)
    plan = smoothing_params(f, k + 1)
    v = smoothed_expectation(phi, f, plan.n, k + 1)
    return _real_part(v, "glivenko_eval").widen(Dyadic(1, -(k + 1)))


def _glivenko_parts(f: TestFunction, tmag: Fraction, k: int):
    """Plan, frequency cutoff and inner precision for a threshold at precision ``k``."""
    plan = _plan_modulated(f, tmag, k + 2)
    fl1 = f.l1_norm()
    J = f.slope_jump_total()
    sigma2 = Fraction(plan.n)
    env = GaussianEnvelope(sigma2, fl1 * INV_2PI_UP)
    T = _cutoff(env, J, tmag, k + 3)
    gl1 = INV_2PI_UP * fl1 * sqrt_upper(2 * sigma2 * Fraction(315, 100))
    if J > 0:
        gl1 = min(gl1, Fraction(2, 3) * sqrt_upper(fl1 * J))
    kin = k + 3 + (max(0, ceil_log2(gl1)) if gl1 > 0 else 0)
    return plan, T, gl1, kin


def glivenko_certificate(cert: ConvergenceCert, f: TestFunction, k: int, tmag=0) -> dict:
    """Threshold and its ingredients for ``|mu_m(f e^{itx}) - mu(f e^{itx})| < 2**-k``, ``|t| <= tmag``."""
    if f.is_zero():
        return {"threshold": cert.start, "plan": {"L": 0, "n": 1}, "T": 0, "inner_k": k, "g_l1": "0"}
    plan, T, gl1, kin = _glivenko_parts(f, Fraction(tmag), k)
    thr = cert.threshold(T, kin)
    return {"threshold": thr, "plan": {"L": plan.L, "n": plan.n}, "T": T, "inner_k": kin, "g_l1": str(gl1)}


def glivenko_modulus(cert: ConvergenceCert, f: TestFunction, k: int) -> int:
    """An ``m`` threshold beyond which ``|mu_m(f) - mu(f)| < 2**-k``.

    ``cert.modulus(M, k)`` must make ``|phi_m - phi| < 2**-k`` on ``|t| <= M``.
    """
    return glivenko_certificate(cert, f, k)["threshold"]


# -- Bochner -------------------------------------------------------------------------

def bochner_density(phi: CharOracle, n: int, x, k: int) -> Interval:
    """Enclosure of ``f_n(x) = (1/2pi) int phi(t) exp(-t^2/n) exp(-ixt) dt``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not isinstance(x, Interval):
        x = Interval.point(x)
    sigma2 = Fraction(n, 2)
    env = GaussianEnvelope(sigma2, INV_2PI_UP)
    T = _round3(tail_cutoff(env, k + 3))
    gl1 = INV_2SQRTPI_UP * sqrt_upper(n)
    j = k + 3 + max(0, ceil_log2(gl1))
    fn, db, err = _phi_parts(phi, j)
    xm = x.mag().to_fraction()
    d8 = INV_2PI_UP * _leibniz8(db, xm, Fraction(2, n))
    twon = Interval.point(n)

    def fpt(t: Interval, ke: int) -> ComplexInterval:
        damp = el.exp(-(t.sqr().div(twon, ke + 6)), ke + 4)
        w = el.cexp_i(-(t * x), ke + 4) * (damp * _inv_2pi(ke + 6))
        return fn(t, ke + 2) * w

    core = integrate_nc(fpt, -T, T, d8, k + 1)
    rad = Dyadic(1, -(k + 3))
    if err:
        rad = rad + Dyadic.ceil_of(err * gl1, k + 8)
    v = core.widen(rad)
    re = _real_part(v, "bochner_density")
    if re.hi < 0:
        raise NegativityViolation(f"f_{n}({x}) has enclosure {re} below 0")
    return re


def _mu_tail(phi: CharOracle, X: Fraction, k: int, cells: int = 64) -> Fraction:
    """Upper bound on ``mu(|x| > X)`` from ``(1/d) int_{-d}^{d} (1 - Re phi)`` with ``d = 2/X``."""
    d = Fraction(2) / X
    h = 2 * d / cells
    tot = Fraction(0)
    prec = k + 8
    for i in range(cells):
        a = -d + i * h
        cell = Interval.from_fractions(a, a + h, prec + 8)
        v = phi.fn(cell, prec).re
        tot += h * (1 - v.lo.to_fraction())
    return max(Fraction(0), tot / d)


def bochner_mass(phi: CharOracle, n: int, k: int) -> dict:
    """Certified ``int f_n`` over ``[-X, X]`` plus a tail bound; the total should enclose 1."""
    # tail: mu(|x| > X1) + P(|S| > c) with S ~ N(0, 2/n)
    tol = _pow2(-(k + 3))
    X1 = Fraction(1)
    while _mu_tail(phi, X1, k) >= tol:
        X1 *= 2
    def gauss_tail(c: int) -> Fraction:
        return el.exp(Interval.point(Dyadic(-c * c * n, -2)), k + 8).hi.to_fraction()

    c = 1
    while gauss_tail(c) >= tol:
        c += 1
    X = X1 + c
    mu_tail = _mu_tail(phi, X1, k)
    g_tail = gauss_tail(c)
    # |f_n^(8)| <= (1/2pi) int t^8 exp(-t^2/n) dt = (1/(2 sqrt(pi))) sqrt(n) E|S'|^8, S' ~ N(0, n/2)
    d8 = INV_2SQRTPI_UP * sqrt_upper(n) * abs_normal_moment_upper(8) * Fraction(n, 2) ** 4
    core = integrate_nc(lambda x, ke: ComplexInterval(bochner_density(phi, n, x, ke)), -X, X, d8, k + 1).re
    tail = mu_tail + g_tail
    total = _mk(core.lo, core.hi + Dyadic.ceil_of(tail, k + 8))
    return {"X": X, "core": core, "tail": tail, "total": total}


def psi_cert(phi: CharOracle) -> ConvergenceCert:
    """``psi_n(z) = phi(z) exp(-z^2/n) -> phi`` with ``|psi_n - phi| <= z^2/n``."""

    def seq(n: int) -> CharOracle:
        def fn(t, k):
            damp = el.exp(-(t.sqr().div(Interval.point(n), k + 6)), k + 3)
            return (phi.fn(t, k + 2) * damp).round(k + 3)
        return CharOracle(fn, lambda k: phi.modulus(k + 1) + 1, label=f"psi_{n}")

    def modulus(M: int, k: int) -> int:
        # M^2 / n < 2^-k
        return M * M * (1 << k) + 1

    return ConvergenceCert(seq, phi, modulus, start=1, label="psi_n -> phi")


class BochnerDist(DistOracle):
    """The distribution of a characteristic function, through damped inversion."""

    kind = "bochner"

    def __init__(self, phi: CharOracle):
        super().__init__()
        self.phi = phi
        self.cert = psi_cert(phi)

    def smoothing_index(self, f: TestFunction, tmag: Fraction, k: int) -> int:
        """``n`` with ``|nu_n(f e^{itx}) - mu(f e^{itx})| < 2**-k`` for ``|t| <= tmag``."""
        return glivenko_certificate(self.cert, f, k, tmag)["threshold"]

    def _eval(self, f, t, k):
        n = self.smoothing_index(f, t.mag().to_fraction(), k + 2)
        # nu_n has characteristic function phi(z) exp(-z^2/n); by Fubini
        # nu_n(f e^{itx}) = (1/2pi) int phi(z) exp(-z^2/n) F(z - t) dz
        v = _fubini(self.phi, f.to_poly(), Fraction(n, 2), t, k + 1)
        return v.widen(Dyadic(1, -(k + 2)))

    def params(self):
        return {"kind": self.kind, "phi": self.phi.params}


def bochner_dist(phi: CharOracle) -> BochnerDist:
    return BochnerDist(phi)
