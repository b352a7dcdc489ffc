"""Probability distributions as certified expectation oracles.

A :class:`DistOracle` answers ``mu(f(x) exp(i t x))`` for a piecewise-linear
test function ``f`` to any requested precision.  Everything else (tightness,
characteristic functions, convergence checks) is built on that one call.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import comb
from typing import Dict, Optional, Sequence, Tuple

from . import elementary as el
from .bounds import INV_SQRT_2PI_UP, shifted_moment_upper
from .config import search_cap
from .convergence import ConvergenceCert
from .dyadic import Dyadic, parse_rational
from .errors import BudgetExhausted, InvalidWeights, NotNormalized, SpecError
from .interval import ComplexInterval, Interval, _cmk
from .piecewise import PiecewisePoly, _peval, _pshift
from .quadrature import Integrand, integrate_finite, integrate_nc, integrate_R, mag_bits
from .reals import RealOracle
from .testfunctions import Complement, TestFunction, eval_tf, make_w

__all__ = [
    "DistOracle", "PointMass", "FiniteDiscrete", "PolyDensity", "GaussianDensity",
    "IntegrandDensity", "point_mass", "finite_discrete", "binomial", "density_uniform",
    "density_dist", "gaussian", "tightness", "seq_tightness", "dist_from_spec",
]

_ONE = Dyadic(1)


def _tol(k: int) -> Dyadic:
    return Dyadic(1, -k)


def _as_t(t):
    """Normalize ``t`` to an Interval or a RealOracle."""
    if isinstance(t, (Interval, RealOracle)):
        return t
    if isinstance(t, Dyadic):
        return Interval.point(t)
    if isinstance(t, int):
        return Interval.point(Dyadic(t))
    if isinstance(t, (Fraction, str)):
        r = RealOracle.parse(t)
        if r.exact is not None and r.exact.denominator & (r.exact.denominator - 1) == 0:
            return Interval.point(Dyadic.from_fraction(r.exact))
        return r
    raise TypeError(f"cannot use {t!r} as a frequency")


class DistOracle:
    """Base class.  Subclasses implement :meth:`_eval` for an interval ``t``."""

    kind = "abstract"

    def __init__(self):
        self._tight: Dict[int, int] = {}

    # public contract -------------------------------------------------------

    def windowed_eval(self, f, t, k: int) -> ComplexInterval:
        """Enclosure of ``mu(f(x) exp(i t x))`` of width at most ``2**-k``."""
        if isinstance(f, Complement):
            tt = _as_t(t)
            if not (isinstance(tt, Interval) and tt.is_point() and tt.lo == 0):
                raise ValueError("complements are only evaluated at t = 0")
            inner = self.windowed_eval(f.base, 0, k)
            return _cmk(Interval.point(1) - inner.re, -inner.im)
        if not isinstance(f, TestFunction):
            raise TypeError("windowed_eval needs a TestFunction")
        if f.is_zero():
            return ComplexInterval.point(0)
        tt = _as_t(t)
        if isinstance(tt, RealOracle):
            # d/dt mu(f e^{itx}) is bounded by R_f * M_f
            R = f.support_radius.to_fraction()
            pt = k + 2 + mag_bits(R * f.sup_norm.to_fraction() + 1)
            return self._eval(f, tt.eval(pt), k + 1)
        return self._eval(f, tt, k)

    def _eval(self, f: TestFunction, t: Interval, k: int) -> ComplexInterval:
        raise NotImplementedError

    def support_radius(self) -> Optional[Fraction]:
        """An ``R`` with ``mu([-R, R]) = 1``, when one is known."""
        return None

    def params(self) -> dict:
        return {"kind": self.kind}

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.params()})"


def _tf_value(f: TestFunction, x: Fraction, prec: int) -> Interval:
    v = f.at(x)
    return Interval.from_fraction(v, prec)


class PointMass(DistOracle):
    kind = "point_mass"

    def __init__(self, a: RealOracle):
        super().__init__()
        self.a = RealOracle.parse(a)

    def _eval(self, f, t, k):
        M = f.sup_norm.to_fraction()
        mb = mag_bits(M)
        ex = self.a.exact
        if ex is not None and ex.denominator & (ex.denominator - 1) == 0:
            a = Dyadic.from_fraction(ex)
            fv = _tf_value(f, ex, k + 3)
            if fv.hi.m == 0 and fv.lo.m == 0:
                return ComplexInterval.point(0)
            return (el.cexp_i(t * a, k + 2 + mb) * fv).round(k + 3)
        lip = f.lip.to_fraction()
        p = k + 3 + mag_bits(lip + t.mag().to_fraction() * M + 1)
        for _ in range(8):
            a = self.a.eval(p)
            v = (el.cexp_i(t * a, k + 2 + mb) * eval_tf(f, a, p + 2)).round(k + 3)
            if not t.is_point() or v.width() <= _tol(k):
                return v
            p += 8
        return v

    def support_radius(self):
        return self.a.eval(8).mag().to_fraction()

    def params(self):
        return {"kind": self.kind, "a": self.a.label}


class FiniteDiscrete(DistOracle):
    kind = "finite_discrete"

    def __init__(self, atoms: Sequence[Tuple[RealOracle, RealOracle]], label: str = ""):
        super().__init__()
        if not atoms:
            raise InvalidWeights("no atoms")
        self.atoms = [(RealOracle.parse(p), RealOracle.parse(w)) for p, w in atoms]
        self.points = [PointMass(p) for p, _ in self.atoms]
        self.label = label
        exact = [w.exact for _, w in self.atoms]
        if all(e is not None for e in exact):
            if any(e < 0 for e in exact):
                raise InvalidWeights("negative weight")
            if sum(exact) != 1:
                raise InvalidWeights(f"weights sum to {sum(exact)}, not 1")
        else:
            tot = Interval.point(0)
            prec = 40 + len(self.atoms).bit_length()
            for _, w in self.atoms:
                wi = w.eval(prec)
                if wi.hi.m < 0:
                    raise InvalidWeights("negative weight")
                tot = tot + wi
            if 1 not in tot:
                raise InvalidWeights(f"certified weight sum {tot} excludes 1")

    def _eval(self, f, t, k):
        nb = len(self.atoms).bit_length()
        M = f.sup_norm.to_fraction()
        extra = 0
        for _ in range(6):
            kk = k + 2 + nb + extra
            acc = ComplexInterval.point(0)
            for (pos, w), pm in zip(self.atoms, self.points):
                wv = w.exact
                term = pm._eval(f, t, kk)
                if term.re.is_point() and term.im.is_point() and term.re.lo.m == 0 and term.im.lo.m == 0:
                    continue
                if wv is not None and wv.denominator & (wv.denominator - 1) == 0:
                    acc = acc + term * Dyadic.from_fraction(wv)
                else:
                    wi = w.eval(kk + mag_bits(M) + 1) if wv is None else Interval.from_fraction(wv, kk + mag_bits(M) + 1)
                    acc = acc + term * wi
            acc = acc.round(k + 3)
            if not t.is_point() or acc.width() <= _tol(k):
                return acc
            extra += 8
        return acc

    def support_radius(self):
        return max(p.eval(8).mag().to_fraction() for p, _ in self.atoms)

    def params(self):
        if self.label:
            return json.loads(self.label)
        return {"kind": self.kind, "atoms": [[p.label, w.label] for p, w in self.atoms]}


def _piece_lower(a, b, c) -> Fraction:
    if len(c) <= 2:
        return min(_peval(c, a), _peval(c, b))
    mid, h = (a + b) / 2, (b - a) / 2
    q = _pshift(c, mid)
    return q[0] - sum(abs(v) * h ** j for j, v in enumerate(q) if j)


class PolyDensity(DistOracle):
    """Density given by a piecewise polynomial (evaluated in closed form)."""

    kind = "density"

    def __init__(self, density: PiecewisePoly, label: str = ""):
        super().__init__()
        if density.integral() != 1:
            raise NotNormalized(f"density integrates to {density.integral()}")
        for a, b, c in density.pieces:
            if _piece_lower(a, b, c) < 0:
                raise NotNormalized("cannot certify that the density is nonnegative")
        self.density = density
        self.label = label

    def _eval(self, f, t, k):
        return (f.to_poly() * self.density).fourier(t, k)

    def support_radius(self):
        a, b = self.density.support()
        return max(abs(a), abs(b))

    def params(self):
        if self.label:
            return json.loads(self.label)
        return {"kind": self.kind}


class GaussianDensity(DistOracle):
    """The standard normal distribution."""

    kind = "gaussian"

    def _eval(self, f, t, k):
        pieces = f.to_poly().pieces
        nb = len(pieces).bit_length()
        tm = t.mag().to_fraction()
        kk = k + 1 + nb
        g8 = shifted_moment_upper(tm, 1, 8) * INV_SQRT_2PI_UP
        g7 = shifted_moment_upper(tm, 1, 7) * INV_SQRT_2PI_UP
        isq = Interval.point(1).div(el.sqrt(el.pi_interval(kk + 12).shift(1), kk + 12), kk + 10)
        acc = ComplexInterval.point(0)
        for a, b, c in pieces:
            A = c[0]
            B = c[1] if len(c) > 1 else Fraction(0)
            X = max(abs(a), abs(b))
            d8 = (abs(A) + abs(B) * X) * g8 + 8 * abs(B) * g7
            Ai = Interval.from_fraction(A, kk + 12)
            Bi = Interval.from_fraction(B, kk + 12)

            def fpt(x, ke, Ai=Ai, Bi=Bi):
                lin = Ai + Bi * x
                return el.cexp_i(t * x, ke + 2) * (lin * el.exp_neg_sq_half(x, ke + 2) * isq)

            acc = acc + integrate_nc(fpt, a, b, d8, kk)
        return acc.round(k + 3)


class IntegrandDensity(DistOracle):
    """Density given by a generic :class:`Integrand` (Riemann quadrature)."""

    kind = "density"

    def __init__(self, d: Integrand, check_prec: int = 10):
        super().__init__()
        if d.envelope is None:
            raise NotNormalized("density needs an envelope")
        tot = integrate_R(d, check_prec)
        if 1 not in tot.re:
            raise NotNormalized(f"density integrates to {tot.re}, which excludes 1")
        self.d = d
        env = d.envelope
        self._sup = Fraction(getattr(env, "M", None) or getattr(env, "scale"))

    def _eval(self, f, t, k):
        Md = self._sup
        Mf = f.sup_norm.to_fraction()
        lf = f.lip.to_fraction()
        tm = t.mag().to_fraction()
        d = self.d

        def ev(x, ke):
            return el.cexp_i(t * x, ke + 2) * (d.eval(x, ke + 2) * eval_tf(f, x, ke + 4))

        def lip(a, b):
            return lf * Md + Mf * Fraction(d.lip_on(a, b)) + tm * Mf * Md

        a, b = f.support
        return integrate_finite(Integrand(ev, lip), a, b, k)


# -- constructors -----------------------------------------------------------------

def point_mass(a="0") -> PointMass:
    return PointMass(RealOracle.parse(a))


def finite_discrete(atoms) -> FiniteDiscrete:
    return FiniteDiscrete(atoms)


def binomial(m: int, p) -> FiniteDiscrete:
    """Law of the number of successes in ``m`` trials with success probability ``p``."""
    if m < 0:
        raise ValueError("m must be >= 0")
    p = RealOracle.parse(p)
    label = json.dumps({"kind": "binomial", "m": m, "p": p.label})
    if p.exact is not None:
        pe = p.exact
        if not 0 <= pe <= 1:
            raise InvalidWeights("p must lie in [0, 1]")
        atoms = [(RealOracle.from_fraction(j), RealOracle.from_fraction(comb(m, j) * pe ** j * (1 - pe) ** (m - j)))
                 for j in range(m + 1)]
        return FiniteDiscrete(atoms, label=label)

    def weight(j):
        def fn(k):
            kk = k + 4 + m.bit_length() * 2
            while True:
                pi = p.eval(kk)
                qi = Interval.point(1) - pi
                v = (pi ** j) * (qi ** (m - j)) * comb(m, j)
                v = v.round(k + 1)
                if v.width() <= Dyadic(1, -k):
                    return v
                kk += 16
        return RealOracle(fn, label=f"w{j}")

    atoms = [(RealOracle.from_fraction(j), weight(j)) for j in range(m + 1)]
    return FiniteDiscrete(atoms, label=label)


def density_uniform(a="-1/2", b="1/2") -> PolyDensity:
    """Uniform distribution on ``[a, b]``."""
    a, b = parse_rational(a) if isinstance(a, str) else Fraction(a), parse_rational(b) if isinstance(b, str) else Fraction(b)
    if not a < b:
        raise SpecError("uniform density needs a < b")
    label = json.dumps({"kind": "density_uniform", "a": str(a), "b": str(b)})
    return PolyDensity(PiecewisePoly.constant(a, b, 1 / (b - a)), label=label)


def density_dist(d) -> DistOracle:
    """Distribution with density ``d`` (a PiecewisePoly or an enveloped Integrand)."""
    if isinstance(d, PiecewisePoly):
        return PolyDensity(d)
    return IntegrandDensity(d)


def gaussian() -> GaussianDensity:
    return GaussianDensity()


# -- tightness ------------------------------------------------------------------------

def tightness(mu: DistOracle, k: int) -> int:
    """Smallest ``n`` whose certified ``mu(w_n)`` exceeds ``1 - 2**-k``."""
    cache = getattr(mu, "_tight", None)
    if cache is not None and k in cache:
        return cache[k]
    thr = _ONE - Dyadic(1, -k)
    cap = search_cap()
    for n in range(cap + 1):
        w = make_w(n)
        prec = k + 2
        while prec <= k + 2 + 16:
            v = mu.windowed_eval(w, 0, prec).re
            if v.lo > thr:
                if cache is not None:
                    cache[k] = n
                return n
            if v.hi <= thr:
                break
            prec += 2
    raise BudgetExhausted(f"no window up to w_{cap} certifies mass > 1 - 2^-{k}")


def seq_tightness(cert: ConvergenceCert, k: int) -> int:
    """A window index good for every term of a convergent sequence and its limit."""
    L = tightness(cert.limit, k + 1)
    g = cert.threshold(L, k + 1)
    if g - cert.start > search_cap():
        raise BudgetExhausted(f"modulus threshold {g} exceeds the search cap")
    vals = [L]
    for m in range(cert.start, g):
        vals.append(tightness(cert.term(m), k + 1))
    return max(vals)


# -- JSON specs ---------------------------------------------------------------------------

def dist_from_spec(obj) -> DistOracle:
    """Build a distribution from ``{"kind": ..., params}`` (a dict or JSON text)."""
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise SpecError(f"invalid distribution JSON: {exc}") from None
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SpecError("distribution spec must be an object with a 'kind'")
    kind = obj["kind"]
    try:
        if kind == "point_mass":
            return point_mass(str(obj.get("a", "0")))
        if kind == "finite_discrete":
            atoms = [(RealOracle.parse(str(p)), RealOracle.parse(str(w))) for p, w in obj["atoms"]]
            return FiniteDiscrete(atoms, label=json.dumps(obj))
        if kind == "density_uniform":
            if "m" in obj:
                h = Fraction(1, 1 << int(obj["m"]))
                return density_uniform(-h, h)
            return density_uniform(str(obj.get("a", "-1/2")), str(obj.get("b", "1/2")))
        if kind == "binomial":
            return binomial(int(obj["m"]), str(obj["p"]))
        if kind == "gaussian":
            return gaussian()
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise SpecError(f"invalid {kind} spec: {exc}") from None
    raise SpecError(f"unknown distribution kind {kind!r}")
