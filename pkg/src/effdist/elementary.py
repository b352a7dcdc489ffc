"""Certified elementary functions on dyadic intervals.

The kernels work on fixed-point integer intervals: a pair ``(lo, hi)`` of
ints stands for ``[lo * 2**-w, hi * 2**-w]``.  Every kernel rounds outward,
so the real value always lies inside.  Public functions take an
:class:`Interval` and a target ``k`` and return an enclosure of the exact
image whose extra width (beyond the image itself) is at most ``2**-k``.
"""

from __future__ import annotations

from functools import lru_cache
from math import isqrt

from .config import max_bits
from .dyadic import Dyadic
from .errors import BranchCut, PrecisionOverflow
from .interval import ComplexInterval, Interval, _cmk, _mk

__all__ = [
    "pi_interval", "ln2_interval", "exp", "sin", "cos", "sincos", "cexp_i",
    "exp_neg_sq_half", "sqrt", "log", "atan", "clog", "iv_elem",
]


# -- fixed-point helpers ---------------------------------------------------

def _cshr(x: int, s: int) -> int:
    """Ceiling of ``x / 2**s``."""
    return -((-x) >> s)


def _fx_mul(al, ah, bl, bh, w):
    if al >= 0 and bl >= 0:
        lo, hi = al * bl, ah * bh
    elif ah <= 0 and bh <= 0:
        lo, hi = ah * bh, al * bl
    else:
        p = (al * bl, al * bh, ah * bl, ah * bh)
        lo, hi = min(p), max(p)
    return lo >> w, _cshr(hi, w)


def _fx_sqr(al, ah, w):
    if al >= 0:
        return (al * al) >> w, _cshr(ah * ah, w)
    if ah <= 0:
        return (ah * ah) >> w, _cshr(al * al, w)
    m = max(-al, ah)
    return 0, _cshr(m * m, w)


def _fx_div_int(al, ah, n):
    # n > 0
    return al // n, -((-ah) // n)


def _fx_div(al, ah, bl, bh, w):
    """``[al,ah] / [bl,bh]`` with ``0 < bl``."""
    a, b = al << w, ah << w
    lo = min(a // bl, a // bh, b // bl, b // bh)
    hi = max(-((-a) // bl), -((-a) // bh), -((-b) // bl), -((-b) // bh))
    return lo, hi


def _to_fx(d: Dyadic, w: int, up: bool) -> int:
    s = d.e + w
    if s >= 0:
        return d.m << s
    return _cshr(d.m, -s) if up else d.m >> -s


def _from_fx(x: int, w: int) -> Dyadic:
    return Dyadic(x, -w)


# -- constants ---------------------------------------------------------------

def _atan_inv_scaled(n: int, g: int):
    # atan(1/n) * 2**g; every partial quantity is an exact floor, so the
    # error is below (number of terms + 1).
    nn = n * n
    x = (1 << g) // n
    total = 0
    j = 0
    while x:
        term = x // (2 * j + 1)
        total += -term if j & 1 else term
        x //= nn
        j += 1
    return total, j + 1


@lru_cache(maxsize=64)
def _pi_fx_block(w: int):
    g = w + 16 + w.bit_length()
    a5, e5 = _atan_inv_scaled(5, g)
    a239, e239 = _atan_inv_scaled(239, g)
    v = 16 * a5 - 4 * a239
    err = 16 * e5 + 4 * e239
    return (v - err) >> (g - w), _cshr(v + err, g - w)


def _pi_fx(w: int):
    blk = (w + 63) & ~63
    lo, hi = _pi_fx_block(blk)
    s = blk - w
    return lo >> s, _cshr(hi, s)


@lru_cache(maxsize=64)
def _ln2_fx_block(w: int):
    g = w + 16 + w.bit_length()
    x = (1 << g) // 3
    total = 0
    j = 0
    while x:
        total += x // (2 * j + 1)
        x //= 9
        j += 1
    v, err = 2 * total, 2 * (j + 2)
    return (v - err) >> (g - w), _cshr(v + err, g - w)


def _ln2_fx(w: int):
    blk = (w + 63) & ~63
    lo, hi = _ln2_fx_block(blk)
    s = blk - w
    return lo >> s, _cshr(hi, s)


def pi_interval(k: int) -> Interval:
    """Enclosure of pi of width at most ``2**-k``."""
    lo, hi = _pi_fx(k + 2)
    return _mk(_from_fx(lo, k + 2), _from_fx(hi, k + 2))


def ln2_interval(k: int) -> Interval:
    lo, hi = _ln2_fx(k + 2)
    return _mk(_from_fx(lo, k + 2), _from_fx(hi, k + 2))


# -- kernels -------------------------------------------------------------------

def _exp_kernel(xl: int, xh: int, w: int):
    if xh <= -((w + 1) << w):
        # e^x < e^{-(w+1)} < 2^{-(w+1)}
        return (0, 1),
    mag = max(abs(xl), abs(xh))
    s = max(0, mag.bit_length() - w + 8)
    growth = max(0, xh >> w) * 3 // 2 + 2
    W = w + s + growth + 8 + w.bit_length()
    sh = W - w
    rl, rh = (xl << sh) >> s, _cshr(xh << sh, s)
    ONE = 1 << W
    sl = sh_ = ONE
    tl = th = ONE
    j = 1
    while True:
        tl, th = _fx_mul(tl, th, rl, rh, W)
        tl, th = _fx_div_int(tl, th, j)
        sl += tl
        sh_ += th
        j += 1
        if max(abs(tl), abs(th)) <= 1:
            break
    sl -= 2
    sh_ += 2
    for _ in range(s):
        sl = max(sl, 0)
        sl, sh_ = (sl * sl) >> W, _cshr(sh_ * sh_, W)
    sl = max(sl, 0)
    return (sl >> sh, _cshr(sh_, sh)),


def _sincos_reduced(rl, rh, W):
    """sin and cos of ``r`` with ``|r| < 1``, fixed point at ``W``."""
    r2l, r2h = _fx_sqr(rl, rh, W)
    # sine
    sl, sh = rl, rh
    tl, th = rl, rh
    j = 1
    while True:
        a, b = _fx_mul(tl, th, r2l, r2h, W)
        a, b = _fx_div_int(a, b, (2 * j) * (2 * j + 1))
        tl, th = -b, -a
        sl += tl
        sh += th
        j += 1
        if max(abs(tl), abs(th)) <= 1:
            break
    sl -= 2
    sh += 2
    # cosine
    ONE = 1 << W
    cl = ch = ONE
    tl = th = ONE
    j = 1
    while True:
        a, b = _fx_mul(tl, th, r2l, r2h, W)
        a, b = _fx_div_int(a, b, (2 * j - 1) * (2 * j))
        tl, th = -b, -a
        cl += tl
        ch += th
        j += 1
        if max(abs(tl), abs(th)) <= 1:
            break
    cl -= 2
    ch += 2
    return (sl, sh), (cl, ch)


def _reduce_halfpi(xl, xh, w):
    """Return ``(q, rl, rh, W)`` with ``x - q*pi/2`` in ``[rl, rh] * 2**-W``."""
    mag = max(abs(xl), abs(xh))
    qbits = max(0, mag.bit_length() - w) + 1
    W = w + qbits + 10 + w.bit_length()
    pl, ph = _pi_fx(W - 1)  # pi at W-1 bits == pi/2 at W bits
    sh = W - w
    Xl, Xh = xl << sh, xh << sh
    xm = (Xl + Xh) >> 1
    q = (2 * xm + pl) // (2 * pl)
    if q >= 0:
        return q, Xl - q * ph, Xh - q * pl, W
    return q, Xl - q * pl, Xh - q * ph, W


def _sincos_kernel(xl: int, xh: int, w: int):
    q, rl, rh, W = _reduce_halfpi(xl, xh, w)
    (sl, sh), (cl, ch) = _sincos_reduced(rl, rh, W)
    quad = q & 3
    if quad == 0:
        s, c = (sl, sh), (cl, ch)
    elif quad == 1:
        s, c = (cl, ch), (-sh, -sl)
    elif quad == 2:
        s, c = (-sh, -sl), (-ch, -cl)
    else:
        s, c = (-ch, -cl), (sl, sh)
    d = W - w
    one = 1 << w
    out = []
    for a, b in (s, c):
        a, b = a >> d, _cshr(b, d)
        out.append((max(a, -one), min(b, one)))
    return tuple(out)


def _log_kernel_point(X: int, w: int, up: bool):
    # log(X * 2**-w), X > 0; returns one bound at scale w
    e = X.bit_length() - 1 - w  # X*2^-w = y * 2^e with y in [1,2)
    W = w + 12 + w.bit_length() + abs(e).bit_length()
    s = W - w - e
    if s >= 0:
        Yl = Yh = X << s
    else:
        Yl, Yh = X >> -s, _cshr(X, -s)
    ONE = 1 << W
    # u = (y-1)/(y+1) in [0, 1/3)
    ul, uh = _fx_div(Yl - ONE, Yh - ONE, Yl + ONE, Yh + ONE, W)
    ul = max(ul, 0)
    u2l, u2h = _fx_sqr(ul, uh, W)
    sl, sh = ul, uh
    pl, ph = ul, uh
    j = 1
    while True:
        pl, ph = _fx_mul(pl, ph, u2l, u2h, W)
        tl, th = _fx_div_int(pl, ph, 2 * j + 1)
        sl += tl
        sh += th
        j += 1
        if th <= 1:
            break
    sl, sh = 2 * sl - 2, 2 * sh + 4
    ll, lh = _ln2_fx(W)
    if e >= 0:
        sl, sh = sl + e * ll, sh + e * lh
    else:
        sl, sh = sl + e * lh, sh + e * ll
    d = W - w
    return _cshr(sh, d) if up else sl >> d


def _sqrt_bounds(Xl: int, Xh: int, w: int):
    lo = isqrt(max(Xl, 0) << w)
    hi = isqrt(Xh << w)
    if hi * hi < (Xh << w):
        hi += 1
    return lo, hi


def _atan_kernel(xl: int, xh: int, w: int):
    W = w + 14 + w.bit_length()
    sh = W - w
    al, ah = xl << sh, xh << sh
    ONE = 1 << W
    # atan x = 2 atan(x / (1 + sqrt(1 + x^2))); four halvings give |x| < tan(pi/32)
    halvings = 4
    for _ in range(halvings):
        ql, qh = _fx_sqr(al, ah, W)
        dl = ONE + _sqrt_bounds(ONE + ql, ONE + ql, W)[0]
        dh = ONE + _sqrt_bounds(ONE + qh, ONE + qh, W)[1]
        al, ah = _fx_div(al, ah, dl, dh, W)
    x2l, x2h = _fx_sqr(al, ah, W)
    sl, sh2 = al, ah
    pl, ph = al, ah
    j = 1
    while True:
        pl, ph = _fx_mul(pl, ph, x2l, x2h, W)
        tl, th = _fx_div_int(pl, ph, 2 * j + 1)
        if j & 1:
            sl, sh2 = sl - th, sh2 - tl
        else:
            sl, sh2 = sl + tl, sh2 + th
        j += 1
        if max(abs(tl), abs(th)) <= 1:
            break
    sl, sh2 = (sl - 2) << halvings, (sh2 + 2) << halvings
    return (sl >> sh, _cshr(sh2, sh)),


# -- driver --------------------------------------------------------------------

def _point(kernel, x: Dyadic, k: int):
    """Evaluate ``kernel`` at the dyadic point ``x``; each output has width <= 2**-(k+1)."""
    w = k + 6
    limit = max_bits()
    while True:
        if w > limit:
            raise PrecisionOverflow(f"working precision {w} exceeds {limit} bits")
        xl, xh = _to_fx(x, w, False), _to_fx(x, w, True)
        outs = kernel(xl, xh, w)
        if all(b - a <= 16 for a, b in outs):
            # 16 ulps at w >= k+6 is <= 2**-(k+2); rounding to k+3 bits adds 2**-(k+2)
            res = []
            d = w - (k + 3)
            for a, b in outs:
                res.append((Dyadic(a >> d, -(k + 3)), Dyadic(_cshr(b, d), -(k + 3))))
            return res
        w += 16 + w // 2


def _check(a):
    if not isinstance(a, Interval):
        a = Interval.point(a)
    return a


def exp(a, k: int) -> Interval:
    a = _check(a)
    lo, hi = _point(_exp_kernel, a.lo, k)[0]
    if not a.is_point():
        hi = _point(_exp_kernel, a.hi, k)[0][1]
    return _mk(lo, hi)


def exp_neg_sq_half(a, k: int) -> Interval:
    """Enclosure of ``exp(-x**2/2)`` over ``a``."""
    a = _check(a)
    return exp(-(a.sqr().shift(-1)), k)


def _crit_hits(a: Interval, k: int):
    """Multiples ``m`` of pi/2 that may lie in ``a``."""
    mag = max(abs(a.lo), abs(a.hi))
    w = k + 12 + max(0, mag.bit_size())
    Xl, Xh = _to_fx(a.lo, w, False), _to_fx(a.hi, w, True)
    pl, ph = _pi_fx(w - 1)
    hits = []
    for m in range(Xl // ph - 1, Xh // pl + 2):
        cl, ch = (m * pl, m * ph) if m >= 0 else (m * ph, m * pl)
        if ch >= Xl and cl <= Xh:
            hits.append(m)
    return hits


def sincos(a, k: int):
    """Enclosures ``(sin a, cos a)``."""
    a = _check(a)
    if a.is_point():
        (sl, sh), (cl, ch) = _point(_sincos_kernel, a.lo, k)
        return _mk(sl, sh), _mk(cl, ch)
    one = Dyadic(1)
    if a.width() >= 7:
        full = _mk(-one, one)
        return full, full
    (s1l, s1h), (c1l, c1h) = _point(_sincos_kernel, a.lo, k)
    (s2l, s2h), (c2l, c2h) = _point(_sincos_kernel, a.hi, k)
    sl, sh = min(s1l, s2l), max(s1h, s2h)
    cl, ch = min(c1l, c2l), max(c1h, c2h)
    for m in _crit_hits(a, k):
        sgn = -1 if (m // 2) & 1 else 1
        if m & 1:
            if sgn > 0:
                sh = one
            else:
                sl = -one
        else:
            if sgn > 0:
                ch = one
            else:
                cl = -one
    return _mk(sl, sh), _mk(cl, ch)


def sin(a, k: int) -> Interval:
    return sincos(a, k)[0]


def cos(a, k: int) -> Interval:
    return sincos(a, k)[1]


def cexp_i(a, k: int) -> ComplexInterval:
    """Enclosure of ``exp(i*x)`` over real ``x`` in ``a``."""
    s, c = sincos(a, k)
    return _cmk(c, s)


def sqrt(a, k: int) -> Interval:
    a = _check(a)
    if a.hi.m < 0:
        raise ValueError("square root of a negative interval")
    w = k + 4
    lo = isqrt(_to_fx(a.lo, 2 * w, False)) if a.lo.m > 0 else 0
    Xh = _to_fx(a.hi, 2 * w, True)
    hi = isqrt(Xh)
    if hi * hi < Xh:
        hi += 1
    return _mk(Dyadic(lo, -w), Dyadic(hi, -w))


def _log_point(x: Dyadic, k: int, up: bool) -> Dyadic:
    w = k + 4
    X = _to_fx(x, w + 8, up)
    while X <= 0 or X.bit_length() < 24:
        w += 16
        X = _to_fx(x, w + 8, up)
        if w > max_bits():
            raise PrecisionOverflow("log argument too close to zero")
    v = _log_kernel_point(X, w + 8, up)
    d = w + 8 - (k + 2)
    return Dyadic(_cshr(v, d) if up else v >> d, -(k + 2))


def log(a, k: int) -> Interval:
    """Natural logarithm, ``a`` must be strictly positive."""
    a = _check(a)
    if a.lo.m <= 0:
        raise ValueError("log of a non-positive interval")
    return _mk(_log_point(a.lo, k, False), _log_point(a.hi, k, True))


def atan(a, k: int) -> Interval:
    a = _check(a)
    lo = _point(_atan_kernel, a.lo, k)[0][0]
    hi = _point(_atan_kernel, a.hi, k)[0][1]
    return _mk(lo, hi)


def clog(z: ComplexInterval, k: int) -> ComplexInterval:
    """Principal logarithm on the half plane ``Re z > 0``."""
    if z.re.lo.m <= 0:
        raise BranchCut("enclosure reaches the closed left half plane")
    re = log(z.abs_sq(), k + 1).shift(-1)
    ratio = z.im.div(z.re, k + 4)
    im = atan(ratio, k + 1)
    return _cmk(re, im)


_ELEM = {
    "exp": exp,
    "sin": sin,
    "cos": cos,
    "exp_neg_sq_half": exp_neg_sq_half,
    "sqrt": sqrt,
    "log": log,
    "atan": atan,
}


def iv_elem(fn: str, a: Interval, k: int) -> Interval:
    """Dispatch an elementary function by name."""
    try:
        f = _ELEM[fn]
    except KeyError:
        raise ValueError(f"unknown elementary function {fn!r}") from None
    return f(a, k)
