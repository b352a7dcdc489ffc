"""End-to-end acceptance checks, one test per criterion.

Each test records a ``criterion N: PASS|FAIL ...`` line that is printed in
the terminal summary (see ``conftest.py``).  Run on its own with

    pytest tests/test_acceptance.py -v
"""

import random
import time
from fractions import Fraction

import mpmath
import pytest

from conftest import ACCEPTANCE_LINES, holds, holds_c, mpf
from effdist import elementary as el
from effdist.charfun import char_from_dist, constant_one, sinc_shrinking_cert, sinc_uniform
from effdist.distributions import binomial, density_uniform, point_mass, tightness
from effdist.dml import (BernoulliParams, clt_gap_rows, dml_error_bound, dml_modulus,
                         log_deviation)
from effdist.dyadic import Dyadic
from effdist.interval import Interval
from effdist.testfunctions import eval_tf, make_w, make_w_complement, modulus_tf
from effdist.transfer import (bochner_density, bochner_mass, glivenko_certificate, glivenko_eval,
                              glivenko_modulus, smoothing_params)


def record(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[n] = line
    print(line)
    assert ok, line


def dy(x):
    return Dyadic.from_fraction(Fraction(x))


# 1 ----------------------------------------------------------------------------------

def test_criterion_1_closed_forms():
    k = 10
    tol = Dyadic(1, -k)
    grid = [Fraction(j - 50, 8) for j in range(100)]
    m_unif = 3
    h = Fraction(1, 1 << m_unif)
    p, m_bin = Fraction(1, 3), 5
    cases = [
        ("delta_0", char_from_dist(point_mass()), lambda t: mpmath.mpc(1)),
        (f"uniform[-2^-{m_unif}, 2^-{m_unif}]", char_from_dist(density_uniform(-h, h)),
         lambda t: mpmath.mpc(mpmath.sinc(t * mpf(h)))),
        (f"binomial({m_bin}, 1/3)", char_from_dist(binomial(m_bin, "1/3")),
         lambda t: (mpf(p) * mpmath.expj(t) + mpf(1 - p)) ** m_bin),
    ]
    start = time.perf_counter()
    bad = []
    for name, phi, exact in cases:
        for t in grid:
            v = phi.eval(dy(t), k)
            ok = holds_c(v, exact(mpf(t))) and v.re.width() <= tol and v.im.width() <= tol
            if not ok:
                bad.append((name, t))
    elapsed = time.perf_counter() - start
    record(1, not bad and elapsed < 60,
           f"3 x 100 grid points at k={k}, {len(bad)} misses, {elapsed:.1f}s (< 60s)")


def trapezoid(n):
    return lambda x: mpmath.mpf(1) if abs(x) <= n else max(mpmath.mpf(0), n + 1 - abs(x))


# 2 ----------------------------------------------------------------------------------

def test_criterion_2_tightness():
    mu = density_uniform("-1/2", "1/2")
    L = tightness(mu, 3)
    # independent re-check: quadrature of the density against the trapezoid
    mass = mpmath.quad(trapezoid(1), [-0.5, 0.5])
    w0_mass = mpmath.quad(trapezoid(0), [-0.5, 0, 0.5])
    delta_ok = all(tightness(point_mass(), k) == 0 for k in range(21))
    ok = L == 1 and mass > 1 - mpmath.mpf(1) / 8 and w0_mass <= 1 - mpmath.mpf(1) / 8 and delta_ok
    record(2, ok, f"L(uniform, 3) = {L}, mu(w_1) = {mpmath.nstr(mass, 8)} > 7/8, "
                  f"mu(w_0) = {mpmath.nstr(w0_mass, 8)}, L(delta_0, k<=20) all 0: {delta_ok}")


# 3 ----------------------------------------------------------------------------------

@pytest.mark.parametrize("dist", ["delta_0", "uniform"])
@pytest.mark.parametrize("n", [0, 1])
def test_criterion_3_glivenko_round_trip(dist, n):
    k = 5
    mu = point_mass() if dist == "delta_0" else density_uniform("-1/2", "1/2")
    f = make_w(n)
    start = time.perf_counter()
    g = glivenko_eval(char_from_dist(mu), f, k)
    elapsed = time.perf_counter() - start
    d = mu.windowed_eval(f, 0, k).re
    gap = abs(g.mid().to_fraction() - d.mid().to_fraction())
    plan = smoothing_params(f, k + 1)
    ok = g.intersects(d) and gap <= Fraction(1, 16) and elapsed < 600
    key = 3 + {("delta_0", 0): 0.0, ("delta_0", 1): 0.1, ("uniform", 0): 0.2, ("uniform", 1): 0.3}[dist, n]
    record(key, ok, f"{dist}, w_{n}: glivenko {g} vs direct {d}, midpoint gap {float(gap):.2e}, "
                    f"plan L={plan.L} n={plan.n}, {elapsed:.1f}s")


# 4 ----------------------------------------------------------------------------------

def test_criterion_4_convergence_example():
    k = 4
    cert = sinc_shrinking_cert()
    f = make_w(1)
    info = glivenko_certificate(cert, f, k)
    thr = glivenko_modulus(cert, f, k)
    # the rate fed to the certificate really holds on |t| <= T at the threshold
    T, kin = info["T"], info["inner_k"]
    u = mpf(Fraction(T, 1 << thr))
    rate_ok = (1 - mpmath.sinc(u)) < mpmath.mpf(2) ** -kin
    # and the distributions are certified within 2^-4 of delta_0 from there on
    limit = point_mass().windowed_eval(f, 0, k + 4).re
    worst = Fraction(0)
    for m in range(thr, thr + 4):
        h = Fraction(1, 1 << m)
        v = density_uniform(-h, h).windowed_eval(f, 0, k + 4).re
        worst = max(worst, (v - limit).mag().to_fraction())
    ok = rate_ok and worst < Fraction(1, 16) and thr == cert.threshold(T, kin)
    record(4, ok, f"threshold {thr} (T={T}, inner precision {kin}), "
                  f"max certified |mu_m(w_1) - delta_0(w_1)| = {float(worst):.2e} < 2^-4")


# 5 ----------------------------------------------------------------------------------

@pytest.mark.parametrize("which", ["one", "sinc"])
def test_criterion_5_bochner(which):
    k = 4
    phi = constant_one() if which == "one" else sinc_uniform("1/2")
    xs = [Fraction(j - 16, 4) for j in range(33)]
    neg, masses = 0, []
    for n in (4, 16):
        for x in xs:
            if bochner_density(phi, n, dy(x), k + 4).hi < 0:
                neg += 1
        tot = bochner_mass(phi, n, k)["total"]
        masses.append((n, tot))
    near = all(tot.lo >= 1 - Fraction(1, 16) and tot.hi <= 1 + Fraction(1, 16) and 1 in tot
               for _, tot in masses)
    record(5 + (0.0 if which == "one" else 0.1), neg == 0 and near,
           f"phi={which}: {neg} negative upper bounds on 2 x 33 points; mass "
           + ", ".join(f"n={n}: {t}" for n, t in masses))


# 6 ----------------------------------------------------------------------------------

def test_criterion_6_de_moivre_laplace():
    k = 4
    bp = BernoulliParams("1/2")
    m = dml_modulus(bp, 1, k)
    ts = [Fraction(j, 8) for j in range(17)]
    rows = clt_gap_rows(bp, m, ts, k, 30)
    gaps_ok = all(r.ok for r in rows)
    sound = True
    for t in ts:
        dev = log_deviation(bp, m, dy(t), 30)
        bound = dml_error_bound(bp, dy(t), m, 30)
        # a violation is a certified excess: the deviation provably above the bound
        if dev is None or not bound.valid or dev.lo > bound.total.hi:
            sound = False
        if t > 0 and dev.hi > bound.total.lo:
            sound = False
    ok = m == 2048 and gaps_ok and sound
    record(6, ok, f"dml_modulus(1/2, 1, 4) = {m}; {sum(r.ok for r in rows)}/17 gap rows inside "
                  f"the propagated bound; log deviation below the bound everywhere: {sound}")


# 7 ----------------------------------------------------------------------------------

_BOUNDED = ["sin", "cos", "atan", "gauss"]
_EIGHTH = Fraction(1, 8)


def random_expr(rng, depth):
    """Random expression tree; ``sqrt`` and ``log`` act on ``e**2 + 1/8``."""
    if depth == 0 or rng.random() < 0.25:
        return ("x",) if rng.random() < 0.6 else ("c", Fraction(rng.randint(-16, 16), 8))
    r = rng.random()
    if r < 0.4:
        op = rng.choice(["add", "sub", "mul"])
        return (op, random_expr(rng, depth - 1), random_expr(rng, depth - 1))
    if r < 0.55:
        # exp only of bounded arguments
        return ("exp", (rng.choice(_BOUNDED), random_expr(rng, depth - 1)))
    return (rng.choice(_BOUNDED + ["sqrt", "log"]), random_expr(rng, depth - 1))


def iv_eval(e, x, k):
    op = e[0]
    if op == "x":
        return x
    if op == "c":
        return Interval.point(dy(e[1]))
    if op in ("add", "sub", "mul"):
        a, b = iv_eval(e[1], x, k), iv_eval(e[2], x, k)
        return {"add": a + b, "sub": a - b, "mul": a * b}[op].round(k)
    a = iv_eval(e[1], x, k)
    if op in ("sqrt", "log"):
        a = a.sqr() + Interval.point(dy(_EIGHTH))
    fn = {"exp": el.exp, "sin": el.sin, "cos": el.cos, "atan": el.atan, "sqrt": el.sqrt,
          "log": el.log, "gauss": el.exp_neg_sq_half}[op]
    return fn(a, k)


def mp_eval(e, x):
    op = e[0]
    if op == "x":
        return x
    if op == "c":
        return mpf(e[1])
    if op in ("add", "sub", "mul"):
        a, b = mp_eval(e[1], x), mp_eval(e[2], x)
        return {"add": a + b, "sub": a - b, "mul": a * b}[op]
    a = mp_eval(e[1], x)
    if op in ("sqrt", "log"):
        a = a * a + mpf(_EIGHTH)
    fn = {"exp": mpmath.exp, "sin": mpmath.sin, "cos": mpmath.cos, "atan": mpmath.atan,
          "sqrt": mpmath.sqrt, "log": mpmath.log, "gauss": lambda v: mpmath.exp(-v * v / 2)}[op]
    return fn(a)


def test_criterion_7_property_suites():
    rng = random.Random(20240607)
    violations = {}

    # enclosure soundness of composite expressions
    bad = 0
    for _ in range(1000):
        e = random_expr(rng, 4)
        lo = Fraction(rng.randint(-64, 64), 32)
        wd = Fraction(rng.choice([0, 1, 2, 8]), 64)
        x = Interval(dy(lo), dy(lo + wd))
        iv = iv_eval(e, x, 40)
        for s in (lo, lo + wd / 3, lo + wd):
            if not holds(iv, mp_eval(e, mpf(s))):
                bad += 1
                break
    violations["enclosure"] = bad

    # w_n + w_n^c = 1, 0 <= w_{n} <= w_{n+1} <= 1, w_n = 1 on [-n, n], 0 off [-n-1, n+1]
    bad = 0
    for n in range(6):
        w, wc, w1 = make_w(n), make_w_complement(n), make_w(n + 1)
        for j in range(-64 * (n + 3), 64 * (n + 3) + 1):
            x = dy(Fraction(j, 64))
            a, b, c = eval_tf(w, x), eval_tf(wc, x), eval_tf(w1, x)
            if a + b != Interval.point(1) or not (0 <= a.lo and a.hi <= c.lo and c.hi <= 1):
                bad += 1
            if abs(x) <= n and a != Interval.point(1):
                bad += 1
            if abs(x) >= n + 1 and a != Interval.point(0):
                bad += 1
    violations["partition/sandwich/monotone"] = bad

    # |phi| <= 1, phi(-t) = conj phi(t), and the modulus of continuity
    bad = 0
    phis = [char_from_dist(point_mass("1/4")), char_from_dist(density_uniform("-1/2", "1")),
            char_from_dist(binomial(4, "1/3"))]
    k = 8
    for phi in phis:
        b = phi.modulus(k)
        for _ in range(40):
            t = dy(Fraction(rng.randint(-512, 512), 64))
            v, w = phi.eval(t, k + 4), phi.eval(-t, k + 4)
            if v.abs_sq().lo > 1:
                bad += 1
            if not (v.re.intersects(w.re) and v.im.intersects(-w.im)):
                bad += 1
            s = t + Dyadic(rng.randint(-1 << 10, (1 << 10) - 1), -(b + 10))
            u = phi.eval(s, k + 4)
            dist2 = (v - u).abs_sq().lo.to_fraction()
            if dist2 >= Fraction(1, 1 << (2 * k)):
                bad += 1
    violations["char bounds/symmetry/modulus"] = bad

    total = sum(violations.values())
    record(7, total == 0, "violations " + ", ".join(f"{k}: {v}" for k, v in violations.items()))
