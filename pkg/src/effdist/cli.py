"""Command-line front end.

    effdist char      --dist JSON | --phi JSON  --range M --grid-step S --precision K
    effdist tightness --dist JSON --precision K
    effdist glivenko  --phi JSON | --dist JSON  --f JSON --precision K
    effdist glivenko  --sequence JSON --f JSON --precision K
    effdist bochner   --phi JSON --n N --range X --grid-step S --precision K
    effdist dml       --p P --K K --precision K [--grid-step S]
    effdist selftest

Tables go out as CSV, certificates as JSON (override with ``--format``).
Failures print a JSON error report on stderr and exit with a status that
identifies the error kind.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from typing import List, Optional

from .charfun import CharOracle, char_from_dist, char_from_spec, sinc_shrinking_cert
from .convergence import ConvergenceCert
from .distributions import dist_from_spec, tightness
from .dml import BernoulliParams, clt_gap_rows, dml_error_bound, dml_modulus
from .dyadic import Dyadic, as_dyadic
from .errors import (BudgetExhausted, EffdistError, InvalidCharacteristic, PrecisionOverflow,
                     SpecError)
from .testfunctions import make_w, tf_from_json, tf_to_json
from .transfer import bochner_density, glivenko_certificate, glivenko_eval, smoothing_params

__all__ = ["RunSpec", "run", "main", "EXIT_CODES"]

EXIT_CODES = {
    "ok": 0,
    "error": 1,
    "parse-error": 2,
    "budget-exhausted": 3,
    "invalid-phi": 4,
    "precision-overflow": 5,
}

COMMANDS = ("char", "tightness", "glivenko", "bochner", "dml", "selftest")


@dataclass
class RunSpec:
    command: str
    dist: Optional[str] = None
    phi: Optional[str] = None
    f: Optional[str] = None
    sequence: Optional[str] = None
    precision: int = 8
    range: Optional[str] = None
    grid_step: Optional[str] = None
    n: int = 4
    p: Optional[str] = None
    K: Optional[str] = None
    output_path: Optional[str] = None
    format: Optional[str] = None
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise SpecError(f"unknown command {self.command!r}")
        if self.precision < 1:
            raise SpecError("precision must be >= 1")
        if self.grid_step is not None and _dy(self.grid_step, "grid step") <= 0:
            raise SpecError("grid step must be > 0")
        if self.range is not None and _dy(self.range, "range") <= 0:
            raise SpecError("range must be > 0")
        if self.format not in (None, "csv", "json"):
            raise SpecError(f"unknown format {self.format!r}")


def _dy(text, what: str) -> Dyadic:
    try:
        return as_dyadic(text)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise SpecError(f"{what} must be an integer or m/2^e dyadic: {exc}") from None


def _iv(iv) -> List[str]:
    return [iv.lo.decimal(), iv.hi.decimal()]


def _grid(M: Dyadic, step: Dyadic, cap: int = 1 << 16) -> List[Dyadic]:
    n = int((2 * M.to_fraction()) / step.to_fraction())
    if n + 1 > cap:
        raise BudgetExhausted(f"grid of {n + 1} points exceeds {cap}")
    return [-M + step * j for j in range(n + 1)]


def _phi_of(spec: RunSpec) -> CharOracle:
    if spec.phi is not None:
        return char_from_spec(spec.phi)
    if spec.dist is not None:
        return char_from_dist(dist_from_spec(spec.dist))
    raise SpecError("need --phi or --dist")


def _sequence_cert(text: str) -> ConvergenceCert:
    """Named certified sequences of characteristic functions."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid sequence JSON: {exc}") from None
    kind = obj.get("kind") if isinstance(obj, dict) else None
    if kind == "sinc_shrinking":
        return sinc_shrinking_cert()
    raise SpecError(f"unknown sequence kind {kind!r}")


# -- commands ---------------------------------------------------------------------

def _cmd_char(spec: RunSpec):
    phi = _phi_of(spec)
    k = spec.precision
    M = _dy(spec.range or "4", "range")
    step = _dy(spec.grid_step or "1/2^2", "grid step")
    rows = []
    for t in _grid(M, step):
        v = phi.eval(t, k)
        rows.append([t.decimal()] + _iv(v.re) + _iv(v.im))
    header = ["t", "re_lo", "re_hi", "im_lo", "im_hi"]
    cert = {
        "inputs": {"phi": phi.params, "range": M.decimal(), "grid_step": step.decimal()},
        "k": k,
        "result": [dict(zip(header, r)) for r in rows],
        "error_budget_breakdown": {"window": f"2^-{k + 2}", "tail": f"2^-{k + 2}", "width_bound": f"2^-{k}"},
    }
    return header, rows, cert, "csv"


def _cmd_tightness(spec: RunSpec):
    if spec.dist is None:
        raise SpecError("tightness needs --dist")
    mu = dist_from_spec(spec.dist)
    k = spec.precision
    L = tightness(mu, k)
    v = mu.windowed_eval(make_w(L), 0, k + 2).re
    cert = {
        "L": L,
        "inputs": {"dist": mu.params()},
        "k": k,
        "result": {"L": L, "mass_w_L": _iv(v)},
        "error_budget_breakdown": {"certified": f"mu(w_L) > 1 - 2^-{k}"},
    }
    return ["L"], [[str(L)]], cert, "json"


def _cmd_glivenko(spec: RunSpec):
    k = spec.precision
    f = tf_from_json(spec.f) if spec.f else make_w(1)
    if spec.sequence is not None:
        cert = _sequence_cert(spec.sequence)
        info = glivenko_certificate(cert, f, k)
        out = {
            "f": json.loads(tf_to_json(f)),
            "k": k,
            "threshold": info["threshold"],
            "plan": info["plan"],
            "inputs": {"sequence": json.loads(spec.sequence)},
            "result": {"threshold": info["threshold"]},
            "error_budget_breakdown": {
                "smoothing": f"2 x 2^-{k + 2}", "tail": f"2 x 2^-{k + 3}",
                "cutoff_T": info["T"], "inner_k": info["inner_k"],
            },
        }
        return ["threshold"], [[str(info["threshold"])]], out, "json"
    phi = _phi_of(spec)
    plan = smoothing_params(f, k + 1)
    J = glivenko_eval(phi, f, k)
    out = {
        "f": json.loads(tf_to_json(f)),
        "k": k,
        "plan": {"L": plan.L, "n": plan.n},
        "inputs": {"phi": phi.params},
        "result": _iv(J),
        "error_budget_breakdown": {"smoothing": f"2^-{k + 1}", "quadrature": f"2^-{k + 1}"},
    }
    return ["lo", "hi"], [_iv(J)], out, "json"


def _cmd_bochner(spec: RunSpec):
    if spec.phi is None and spec.dist is None:
        raise SpecError("bochner needs --phi")
    phi = _phi_of(spec)
    k = spec.precision
    n = spec.n
    if n < 1:
        raise SpecError("n must be >= 1")
    X = _dy(spec.range or "2", "range")
    step = _dy(spec.grid_step or "1/2^2", "grid step")
    rows = []
    for x in _grid(X, step):
        v = bochner_density(phi, n, x, k)
        rows.append([x.decimal()] + _iv(v))
    header = ["x", "lo", "hi"]
    cert = {
        "inputs": {"phi": phi.params, "n": n, "range": X.decimal(), "grid_step": step.decimal()},
        "k": k,
        "result": [dict(zip(header, r)) for r in rows],
        "error_budget_breakdown": {"quadrature": f"2^-{k + 1}", "tail": f"2^-{k + 3}"},
    }
    return header, rows, cert, "csv"


def _cmd_dml(spec: RunSpec):
    if spec.p is None:
        raise SpecError("dml needs --p")
    params = BernoulliParams(spec.p)
    K = _dy(spec.K or "1", "K")
    if K <= 0:
        raise SpecError("K must be > 0")
    k = spec.precision
    m = dml_modulus(params, K, k)
    b = dml_error_bound(params, K, m, k)
    bound = f"{b.total.hi.decimal()}<2^-{k}"
    header = ["m", "t", "psi_re_lo", "psi_re_hi", "psi_im_lo", "psi_im_hi", "gauss_lo", "gauss_hi",
              "certified_gap_bound"]
    rows = []
    table = []
    if spec.grid_step is not None:
        step = _dy(spec.grid_step, "grid step")
        for r in clt_gap_rows(params, m, _grid(K, step), k, k + 16):
            row = [str(m), r.t.decimal()] + _iv(r.psi.re) + _iv(r.psi.im) + _iv(r.gauss) + \
                  [Dyadic.ceil_of(r.allowed, k + 24).decimal()]
            rows.append(row)
            table.append(dict(zip(header, row)))
    cert = {
        "m": m,
        "bound": bound,
        "inputs": {"p": params.p.label, "K": K.decimal()},
        "k": k,
        "result": {"m": m, "bound": b.to_json(), "table": table},
        "error_budget_breakdown": {"main_term": _iv(b.main_term), "square_term": _iv(b.square_term)},
    }
    return header, rows, cert, "json"


def _cmd_selftest(spec: RunSpec):
    from .dml import std_binomial_char
    from .distributions import density_uniform, point_mass

    checks = []
    checks.append(("tightness(delta_0, 10) == 0", tightness(point_mass(), 10) == 0))
    checks.append(("tightness(uniform, 3) == 1", tightness(density_uniform(), 3) == 1))
    phi = char_from_dist(point_mass())
    checks.append(("phi_delta0(3) contains 1", 1 in phi.eval(3, 10).re))
    checks.append(("dml_modulus(1/2, 1, 4) == 2048", dml_modulus(BernoulliParams("1/2"), 1, 4) == 2048))
    psi = std_binomial_char(BernoulliParams("1/2"), 1, 0, 10)
    checks.append(("psi_1(0) contains 1", 1 in psi.re))
    checks.append(("smoothing_params(w_1, 3) == (3, 9217)",
                   (lambda p: (p.L, p.n) == (3, 9217))(smoothing_params(make_w(1), 3))))
    rows = [[name, "pass" if ok else "FAIL"] for name, ok in checks]
    cert = {"inputs": {}, "k": 0, "result": dict(rows), "error_budget_breakdown": {}}
    spec.extra["failed"] = sum(1 for _, ok in checks if not ok)
    return ["check", "status"], rows, cert, "csv"


_DISPATCH = {
    "char": _cmd_char, "tightness": _cmd_tightness, "glivenko": _cmd_glivenko,
    "bochner": _cmd_bochner, "dml": _cmd_dml, "selftest": _cmd_selftest,
}


def _render(header, rows, cert, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(cert, indent=2, sort_keys=False) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, SpecError):
        return EXIT_CODES["parse-error"]
    if isinstance(exc, BudgetExhausted):
        return EXIT_CODES["budget-exhausted"]
    if isinstance(exc, InvalidCharacteristic):
        return EXIT_CODES["invalid-phi"]
    if isinstance(exc, PrecisionOverflow):
        return EXIT_CODES["precision-overflow"]
    return EXIT_CODES["error"]


def run(spec: RunSpec, stdout=None, stderr=None) -> int:
    """Execute ``spec``; returns the process exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        spec.validate()
        header, rows, cert, default_fmt = _DISPATCH[spec.command](spec)
        text = _render(header, rows, cert, spec.format or default_fmt)
        if spec.output_path:
            with open(spec.output_path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            stdout.write(text)
    except (EffdistError, ValueError) as exc:
        kind = getattr(exc, "kind", "parse-error" if isinstance(exc, ValueError) else "error")
        code = _exit_code(exc) if isinstance(exc, EffdistError) else EXIT_CODES["parse-error"]
        stderr.write(json.dumps({"error": kind, "message": str(exc), "exit": code}) + "\n")
        return code
    return 1 if spec.extra.get("failed") else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="effdist", description="Certified characteristic functions and limit theorems.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--precision", "-k", type=int, default=8, help="target precision k (widths <= 2^-k)")
        p.add_argument("--output", "-o", dest="output_path", help="write to this file instead of stdout")
        p.add_argument("--format", choices=("csv", "json"))

    p = sub.add_parser("char", help="table of a characteristic function")
    p.add_argument("--dist")
    p.add_argument("--phi")
    p.add_argument("--range", help="half-width M of the t grid")
    p.add_argument("--grid-step")
    common(p)

    p = sub.add_parser("tightness", help="certified window index L")
    p.add_argument("--dist", required=True)
    common(p)

    p = sub.add_parser("glivenko", help="mu(f) from phi, or a convergence threshold")
    p.add_argument("--dist")
    p.add_argument("--phi")
    p.add_argument("--f", help="test function JSON (default w_1)")
    p.add_argument("--sequence", help='certified sequence, e.g. {"kind": "sinc_shrinking"}')
    common(p)

    p = sub.add_parser("bochner", help="density table f_n(x)")
    p.add_argument("--phi")
    p.add_argument("--dist")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--range")
    p.add_argument("--grid-step")
    common(p)

    p = sub.add_parser("dml", help="de Moivre-Laplace threshold")
    p.add_argument("--p", required=True)
    p.add_argument("--K", default="1")
    p.add_argument("--grid-step", help="also tabulate the certified gap on this t grid")
    common(p)

    p = sub.add_parser("selftest", help="quick consistency checks")
    common(p)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = RunSpec(**{k: v for k, v in vars(args).items() if k in RunSpec.__dataclass_fields__})
    return run(spec)


if __name__ == "__main__":
    sys.exit(main())
