import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import mpmath
import pytest

from effdist.cli import EXIT_CODES, RunSpec, main, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    from effdist.cli import build_parser
    args = build_parser().parse_args(list(argv))
    spec = RunSpec(**{k: v for k, v in vars(args).items() if k in RunSpec.__dataclass_fields__})
    code = run(spec, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_dml_threshold():
    code, out, _ = call("dml", "--p", "1/2", "--K", "1", "--precision", "4")
    doc = json.loads(out)
    assert code == 0 and doc["m"] == 2048
    total, _, k = doc["bound"].partition("<")
    assert k == "2^-4" and Fraction(total) < Fraction(1, 16)
    assert set(doc) >= {"inputs", "k", "result", "error_budget_breakdown"}


def test_dml_gap_table():
    code, out, _ = call("dml", "--p", "1/2", "--precision", "4", "--grid-step", "1/8", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 17
    assert all(r["m"] == "2048" for r in rows)


def test_tightness_point_mass():
    code, out, _ = call("tightness", "--dist", '{"kind":"point_mass","a":"0"}', "--precision", "10")
    assert code == 0 and json.loads(out)["L"] == 0


def test_char_table_binomial():
    code, out, _ = call("char", "--dist", '{"kind":"binomial","m":4,"p":"1/2"}', "--range", "2",
                        "--grid-step", "1/2", "--precision", "10")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 9
    for r in rows:
        t = mpmath.mpf(Fraction(r["t"]).numerator) / Fraction(r["t"]).denominator
        z = ((1 + mpmath.expj(t)) / 2) ** 4
        assert mpmath.mpf(r["re_lo"]) <= z.real <= mpmath.mpf(r["re_hi"])
        assert mpmath.mpf(r["im_lo"]) <= z.imag <= mpmath.mpf(r["im_hi"])


def test_char_phi_json_output(tmp_path):
    path = tmp_path / "phi.json"
    code, out, _ = call("char", "--phi", '{"kind":"sinc_uniform","a":"1/2"}', "--range", "1",
                        "--grid-step", "1", "--format", "json", "-o", str(path))
    assert code == 0 and out == ""
    doc = json.loads(path.read_text())
    assert len(doc["result"]) == 3


def test_glivenko_sequence():
    code, out, _ = call("glivenko", "--sequence", '{"kind":"sinc_shrinking"}', "--precision", "4")
    doc = json.loads(out)
    assert code == 0 and doc["threshold"] == 11


def test_glivenko_value():
    code, out, _ = call("glivenko", "--phi", '{"kind":"constant_one"}', "--f", '{"kind":"w","n":0}',
                        "--precision", "3")
    doc = json.loads(out)
    lo, hi = map(Fraction, doc["result"])
    assert code == 0 and lo <= 1 <= hi


def test_bochner_table():
    code, out, _ = call("bochner", "--phi", '{"kind":"constant_one"}', "--n", "4", "--range", "1",
                        "--grid-step", "1/2", "--precision", "6")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 5
    for r in rows:
        x = mpmath.mpf(Fraction(r["x"]).numerator) / Fraction(r["x"]).denominator
        ref = mpmath.sqrt(1 / mpmath.pi) * mpmath.exp(-x * x)
        assert mpmath.mpf(r["lo"]) <= ref <= mpmath.mpf(r["hi"])


def test_selftest():
    code, out, _ = call("selftest")
    assert code == 0 and "FAIL" not in out


@pytest.mark.parametrize("argv,kind", [
    (["char", "--dist", '{"kind":"nope"}'], "parse-error"),
    (["char", "--dist", "{"], "parse-error"),
    (["char", "--dist", '{"kind":"point_mass"}', "--grid-step", "0"], "parse-error"),
    (["char", "--dist", '{"kind":"point_mass"}', "--grid-step", "1/3"], "parse-error"),
    (["dml", "--p", "2"], "parse-error"),
    (["char", "--dist", '{"kind":"point_mass"}', "--range", "4096", "--grid-step", "1/64"], "budget-exhausted"),
    (["bochner", "--phi", '{"kind":"constant_one"}', "--n", "0"], "parse-error"),
])
def test_error_exit_codes(argv, kind):
    code, out, err = call(*argv)
    assert code == EXIT_CODES[kind]
    report = json.loads(err)
    assert report["exit"] == code and report["message"]


def test_invalid_phi_exit_code(monkeypatch):
    from effdist import cli
    from effdist.errors import NegativityViolation

    def boom(*a, **kw):
        raise NegativityViolation("negative density")

    monkeypatch.setattr(cli, "bochner_density", boom)
    code, _, err = call("bochner", "--phi", '{"kind":"constant_one"}')
    assert code == EXIT_CODES["invalid-phi"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "effdist", "tightness", "--dist", '{"kind":"point_mass"}'],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0 and json.loads(proc.stdout)["L"] == 0


def test_argparse_rejects_unknown_command():
    with pytest.raises(SystemExit):
        main(["frobnicate"])
