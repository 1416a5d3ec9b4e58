import csv
import io
import json
import math
import subprocess
import sys

import pytest

from stableharm.cli import run
from stableharm.params import make_params


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def rows(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def test_eval_h():
    code, out, _ = call("eval", "h", "--alpha", "1", "--rho", "0.5", "--x", "0", "--y", "2")
    assert code == 0
    assert out.startswith("# stableharm eval alpha=1.0 rho=0.5 class=cauchy-drift")
    assert "\r" not in out
    (r,) = rows(out)
    assert float(r["value"]) == pytest.approx(1 / (2 * math.pi * math.sqrt(3)), rel=1e-15)


def test_eval_json_and_beta():
    code, out, _ = call("eval", "hitprob", "--alpha", "1.5", "--beta", "0", "--x", "0.5",
                        "--y", "0", "--json")
    assert code == 0
    (d,) = json.loads(out)
    assert d["quantity"] == "hitprob" and 0 < d["value"] < 1


@pytest.mark.parametrize("quantity,args", [
    ("hstar", ["--x", "2", "--y", "0"]),
    ("g", ["--x", "0", "--y", "0.3"]),
    ("gstar", ["--x", "2", "--y", "3"]),
    ("gtau", ["--x", "0", "--y", "0.3"]),
    ("hitprob-halfline", ["--x", "0", "--y", "0.3"]),
    ("martin", ["--x", "0.2", "--side", "-1"]),
    ("exptime", ["--x", "0.2"]),
    ("kappastar", ["--x", "2"]),
    ("levy", ["--y", "2"]),
    ("semiinf-exit", ["--x", "0", "--y", "2"]),
])
def test_eval_quantities(quantity, args):
    code, out, err = call("eval", quantity, "--alpha", "1.5", "--rho", "0.55", *args)
    assert code == 0, err
    assert math.isfinite(float(rows(out)[0]["value"]))


def test_eval_brownian_hitprob():
    code, out, _ = call("eval", "hitprob", "--alpha", "2", "--rho", "0.5", "--x", "0.5",
                        "--y", "0")
    assert code == 0 and float(rows(out)[0]["value"]) == pytest.approx(0.5, rel=1e-15)


def test_eval_atoms():
    code, out, _ = call("eval", "atoms", "--alpha", "1.5", "--rho", repr(1 / 1.5), "--x", "0")
    assert code == 0
    rs = rows(out)
    assert rs[0]["kind"] == "atom" and float(rs[0]["value"]) == pytest.approx(2 ** -0.5)
    assert rs[-1]["kind"] == "defect"


def test_pstarinf():
    code, out, _ = call("eval", "pstarinf", "--alpha", "0.5", "--rho", "0.5", "--x", "3")
    assert code == 0
    assert 0 < float(rows(out)[0]["value"]) < 1


@pytest.mark.parametrize("argv,code", [
    (["eval", "bogus", "--alpha", "1.5", "--rho", "0.5"], 2),
    (["eval", "h", "--alpha", "1.5"], 2),
    (["eval", "h", "--alpha", "1.5", "--rho", "0.5", "--beta", "0"], 2),
    (["frobnicate"], 2),
    (["eval", "h", "--alpha", "2.5", "--rho", "0.5", "--x", "0", "--y", "2"], 3),
    (["eval", "h", "--alpha", "1.5", "--rho", "0.5", "--x", "2", "--y", "3"], 3),
    (["eval", "hitprob", "--alpha", "0.8", "--rho", "0.5", "--x", "0", "--y", "0.2"], 3),
    (["verify", "lemma2", "--alpha", "1.3", "--rho", "0.6", "--x", "2", "--tol", "1e-300"], 4),
])
def test_exit_codes(argv, code):
    got, _, err = call(*argv)
    assert got == code
    assert err.strip()


def test_table_negative_grid():
    code, out, _ = call("table", "g", "--alpha", "1.5", "--rho", "0.5", "--x", "0",
                        "--grid", "-0.9:0.9:5", "--var", "y")
    assert code == 0
    rs = rows(out)
    assert [float(r["y"]) for r in rs] == pytest.approx([-0.9, -0.45, 0.0, 0.45, 0.9])
    assert float(rs[0]["value"]) == pytest.approx(float(rs[-1]["value"]), rel=1e-14)


def test_table_bad_grid():
    code, _, err = call("table", "g", "--alpha", "1.5", "--rho", "0.5", "--x", "0",
                        "--grid", "1:2", "--var", "y")
    assert code == 2 and "grid" in err


def test_simulate(tmp_path):
    per = tmp_path / "paths.csv"
    argv = ["simulate", "--alpha", "1.5", "--rho", "0.5", "--region", "interval", "--x", "0",
            "--step", "1e-2", "--paths", "40", "--seed", "3", "--per-path", str(per)]
    code, out, _ = call(*argv)
    assert code == 0
    (r,) = rows(out)
    assert int(r["n"]) == 40
    assert float(r["fraction_below"]) + float(r["fraction_above"]) == pytest.approx(1.0)
    assert len(rows(per.read_text())) == 40
    assert call(*argv)[1] == out


def test_simulate_ks():
    code, out, _ = call("simulate", "--alpha", "1.5", "--rho", "0.5", "--region", "interval",
                        "--x", "0", "--step", "1e-2", "--paths", "40", "--seed", "3", "--ks")
    assert code == 0 and 0 < float(rows(out)[0]["ks_vs_cdf"]) < 1


def test_verify_single_and_env(monkeypatch):
    code, out, _ = call("verify", "masses", "--alpha", "1.3", "--rho", "0.6", "--x", "0.4")
    assert code == 0
    (r,) = rows(out)
    assert r["check_name"] == "mass-h" and r["passed"] == "True"
    monkeypatch.setenv("STABLEHARM_TOL", "1e-300")
    code, out, _ = call("verify", "lemma2", "--alpha", "1.3", "--rho", "0.6", "--x", "2")
    assert code == 4
    assert rows(out)[0]["passed"] == "False"


def test_verify_all_grid_json():
    code, out, _ = call("verify", "all", "--json")
    assert code == 0
    data = json.loads(out)
    assert len(data) > 200 and all(d["passed"] for d in data)


def test_info_and_out_file(tmp_path):
    dest = tmp_path / "info.csv"
    code, out, _ = call("info", "--alpha", "1.5", "--rho", "0.5", "--out", str(dest))
    assert code == 0 and out == ""
    (r,) = rows(dest.read_text())
    p = make_params(1.5, 0.5)
    assert float(r["c_rho"]) == p.c_rho
    assert r["process_class"] == "two-sided"


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "stableharm", "eval", "h", "--alpha", "1",
                          "--rho", "0.5", "--x", "0", "--y", "2"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert "0.091888149236965" in res.stdout
    res = subprocess.run([sys.executable, "-m", "stableharm", "eval", "nope"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 2
