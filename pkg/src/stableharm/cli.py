"""Command-line interface: ``stableharm {eval,table,simulate,verify,info}``.

Exit codes: 0 success, 2 usage error, 3 domain or applicability error,
4 accuracy failure or failed check. ``STABLEHARM_TOL`` sets the default of
``--tol``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import Callable

import numpy as np

from . import __version__
from .boundary import (Region, exit_law, h_density, hstar_density, kappa_star, pstar_infinity,
                       semiinf_exit_density)
from .errors import (AccuracyError, ContractError, DivergenceError, DomainError,
                     NotApplicableError, ParameterDomainError)
from .green import expected_exit_time, g_complement, g_halfline, g_interval
from .hitting import hit_prob, hit_prob_halfline, martin_kernel
from .montecarlo import SimConfig, simulate_exit, summarize
from .params import StableParams, levy_density, make_params, p1_at_zero, rho_from_beta
from .verify import (canonical_params, check_desire_andre, check_ikeda_watanabe, check_lemma1,
                     check_lemma2, check_masses, check_p1_at_zero, reports_to_csv,
                     reports_to_json, run_checks)

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_ACCURACY = 0, 2, 3, 4
TOL_ENV = "STABLEHARM_TOL"


def _value_fn(name: str) -> Callable[[StableParams, argparse.Namespace, float, float], float]:
    table = {
        "h": lambda p, a, x, y: h_density(p, x, y),
        "hstar": lambda p, a, x, y: hstar_density(p, x, y),
        "g": lambda p, a, x, y: g_interval(p, x, y).value,
        "gstar": lambda p, a, x, y: g_complement(p, x, y).value,
        "gtau": lambda p, a, x, y: g_halfline(p, x, y).value,
        "hitprob": lambda p, a, x, y: hit_prob(p, x, y),
        "hitprob-halfline": lambda p, a, x, y: hit_prob_halfline(p, x, y),
        "martin": lambda p, a, x, y: martin_kernel(p, a.side, x),
        "exptime": lambda p, a, x, y: expected_exit_time(p, x),
        "kappastar": lambda p, a, x, y: kappa_star(p, x).value,
        "pstarinf": lambda p, a, x, y: pstar_infinity(p, x),
        "levy": lambda p, a, x, y: levy_density(p, y),
        "semiinf-exit": lambda p, a, x, y: semiinf_exit_density(p, x, y),
    }
    return table[name]


QUANTITIES = ("h", "hstar", "g", "gstar", "gtau", "hitprob", "hitprob-halfline", "martin",
              "exptime", "kappastar", "pstarinf", "levy", "semiinf-exit", "atoms")
NEEDS_Y = {"h", "hstar", "g", "gstar", "gtau", "hitprob", "hitprob-halfline", "levy",
           "semiinf-exit"}
NEEDS_X = set(QUANTITIES) - {"levy"}
ALL_CHECKS = ("lemma1", "lemma2", "masses", "ikeda-watanabe", "desire-andre", "p1")
CHECKS = ALL_CHECKS + ("all",)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def _default_tol():
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return None
    try:
        return float(raw)
    except ValueError:
        raise _UsageError(f"{TOL_ENV}={raw!r} is not a number")


def _add_params(sp, required=True):
    sp.add_argument("--alpha", type=float, required=required, help="stability index in (0, 2]")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--rho", type=float, help="positivity parameter P[L_1 >= 0]")
    g.add_argument("--beta", type=float, help="asymmetry parameter, converted to rho")


def _add_output(sp):
    sp.add_argument("--json", action="store_true", help="emit a JSON array instead of CSV")
    sp.add_argument("--out", metavar="FILE", help="write output to FILE")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="stableharm", description="Exit laws, Green functions and hitting "
                 "probabilities of real stable processes on (-1, 1) and related sets.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ev = sub.add_parser("eval", help="evaluate one quantity")
    ev.add_argument("quantity", choices=QUANTITIES)
    _add_params(ev)
    ev.add_argument("--x", type=float)
    ev.add_argument("--y", type=float)
    ev.add_argument("--side", type=int, choices=(-1, 1), default=1, help="Martin kernel side")
    ev.add_argument("--region", choices=[r.value for r in Region], default="interval",
                    help="region for atoms")
    _add_output(ev)

    tb = sub.add_parser("table", help="tabulate a quantity over a grid")
    tb.add_argument("quantity", choices=QUANTITIES)
    _add_params(tb)
    tb.add_argument("--x", type=float)
    tb.add_argument("--y", type=float)
    tb.add_argument("--grid", required=True, metavar="LO:HI:N")
    tb.add_argument("--var", choices=("x", "y"), help="grid variable (default: the one not given)")
    tb.add_argument("--side", type=int, choices=(-1, 1), default=1)
    tb.add_argument("--region", choices=[r.value for r in Region], default="interval")
    _add_output(tb)

    sm = sub.add_parser("simulate", help="Monte Carlo first exit/entrance")
    _add_params(sm)
    sm.add_argument("--region", choices=[r.value for r in Region], default="interval")
    sm.add_argument("--x", type=float, required=True)
    sm.add_argument("--step", type=float, default=1e-3)
    sm.add_argument("--paths", type=int, default=1000)
    sm.add_argument("--seed", type=int, default=0)
    sm.add_argument("--max-steps", type=int, default=10_000_000)
    sm.add_argument("--escape-radius", type=float, default=math.inf)
    sm.add_argument("--tol", type=float, default=None, help="quadrature tolerance of the CDF")
    sm.add_argument("--ks", action="store_true", help="KS statistic against the exact law")
    sm.add_argument("--per-path", metavar="FILE", help="write per-path samples as CSV")
    _add_output(sm)

    vf = sub.add_parser("verify", help="run identity checks")
    vf.add_argument("check", choices=CHECKS)
    _add_params(vf, required=False)
    vf.add_argument("--x", type=float)
    vf.add_argument("--y", type=float)
    vf.add_argument("--domain", choices=("interval", "complement"), default="interval")
    vf.add_argument("--tol", type=float, default=None)
    _add_output(vf)

    inf = sub.add_parser("info", help="process class and derived constants")
    _add_params(inf)
    _add_output(inf)
    return ap


def _params(args) -> StableParams:
    if args.beta is not None:
        rho = rho_from_beta(args.alpha, args.beta)
    elif args.rho is not None:
        rho = args.rho
    elif args.alpha == 2.0:
        rho = 0.5
    else:
        raise _UsageError("one of --rho or --beta is required")
    return make_params(args.alpha, rho)


def _parse_grid(spec: str) -> np.ndarray:
    try:
        lo, hi, n = spec.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise _UsageError(f"--grid expects LO:HI:N, got {spec!r}")
    if n < 1:
        raise _UsageError("--grid needs N >= 1")
    return np.linspace(lo, hi, n)


def _meta_fmt(v) -> str:
    return repr(float(v)) if isinstance(v, (float, np.floating)) else _fmt(v)


def _meta_line(cmd: str, args, p: StableParams | None) -> str:
    parts = [f"stableharm {cmd}"]
    if p is not None:
        parts += [f"alpha={_meta_fmt(p.alpha)}", f"rho={_meta_fmt(p.rho)}",
                  f"class={p.process_class.value}"]
    for k, v in sorted(vars(args).items()):
        if k in ("command", "alpha", "rho", "json", "out") or v is None:
            continue
        parts.append(f"{k}={_meta_fmt(v)}")
    return "# " + " ".join(parts)


def _emit(args, header: list[str], rows: list[list], meta: list[str], out) -> None:
    if args.json:
        text = json.dumps([dict(zip(header, r)) for r in rows], indent=2, allow_nan=True) + "\n"
    else:
        buf = io.StringIO()
        for m in meta:
            buf.write(m + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(v) for v in r])
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        out.write(text)


def _atoms_rows(p, region, x):
    law = exit_law(p, region, x)
    rows = [[x, "atom", loc, w] for loc, w in law.atoms]
    rows.append([x, "defect", math.nan, law.defect])
    return rows


def _require(args, name, qty):
    if getattr(args, name) is None:
        raise _UsageError(f"quantity {qty!r} needs --{name}")


def _cmd_eval(args, out, err) -> int:
    p = _params(args)
    q = args.quantity
    if q in NEEDS_X:
        _require(args, "x", q)
    if q in NEEDS_Y:
        _require(args, "y", q)
    meta = [_meta_line("eval", args, p)]
    if q == "atoms":
        _emit(args, ["x", "kind", "location", "value"], _atoms_rows(p, args.region, args.x),
              meta, out)
        return EXIT_OK
    v = _value_fn(q)(p, args, args.x, args.y)
    _emit(args, ["quantity", "x", "y", "value"], [[q, args.x, args.y, v]], meta, out)
    return EXIT_OK


def _cmd_table(args, out, err) -> int:
    p = _params(args)
    q = args.quantity
    grid = _parse_grid(args.grid)
    var = args.var
    if var is None:
        var = "y" if (q in NEEDS_Y and args.x is not None and args.y is None) else "x"
    meta = [_meta_line("table", args, p)]
    if q == "atoms":
        rows = []
        for x in grid:
            rows += _atoms_rows(p, args.region, float(x))
        _emit(args, ["x", "kind", "location", "value"], rows, meta, out)
        return EXIT_OK
    other = "y" if var == "x" else "x"
    if (other == "y" and q in NEEDS_Y) or (other == "x" and q in NEEDS_X):
        _require(args, other, q)
    fn = _value_fn(q)
    rows = []
    for v in grid:
        x = float(v) if var == "x" else args.x
        y = float(v) if var == "y" else args.y
        rows.append([q, x, y, fn(p, args, x, y)])
    _emit(args, ["quantity", "x", "y", "value"], rows, meta, out)
    return EXIT_OK


def _cmd_simulate(args, out, err) -> int:
    p = _params(args)
    cfg = SimConfig(p, args.region, args.x, args.step, args.paths, args.max_steps, args.seed,
                    args.escape_radius)
    samples = simulate_exit(cfg)
    cdf = None
    if args.ks:
        law = exit_law(p, args.region, args.x)
        tol = args.tol if args.tol is not None else 1e-9
        if law.density is None:
            raise NotApplicableError("exact law has no density part; KS statistic is undefined")
        cdf = lambda ys: law.cdf(ys, tol)  # noqa: E731
    summ = summarize(samples, args.region, cdf).as_dict()
    meta = [_meta_line("simulate", args, p)]
    header = list(summ.keys())
    _emit(args, header, [[summ[k] for k in header]], meta, out)
    if args.per_path:
        with open(args.per_path, "w", newline="\n") as fh:
            w = csv.writer(fh, lineterminator="\n")
            fh.write(meta[0] + "\n")
            w.writerow(["path_index", "exit_time", "exit_pos", "censored"])
            for s in samples:
                w.writerow([s.path_index, _fmt(s.exit_time), _fmt(s.exit_pos), _fmt(s.censored)])
    return EXIT_OK


def _cmd_verify(args, out, err) -> int:
    tol = args.tol if args.tol is not None else _default_tol()
    kw = {} if tol is None else {"tol": tol}
    if args.alpha is None:
        names = ALL_CHECKS if args.check == "all" else (args.check,)
        reports = run_checks(names, canonical_params(), tol)
        p = None
    else:
        p = _params(args)
        c = args.check
        if c == "lemma1":
            _require(args, "y", c)
            reports = [check_lemma1(p, args.y, **kw)]
        elif c in ("lemma2", "masses"):
            _require(args, "x", c)
            reports = [(check_lemma2 if c == "lemma2" else check_masses)(p, args.x, **kw)]
        elif c == "ikeda-watanabe":
            _require(args, "x", c)
            _require(args, "y", c)
            reports = [check_ikeda_watanabe(p, args.x, args.y, args.domain, **kw)]
        elif c == "desire-andre":
            _require(args, "x", c)
            _require(args, "y", c)
            reports = [check_desire_andre(p, args.x, args.y, **kw)]
        elif c == "p1":
            reports = [check_p1_at_zero(p, **kw)]
        else:
            reports = run_checks(params=[p], tol=tol)
    text = reports_to_json(reports) + "\n" if args.json else \
        _meta_line("verify", args, p) + "\n" + reports_to_csv(reports)
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        out.write(text)
    failed = sum(not r.passed for r in reports)
    if failed:
        err.write(f"{failed} of {len(reports)} checks failed\n")
        return EXIT_ACCURACY
    return EXIT_OK


def _cmd_info(args, out, err) -> int:
    p = _params(args)
    d = p.describe()
    d["p1_at_zero"] = p1_at_zero(p)
    header = list(d.keys())
    _emit(args, header, [[d[k] for k in header]], [_meta_line("info", args, p)], out)
    return EXIT_OK


COMMANDS = {"eval": _cmd_eval, "table": _cmd_table, "simulate": _cmd_simulate,
            "verify": _cmd_verify, "info": _cmd_info}


def _glue_negative_values(argv: list[str]) -> list[str]:
    # argparse reads "-0.9:0.9:5" or "-1e-3" as an option flag; bind it to its option
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok.startswith("--") and "=" not in tok:
            nxt = next(it, None)
            if nxt is not None and len(nxt) > 1 and nxt[0] == "-" and (nxt[1].isdigit() or nxt[1] == "."):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(tok)
    return out


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(_glue_negative_values(argv))
        return COMMANDS[args.command](args, out, err)
    except _UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except (ParameterDomainError, DomainError, NotApplicableError, ContractError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_DOMAIN
    except (AccuracyError, DivergenceError) as exc:
        err.write(f"accuracy failure: {exc}\n")
        return EXIT_ACCURACY


def main(argv: list[str] | None = None) -> None:
    try:
        code = run(argv)
    except SystemExit as exc:  # --help / --version
        code = exc.code if isinstance(exc.code, int) else 0
    sys.exit(code)
