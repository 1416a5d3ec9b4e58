"""Numerical checks of the kernel identities behind the exit laws and Green functions.

Each check integrates kernels by quadrature and compares against the closed
forms of :mod:`boundary` and :mod:`green`, returning a :class:`CheckReport`.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from typing import Callable, Iterable

from scipy import special

from .boundary import exit_law, h_density, hstar_density, kappa_star, pstar_infinity
from .errors import AccuracyError, NotApplicableError, StableHarmError
from .green import g_complement, g_interval
from .params import ProcessClass, StableParams, levy_density, make_params, p1_at_zero, phi_kernel
from .specfun import QuadInfo, inc_psi_value, quad_semi_infinite, quad_singular

__all__ = [
    "AbelianKernel",
    "CheckReport",
    "check_lemma1",
    "check_lemma2",
    "check_ikeda_watanabe",
    "check_masses",
    "check_desire_andre",
    "check_p1_at_zero",
    "CANONICAL_GRID",
    "canonical_params",
    "run_checks",
    "reports_to_json",
    "reports_to_csv",
]

CANONICAL_GRID = {
    0.5: (0.3, 0.5, 0.8),
    0.8: (0.2, 0.5, 0.7),
    1.0: (0.3, 0.5, 0.6),
    1.3: (0.35, 0.5, 0.6),
    1.7: (0.45, 0.5, 0.55),
}
INSIDE_POINTS = (-0.6, 0.0, 0.5)
OUTSIDE_POINTS = (-3.0, 1.2, 2.5)


def canonical_params(exclude_cauchy: bool = False) -> list[StableParams]:
    return [make_params(a, r) for a, rs in CANONICAL_GRID.items() for r in rs
            if not (exclude_cauchy and a == 1.0)]


@dataclass(frozen=True)
class AbelianKernel:
    """``u(t, y) = (c_rho 1_{y>t} + c_rho_hat 1_{y<t}) |t - y|^(alpha-1)``, or its hat version."""

    params: StableParams
    hatted: bool = False

    def __call__(self, t: float, y: float) -> float:
        p = self.params
        c_up, c_down = (p.c_rho_hat, p.c_rho) if self.hatted else (p.c_rho, p.c_rho_hat)
        if y > t:
            return c_up * (y - t) ** (p.alpha - 1.0)
        if y < t:
            return c_down * (t - y) ** (p.alpha - 1.0)
        return math.inf if p.alpha < 1.0 else 0.0


@dataclass
class CheckReport:
    check_name: str
    parameters: dict
    residual: float
    tolerance: float
    passed: bool
    subdivisions: int = 0
    est_error: float = 0.0
    message: str = ""

    def as_dict(self) -> dict:
        return asdict(self)


class _Acc:
    """Accumulates quadrature diagnostics over several pieces."""

    def __init__(self, tol: float):
        self.tol = tol
        self.subdivisions = 0
        self.est_error = 0.0

    def add(self, info: QuadInfo) -> float:
        self.subdivisions += info.subdivisions
        self.est_error += info.est_error
        return info.value

    def quad(self, f, a, b, le=0.0, re=0.0) -> float:
        return self.add(quad_singular(f, a, b, le, re, tol=self.tol, full_output=True)[1])

    def semi(self, f, a, direction, le=0.0, decay=1.0) -> float:
        return self.add(quad_semi_infinite(f, a, direction, le, decay, tol=self.tol,
                                           full_output=True)[1])


def _params_dict(p: StableParams, **extra) -> dict:
    return {"alpha": p.alpha, "rho": p.rho, **extra}


def _report(name, params, compute: Callable[[_Acc], float], tolerance, quad_tol) -> CheckReport:
    acc = _Acc(quad_tol)
    try:
        residual = compute(acc)
    except AccuracyError as exc:
        return CheckReport(name, params, math.nan, tolerance, False, acc.subdivisions,
                           exc.error, f"accuracy: {exc}")
    except StableHarmError as exc:
        return CheckReport(name, params, math.nan, tolerance, False, acc.subdivisions,
                           acc.est_error, f"{type(exc).__name__}: {exc}")
    passed = bool(abs(residual) <= tolerance)
    return CheckReport(name, params, float(residual), tolerance, passed, acc.subdivisions,
                       acc.est_error)


def _kink_exp(p: StableParams) -> float:
    # behaviour of |t - y|^(alpha-1) at the kink, as seen by the weight
    return p.alpha - 1.0


def check_lemma1(p: StableParams, y: float, tol: float = 1e-8) -> CheckReport:
    """``int_{-1}^1 u_hat(t, y) phi(t) dt - 1``."""
    if p.alpha == 1.0 or p.process_class is ProcessClass.BROWNIAN:
        raise NotApplicableError("the Abelian identity check needs alpha in (0, 1) or (1, 2)")
    if not p.phi_integrable:
        raise NotApplicableError("phi is not integrable for these parameters")
    uh = AbelianKernel(p, hatted=True)

    def compute(acc):
        f = lambda t: uh(t, y) * phi_kernel(p, t)  # noqa: E731
        k = _kink_exp(p)
        return acc.quad(f, -1.0, y, -p.ar_hat, k) + acc.quad(f, y, 1.0, k, -p.ar) - 1.0

    return _report("lemma1", _params_dict(p, y=y), compute, tol, tol * 1e-2)


def check_lemma2(p: StableParams, x: float, tol: float = 1e-8) -> CheckReport:
    """Relative residual of ``c_rho_hat int (x-y)^(alpha-1) phi(y) dy`` against its Gamma/psi form."""
    if p.alpha == 1.0 or p.process_class is ProcessClass.BROWNIAN:
        raise NotApplicableError("the potential identity check needs alpha != 1 and alpha < 2")
    if not p.phi_integrable:
        raise NotApplicableError("phi is not integrable for these parameters")

    def compute(acc):
        a = p.alpha
        f = lambda s: (x - s) ** (a - 1.0) * phi_kernel(p, s)  # noqa: E731
        lhs = p.c_rho_hat * acc.quad(f, -1.0, 1.0, -p.ar_hat, -p.ar)
        rhs = 1.0 - (special.gamma(1.0 - p.ar) * 2.0 ** (1.0 - a)
                     / (special.gamma(p.ar_hat) * special.gamma(1.0 - a)) * inc_psi_value(p, x))
        return (lhs - rhs) / rhs

    return _report("lemma2", _params_dict(p, x=x), compute, tol, tol * 1e-2)


def check_ikeda_watanabe(p: StableParams, x: float, y: float, domain: str = "interval",
                         tol: float = 1e-6) -> CheckReport:
    """Relative residual of ``int g(x, v) nu(y - v) dv`` against the exit or entrance density."""
    name = f"ikeda-watanabe-{domain}"
    params = _params_dict(p, x=x, y=y, domain=domain)
    if p.process_class is ProcessClass.BROWNIAN:
        return CheckReport(name, params, 0.0, tol, True, message="no jumps: both sides vanish")
    if not p.process_class.has_two_sided_jumps:
        raise NotApplicableError("Ikeda-Watanabe check is implemented for two-sided jumps")
    a = p.alpha
    kink = a - 1.0 if a < 1.0 else 0.0

    if domain == "interval":
        def compute(acc):
            f = lambda v: g_interval(p, x, v).value * levy_density(p, y - v)  # noqa: E731
            conv = acc.quad(f, -1.0, x, p.ar, kink) + acc.quad(f, x, 1.0, kink, p.ar_hat)
            ref = h_density(p, x, y)
            return (conv - ref) / ref
    elif domain == "complement":
        decay = 1.0 if a < 1.0 else a

        def compute(acc):
            f = lambda v: g_complement(p, x, v).value * levy_density(p, y - v)  # noqa: E731
            if x > 1.0:
                conv = (acc.quad(f, 1.0, x, p.ar_hat, kink) + acc.semi(f, x, 1, kink, decay)
                        + acc.semi(f, -1.0, -1, p.ar, decay))
            else:
                conv = (acc.quad(f, x, -1.0, kink, p.ar) + acc.semi(f, x, -1, kink, decay)
                        + acc.semi(f, 1.0, 1, p.ar_hat, decay))
            ref = hstar_density(p, x, y)
            return (conv - ref) / ref
    else:
        raise NotApplicableError(f"unknown domain {domain!r}")
    return _report(name, params, compute, tol, tol * 1e-3)


def check_masses(p: StableParams, x: float, tol: float = 1e-8) -> CheckReport:
    """Total mass of ``H_x`` (``|x| < 1``) or ``H*_x`` (``|x| > 1``) against its predicted value."""
    inside = abs(x) < 1.0
    name = "mass-h" if inside else "mass-hstar"

    def compute(acc):
        law = exit_law(p, "interval" if inside else "complement", x)
        mass = sum(acc.add(_segment_info(seg, law.density, acc.tol)) for seg in law.segments)
        mass += sum(w for _, w in law.atoms)
        if inside or p.alpha >= 1.0:
            target = 1.0
        elif p.process_class is ProcessClass.TWO_SIDED:
            target = 1.0 - pstar_infinity(p, x)
        else:
            target = 1.0 - law.defect
        return mass - target

    return _report(name, _params_dict(p, x=x), compute, tol, tol * 1e-2)


def _segment_info(seg, f, tol) -> QuadInfo:
    if math.isinf(seg.hi):
        return quad_semi_infinite(f, seg.lo, 1, seg.lo_exp, seg.decay, tol=tol, full_output=True)[1]
    if math.isinf(seg.lo):
        return quad_semi_infinite(f, seg.hi, -1, seg.hi_exp, seg.decay, tol=tol, full_output=True)[1]
    return quad_singular(f, seg.lo, seg.hi, seg.lo_exp, seg.hi_exp, tol=tol, full_output=True)[1]


def check_desire_andre(p: StableParams, x: float, y: float, tol: float = 1e-7) -> CheckReport:
    """Residual of ``int u(t, y) h*(x, t) dt + kappa*(x) = c_rho_hat |x - y|^(alpha-1)``, ``x > 1``.

    ``x < -1`` is mapped to the dual problem at ``(-x, -y)``.
    """
    if p.alpha == 1.0 or not p.process_class.has_two_sided_jumps:
        raise NotApplicableError("Abelian equation check needs alpha != 1 and jumps of both signs")
    if x < -1.0:
        rep = check_desire_andre(p.dual(), -x, -y, tol)
        rep.parameters = _params_dict(p, x=x, y=y)
        return rep
    u = AbelianKernel(p)

    def compute(acc):
        f = lambda t: u(t, y) * hstar_density(p, x, t)  # noqa: E731
        k = _kink_exp(p)
        lhs = acc.quad(f, -1.0, y, -p.ar, k) + acc.quad(f, y, 1.0, k, -p.ar_hat)
        if p.alpha > 1.0:
            lhs += kappa_star(p, x).value
        return lhs - p.c_rho_hat * abs(x - y) ** (p.alpha - 1.0)

    return _report("desire-andre", _params_dict(p, x=x, y=y), compute, tol, tol * 1e-2)


def check_p1_at_zero(p: StableParams, tol: float = 1e-8) -> CheckReport:
    """``p_1(0)`` against Fourier inversion ``(1/pi) int_0^inf Re exp(Psi(lam)) dlam``.

    The residual is scaled by ``Gamma(1 + 1/alpha)/pi``, the value of ``p_1(0)``
    up to the factor ``sin(pi rho)``, so it stays meaningful when ``p_1(0) = 0``.
    """
    th = math.pi * p.alpha * (p.rho - 0.5)
    a = p.alpha

    def compute(acc):
        # lam = u^(1/alpha) gives a smooth integrand with an algebraic end at 0
        def f(uu):
            return math.exp(-uu * math.cos(th)) * math.cos(uu * math.sin(th))

        val = acc.semi(lambda uu: f(uu) * uu ** (1.0 / a - 1.0), 0.0, 1, 1.0 / a - 1.0, 2.0)
        ref = val / (a * math.pi)
        return (p1_at_zero(p) - ref) / (special.gamma(1.0 + 1.0 / a) / math.pi)

    return _report("p1-at-zero", _params_dict(p), compute, tol, tol * 1e-2)


def run_checks(names: Iterable[str] = ("lemma1", "lemma2", "masses", "ikeda-watanabe",
                                       "desire-andre", "p1"),
               params: Iterable[StableParams] | None = None,
               tol: float | None = None) -> list[CheckReport]:
    """Run the named checks over the canonical grid, in fixed grid order.

    ``tol`` replaces every check's default tolerance when given.
    """
    plist = list(params) if params is not None else canonical_params()
    out: list[CheckReport] = []
    for name in names:
        for p in plist:
            out.extend(_run_one(name, p, tol))
    return out


def _run_one(name: str, p: StableParams, tol: float | None = None) -> list[CheckReport]:
    kw = {} if tol is None else {"tol": tol}
    res = []
    a = p.alpha
    if name == "lemma1" and a != 1.0 and a < 2.0 and p.phi_integrable:
        res += [check_lemma1(p, y, **kw) for y in (-0.9, 0.0, 0.7)]
    elif name == "lemma2" and a != 1.0 and a < 2.0 and p.phi_integrable:
        res += [check_lemma2(p, x, **kw) for x in (1.1, 2.0, 10.0)]
    elif name == "masses":
        res += [check_masses(p, x, **kw) for x in INSIDE_POINTS + OUTSIDE_POINTS]
    elif name == "ikeda-watanabe" and p.process_class.has_two_sided_jumps:
        res += [check_ikeda_watanabe(p, x, y, "interval", **kw) for x, y in ((0.2, 1.5), (-0.5, -1.3))]
        res += [check_ikeda_watanabe(p, x, y, "complement", **kw) for x, y in ((2.0, 0.0), (-1.5, 0.6))]
    elif name == "desire-andre" and a != 1.0 and p.process_class.has_two_sided_jumps:
        res += [check_desire_andre(p, x, y, **kw) for x, y in ((2.0, 0.0), (1.3, -0.7), (-4.0, 0.5))]
    elif name == "p1" and a < 2.0:
        res.append(check_p1_at_zero(p, **kw))
    return res


def reports_to_json(reports: Iterable[CheckReport]) -> str:
    return json.dumps([r.as_dict() for r in reports], indent=2, allow_nan=True)


def reports_to_csv(reports: Iterable[CheckReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["check_name", "parameters", "residual", "tolerance", "passed",
                "subdivisions", "est_error", "message"])
    for r in reports:
        w.writerow([r.check_name, json.dumps(r.parameters, sort_keys=True), f"{r.residual:.17g}",
                    f"{r.tolerance:.17g}", r.passed, r.subdivisions, f"{r.est_error:.17g}",
                    r.message])
    return buf.getvalue()
