"""Special functions: real Gauss 2F1, incomplete psi-integrals, singular quadrature.

Every closed form in the library reduces to one incomplete beta integral

    B_w(p, q) = int_0^w s^(p-1) (1-s)^(q-1) ds,   p > 0, q = 1 - alpha,

written as ``w^p / p * 2F1(p, 1-q; p+1; w)``. For ``w`` close to one the
hypergeometric function is continued through the Gauss connection formula,
whose singular part ``(1-w)^q`` carries the divergence of the psi-integral
when ``alpha >= 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, special

from .errors import AccuracyError, DivergenceError, DomainError
from .params import ProcessClass, StableParams

__all__ = [
    "DEFAULT_TOL",
    "Hyp2F1Request",
    "IncPsiResult",
    "hyp2f1",
    "inc_beta",
    "inc_psi",
    "inc_psi_value",
    "inc_psi_halfline",
    "phi_total_mass",
    "quad_singular",
    "quad_semi_infinite",
    "QuadInfo",
]

DEFAULT_TOL = 1e-10
DEGENERATE_TOL = 1e-4
_INTERP_STEP = 1e-3  # node spacing for the near-degenerate interpolation
LARGE_Z_EPS = 1e-8  # 1 - w below this is reported as the large-z branch
_EPS = np.finfo(float).eps
_MAX_TERMS = 20000


@dataclass(frozen=True)
class Hyp2F1Request:
    a: float
    b: float
    c: float
    z: float
    precision_target: float = DEFAULT_TOL

    def __post_init__(self):
        if _is_nonpos_int(self.c):
            raise DomainError(f"2F1 undefined for c={self.c} (non-positive integer)")
        if not self.z <= 1.0:
            raise DomainError(f"real-axis 2F1 requires z <= 1, got z={self.z}")


@dataclass(frozen=True)
class IncPsiResult:
    value: float
    method: str
    est_error: float


def _is_nonpos_int(x: float) -> bool:
    return x <= 0 and x == round(x)


# ---------------------------------------------------------------------------
# Gauss hypergeometric function on the real axis
# ---------------------------------------------------------------------------

def _series(a, b, c, z):
    """Direct power series; returns (value, error bound)."""
    term = 1.0
    total = 1.0
    abs_total = 1.0
    for n in range(_MAX_TERMS):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z
        total += term
        abs_total += abs(term)
        if term == 0.0:
            break
        if abs(term) <= _EPS * abs(total) * 0.5 and n > 2:
            break
    else:
        raise AccuracyError("2F1 power series did not converge", estimate=total,
                            error=abs(term), a=a, b=b, c=c, z=z)
    return total, 4 * _EPS * abs_total


def _rgamma(x):
    return float(special.rgamma(x))


def _connection(a, b, c, omz):
    """2F1(a, b; c; 1 - omz) by the Gauss connection formula, omz in (0, 1/2]."""
    m = c - a - b
    mr = round(m)
    d = m - mr
    if d == 0.0:
        return _connection_integer(a, b, c, omz, int(mr))
    if abs(d) < DEGENERATE_TOL:
        return _connection_near_integer(a, b, c, omz, int(mr), d)
    return _connection_regular(a, b, c, omz)


def _connection_regular(a, b, c, omz):
    m = c - a - b
    f1, e1 = _series(a, b, 1.0 - m, omz)
    f2, e2 = _series(c - a, c - b, 1.0 + m, omz)
    gc = special.gamma(c)
    A = gc * special.gamma(m) * _rgamma(c - a) * _rgamma(c - b)
    B = gc * special.gamma(-m) * _rgamma(a) * _rgamma(b)
    powm = omz ** m
    t1 = A * f1
    t2 = B * powm * f2
    err = abs(A) * e1 + abs(B) * powm * e2 + 4 * _EPS * (abs(t1) + abs(t2))
    return t1 + t2, err


def _lagrange_weights(nodes, t):
    w = []
    for i, ni in enumerate(nodes):
        v = 1.0
        for j, nj in enumerate(nodes):
            if j != i:
                v *= (t - nj) / (ni - nj)
        w.append(v)
    return w


def _connection_near_integer(a, b, c, omz, m, d):
    """Connection formula for ``c - a - b = m + d`` with small non-zero ``d``.

    The regular formula cancels catastrophically and the logarithmic limit is
    only first-order accurate, so interpolate in ``c`` through the limit at
    ``d = 0`` and regular evaluations at ``+-h, +-2h``.
    """
    h = _INTERP_STEP
    c0 = c - d
    ks = (-2, -1, 0, 1, 2)
    vals, errs = [], []
    for k in ks:
        if k == 0:
            v, e = _connection_integer(a, b, c0, omz, m)
        else:
            v, e = _connection_regular(a, b, c0 + k * h, omz)
        vals.append(v)
        errs.append(e)
    w5 = _lagrange_weights([k * h for k in ks], d)
    w4 = _lagrange_weights([k * h for k in ks[:4]], d)
    val = sum(wi * vi for wi, vi in zip(w5, vals))
    low = sum(wi * vi for wi, vi in zip(w4, vals[:4]))
    err = sum(abs(wi) * ei for wi, ei in zip(w5, errs)) + abs(val - low)
    return val, err


def _connection_integer(a, b, c, omz, m):
    """Logarithmic limit of the connection formula when c - a - b = m is an integer."""
    if m < 0:
        # Euler: 2F1(a,b;c;z) = (1-z)^(c-a-b) 2F1(c-a, c-b; c; z)
        val, err = _connection_integer(c - a, c - b, c, omz, -m)
        f = omz ** m
        return f * val, f * err
    c = a + b + m
    log_omz = math.log(omz)
    gc = special.gamma(c)
    finite = 0.0
    if m > 0:
        pref = special.gamma(m) * gc * _rgamma(a + m) * _rgamma(b + m)
        term = 1.0
        for n in range(m):
            finite += term
            term *= (a + n) * (b + n) / ((n + 1.0) * (1.0 - m + n)) * omz if n + 1 < m else 0.0
        finite *= pref
    pref2 = gc * _rgamma(a) * _rgamma(b)
    # sum_n (a+m)_n (b+m)_n / (n! (n+m)!) omz^n [log omz - psi(n+1) - psi(n+m+1) + psi(a+n+m) + psi(b+n+m)]
    coef = 1.0 / math.factorial(m)
    total = 0.0
    abs_total = 0.0
    for n in range(_MAX_TERMS):
        bracket = (log_omz - special.digamma(n + 1.0) - special.digamma(n + m + 1.0)
                   + special.digamma(a + n + m) + special.digamma(b + n + m))
        term = coef * bracket
        total += term
        abs_total += abs(term)
        if n > 2 and abs(term) <= _EPS * abs(total) * 0.5:
            break
        coef *= (a + m + n) * (b + m + n) / ((n + 1.0) * (n + m + 1.0)) * omz
        if coef == 0.0:
            break
    else:
        raise AccuracyError("logarithmic connection series did not converge",
                            estimate=total, a=a, b=b, c=c, omz=omz)
    sign = -1.0 if m % 2 == 0 else 1.0  # -(-1)^m
    log_part = sign * pref2 * omz ** m * total
    value = finite + log_part
    err = 8 * _EPS * (abs(finite) + abs(pref2) * omz ** m * abs_total)
    return value, err


def _hyp2f1(a, b, c, z, omz=None):
    """Core evaluator returning (value, error bound). ``omz`` is 1 - z if known exactly."""
    if _is_nonpos_int(c):
        raise DomainError(f"2F1 undefined for c={c} (non-positive integer)")
    if omz is None:
        omz = 1.0 - z
    if z == 0.0 or a == 0.0 or b == 0.0:
        return 1.0, 0.0
    if omz == 0.0:
        m = c - a - b
        if m <= 0:
            raise DivergenceError(f"2F1({a},{b};{c};1) diverges since c-a-b={m} <= 0")
        v = math.exp(special.gammaln(c) + special.gammaln(m) - special.gammaln(c - a)
                     - special.gammaln(c - b))
        v *= (special.gammasgn(c) * special.gammasgn(m) * special.gammasgn(c - a)
              * special.gammasgn(c - b))
        return v, 8 * _EPS * abs(v)
    if omz < 0.0:
        raise DomainError(f"real-axis 2F1 requires z <= 1, got z={z}")
    if _is_nonpos_int(a) or _is_nonpos_int(b):
        return _series(a, b, c, z)  # terminating polynomial
    if abs(z) <= 0.5:
        return _series(a, b, c, z)
    if z < -0.5:
        # Pfaff: (1-z)^(-a) 2F1(a, c-b; c; z/(z-1))
        w = z / (z - 1.0)
        omw = 1.0 / omz
        f = omz ** (-a)
        # w lies in (1/3, 1), so this does not recurse again
        v, e = _hyp2f1(a, c - b, c, w, omz=omw)
        return f * v, f * e
    return _connection(a, b, c, omz)


def hyp2f1(a, b=None, c=None, z=None, *, rtol: float = DEFAULT_TOL) -> float:
    """Gauss hypergeometric function ``2F1(a, b; c; z)`` for real ``z <= 1``.

    Accepts either four numbers or a :class:`Hyp2F1Request`. ``z = 1`` is
    allowed when ``c - a - b > 0`` (Gauss summation).

    Raises
    ------
    AccuracyError
        If the internal error bound exceeds ``rtol`` relative to the value.
    """
    if isinstance(a, Hyp2F1Request):
        req = a
        a, b, c, z, rtol = req.a, req.b, req.c, req.z, req.precision_target
    value, err = _hyp2f1(float(a), float(b), float(c), float(z))
    if err > rtol * max(abs(value), 1e-300):
        raise AccuracyError(f"2F1({a},{b};{c};{z}) error bound {err:.3g} exceeds tolerance",
                            estimate=value, error=err)
    return value


# ---------------------------------------------------------------------------
# Incomplete beta and the psi-integrals
# ---------------------------------------------------------------------------

def inc_beta(p: float, q: float, w: float, omw: float | None = None) -> tuple[float, float]:
    """``int_0^w s^(p-1)(1-s)^(q-1) ds`` for ``p > 0``, any real ``q``, ``0 <= w < 1``.

    Returns ``(value, error bound)``. Pass ``omw = 1 - w`` when it is known
    more accurately than the subtraction.
    """
    if omw is None:
        omw = 1.0 - w
    if w == 0.0:
        return 0.0, 0.0
    if p <= 0:
        raise DivergenceError(f"incomplete beta diverges at 0 for p={p}")
    pref = w ** p / p
    v, e = _hyp2f1(p, 1.0 - q, p + 1.0, w, omz=omw)
    return pref * v, pref * e


def inc_beta_split(p: float, q: float, w: float, omw: float) -> tuple[float, float]:
    """Split ``B_w(p, q) = B(p, q) + S * omw^q`` for non-integer ``q``; returns ``(B(p,q), S)``."""
    f, _ = _series(1.0, p + q, q + 1.0, omw)
    s = -(w ** p) / q * f
    return special.beta(p, q), s


def _psi_exponents(p: StableParams) -> tuple[float, float]:
    # (p, q) of the incomplete beta behind int_1^z psi
    return p.ar_hat, 1.0 - p.alpha


def inc_psi(p: StableParams, z: float) -> IncPsiResult:
    """``int_1^z (t-1)^(alpha rho_hat - 1) (t+1)^(alpha rho - 1) dt``.

    Uses ``s = (t-1)/(t+1)``, which turns the integral into
    ``2^(alpha-1) B_w(alpha rho_hat, 1 - alpha)`` with ``w = (z-1)/(z+1)``.
    ``z = inf`` is accepted when ``alpha < 1``.
    """
    z = float(z)
    if not z >= 1.0:
        raise DomainError(f"inc_psi requires z >= 1, got z={z}")
    if z == 1.0:
        return IncPsiResult(0.0, "series", 0.0)
    if math.isinf(z):
        return _inc_psi_total(p)
    return _inc_psi_w(p, (z - 1.0) / (z + 1.0), 2.0 / (z + 1.0))


def _inc_psi_total(p: StableParams) -> IncPsiResult:
    if p.alpha >= 1.0:
        raise DivergenceError(f"int_1^inf psi diverges for alpha={p.alpha} >= 1")
    a, q = _psi_exponents(p)
    if a <= 0:
        raise DivergenceError("psi kernel is not integrable at t=1 when alpha*rho_hat = 0")
    v = 2.0 ** (p.alpha - 1.0) * special.beta(a, q)
    return IncPsiResult(v, "large-z-asymptotic", 8 * _EPS * v)


def _inc_psi_w(p: StableParams, w: float, omw: float) -> IncPsiResult:
    """psi-integral from the Moebius coordinates ``w = (z-1)/(z+1)`` and ``omw = 1 - w``."""
    if w == 0.0:
        return IncPsiResult(0.0, "series", 0.0)
    if p.process_class is ProcessClass.BROWNIAN:
        v = 2.0 * w / omw  # z - 1
        return IncPsiResult(v, "closed-form", 2 * _EPS * v)
    a, q = _psi_exponents(p)
    if a <= 0:
        raise DivergenceError("psi kernel is not integrable at t=1 when alpha*rho_hat = 0")
    v, e = inc_beta(a, q, w, omw)
    scale = 2.0 ** (p.alpha - 1.0)
    if w <= 0.5:
        method = "series"
    elif omw < LARGE_Z_EPS:
        method = "large-z-asymptotic"
    else:
        method = "beta-representation"
    return IncPsiResult(scale * v, method, scale * e)


def inc_psi_value(p: StableParams, z: float) -> float:
    return inc_psi(p, z).value


def inc_psi_halfline(p: StableParams, w: float) -> float:
    """``int_0^w t^(alpha rho_hat - 1) (t+1)^(alpha rho - 1) dt`` for ``w >= 0``.

    Substituting ``s = t/(t+1)`` gives ``B_{w/(1+w)}(alpha rho_hat, 1 - alpha)``,
    the same backend as :func:`inc_psi`.
    """
    w = float(w)
    if not w >= 0.0:
        raise DomainError(f"half-line kernel requires w >= 0, got w={w}")
    if w == 0.0:
        return 0.0
    if p.process_class is ProcessClass.BROWNIAN:
        return w
    a, q = _psi_exponents(p)
    if math.isinf(w):
        if p.alpha >= 1.0:
            raise DivergenceError(f"half-line psi-integral diverges for alpha={p.alpha} >= 1")
        return special.beta(a, q)
    if a <= 0:
        raise DivergenceError("half-line kernel is not integrable at 0 when alpha*rho_hat = 0")
    v, _ = inc_beta(a, q, w / (1.0 + w), 1.0 / (1.0 + w))
    return v


def phi_total_mass(p: StableParams, hatted: bool = False) -> float:
    """``int_{-1}^1 phi = 2^(1-alpha) B(1 - alpha rho, 1 - alpha rho_hat)``.

    The Beta function is symmetric, so the hatted kernel has the same mass.
    """
    if not p.phi_integrable:
        raise DivergenceError(f"phi is not integrable for alpha*rho={p.ar}, alpha*rho_hat={p.ar_hat}")
    return 2.0 ** (1.0 - p.alpha) * special.beta(1.0 - p.ar, 1.0 - p.ar_hat)


# ---------------------------------------------------------------------------
# Quadrature with algebraic endpoint behaviour
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadInfo:
    value: float
    est_error: float
    subdivisions: int
    neval: int


def quad_singular(f: Callable[[float], float], a: float, b: float,
                  left_exp: float = 0.0, right_exp: float = 0.0,
                  tol: float = DEFAULT_TOL, limit: int = 400,
                  full_output: bool = False):
    """Integrate ``f`` over ``(a, b)`` where ``f ~ (x-a)^left_exp`` and ``f ~ (b-x)^right_exp``.

    With a non-zero exponent the weight ``(x-a)^left_exp (b-x)^right_exp`` is
    factored out and integrated exactly by QUADPACK's modified Clenshaw-Curtis
    rule (QAWS); otherwise the adaptive Gauss-Kronrod rule with epsilon
    extrapolation (QAGS) is used. The requested accuracy is
    ``max(tol, tol * |result|)``.

    Raises
    ------
    AccuracyError
        When the tolerance is not met within ``limit`` subdivisions. The
        exception carries the best estimate and its error bound.
    """
    if not (left_exp > -1.0 and right_exp > -1.0):
        raise DomainError(f"endpoint exponents must exceed -1, got {left_exp}, {right_exp}")
    if not a < b:
        raise DomainError(f"quad_singular requires a < b, got a={a}, b={b}")
    if left_exp == 0.0 and right_exp == 0.0:
        res = integrate.quad(f, a, b, epsabs=tol, epsrel=tol, limit=limit, full_output=1)
    else:
        # Clenshaw-Curtis nodes include the endpoints; the weighted-out
        # remainder is smooth there, so evaluate it one ulp inside
        lo_in, hi_in = math.nextafter(a, b), math.nextafter(b, a)

        def g(x):
            x = min(max(x, lo_in), hi_in)
            return f(x) / ((x - a) ** left_exp * (b - x) ** right_exp)
        res = integrate.quad(g, a, b, weight="alg", wvar=(left_exp, right_exp),
                             epsabs=tol, epsrel=tol, limit=limit, full_output=1)
    value, err, info = res[0], res[1], res[2]
    last = int(info.get("last", 0))
    neval = int(info.get("neval", 0))
    if not math.isfinite(value) or err > max(tol, tol * abs(value)):
        raise AccuracyError(
            f"quadrature on ({a}, {b}) reached error {err:.3g} > tol {tol:.3g}",
            estimate=value, error=err, subdivisions=last, neval=neval)
    if full_output:
        return value, QuadInfo(value, err, last, neval)
    return value


def quad_semi_infinite(f: Callable[[float], float], a: float, direction: int = 1,
                       left_exp: float = 0.0, decay: float = 1.0,
                       tol: float = DEFAULT_TOL, full_output: bool = False):
    """Integrate over ``(a, inf)`` (``direction=1``) or ``(-inf, a)`` (``direction=-1``).

    ``f ~ |y-a|^left_exp`` near ``a`` and ``f ~ |y|^(-1-decay)`` at infinity.
    The unit piece next to ``a`` is integrated in the original variable so
    that ``y - a`` stays exact; beyond it ``y = b +- u/(1-u)`` sends the tail
    to an endpoint behaving like ``(1-u)^(decay-1)``.
    """
    if decay <= 0:
        raise DomainError(f"tail decay exponent must be positive, got {decay}")
    sgn = 1.0 if direction > 0 else -1.0
    b = a + sgn
    if sgn > 0:
        near = quad_singular(f, a, b, left_exp, 0.0, tol=tol, full_output=True)
    else:
        near = quad_singular(f, b, a, 0.0, left_exp, tol=tol, full_output=True)

    def g(u):
        omu = 1.0 - u
        return f(b + sgn * u / omu) / (omu * omu)

    far = quad_singular(g, 0.0, 1.0, 0.0, decay - 1.0, tol=tol, full_output=True)
    value = near[0] + far[0]
    if full_output:
        n, t = near[1], far[1]
        return value, QuadInfo(value, n.est_error + t.est_error,
                               n.subdivisions + t.subdivisions, n.neval + t.neval)
    return value
