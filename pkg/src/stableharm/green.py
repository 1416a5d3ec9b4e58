"""Green functions of stable processes killed on leaving (-1, 1), on entering [-1, 1] and on passing above 1.

All psi-integrals are evaluated from the Moebius coordinates
``w = (z-1)/(z+1)`` and ``eps = 1 - w`` written directly in terms of ``x``
and ``y``, so ``z = |(1 - xy)/(x - y)|`` is never formed. Near the diagonal
(alpha > 1) the incomplete beta function is split into its complete part and
the ``eps^(1-alpha)`` singular part, whose product with ``|y - x|^(alpha-1)``
is finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import special

from .errors import DomainError, NotApplicableError
from .params import ProcessClass, StableParams
from .specfun import (DEFAULT_TOL, DEGENERATE_TOL, inc_beta, inc_beta_split, inc_psi_value,
                      quad_singular)

__all__ = [
    "GreenEvaluation",
    "g_interval",
    "g_complement",
    "g_halfline",
    "expected_exit_time",
    "expected_exit_time_quadrature",
    "moebius_z",
]

# below this eps the split representation replaces the direct incomplete beta
NEAR_DIAGONAL_EPS = 1e-3


@dataclass(frozen=True)
class GreenEvaluation:
    x: float
    y: float
    z: float
    value: float
    branch: str

    def __float__(self) -> float:
        return self.value


def moebius_z(x: float, y: float) -> float:
    """``|(1 - xy)/(x - y)|``; infinite on the diagonal."""
    if x == y:
        return math.inf
    return abs((1.0 - x * y) / (x - y))


def _gamma_norm(p: StableParams) -> float:
    return 1.0 / (special.gamma(p.ar) * special.gamma(p.ar_hat))


def _split_ok(alpha: float) -> bool:
    q = 1.0 - alpha
    return alpha > 1.0 and abs(q - round(q)) > DEGENERATE_TOL


def psi_block(p: StableParams, d: float, w: float, eps: float, scale: float,
              kernel_p: float | None = None) -> tuple[float, str]:
    """``d^(alpha-1) B_w(kp, 1-alpha)`` where ``d/eps = scale``.

    ``kernel_p`` defaults to ``alpha * rho_hat``. Returns the value and the
    branch used.
    """
    kp = p.ar_hat if kernel_p is None else kernel_p
    q = 1.0 - p.alpha
    if eps < NEAR_DIAGONAL_EPS and _split_ok(p.alpha):
        b, s = inc_beta_split(kp, q, w, eps)
        return d ** (p.alpha - 1.0) * b + s * scale ** (p.alpha - 1.0), "near-diagonal"
    v, _ = inc_beta(kp, q, w, eps)
    return d ** (p.alpha - 1.0) * v, "direct"


def _check_interval(x, y):
    if not (-1.0 < x < 1.0 and -1.0 < y < 1.0):
        raise DomainError(f"interval Green function requires x, y in (-1, 1), got x={x}, y={y}")


# ---------------------------------------------------------------------------
# Killed on leaving (-1, 1)
# ---------------------------------------------------------------------------

def _g_up(p: StableParams, x: float, y: float) -> tuple[float, str]:
    # y > x, two-sided formula
    omx, opy = 1.0 - x, 1.0 + y
    w = (1.0 + x) * (1.0 - y) / (omx * opy)
    eps = 2.0 * (y - x) / (omx * opy)
    v, branch = psi_block(p, y - x, w, eps, omx * opy / 2.0)
    return _gamma_norm(p) * v, branch


def _g_diagonal(p: StableParams, y: float) -> float:
    if p.alpha <= 1.0:
        return math.inf
    return ((1.0 - y * y) / 2.0) ** (p.alpha - 1.0) * _gamma_norm(p) / (p.alpha - 1.0)


def _g_interval_onesided(p: StableParams, x: float, y: float) -> tuple[float, str]:
    a = p.alpha
    if a < 1.0:
        # subordinator moving up (rho = 1) or down (rho = 0)
        d = (y - x) if p.rho == 1.0 else (x - y)
        if d < 0:
            return 0.0, "one-sided"
        if d == 0:
            return math.inf, "diagonal"
        return d ** (a - 1.0) / special.gamma(a), "one-sided"
    if p.process_class is ProcessClass.SPECTRALLY_POSITIVE:
        v, _ = _g_interval_onesided(p.dual(), -x, -y)
        return v, "one-sided"
    first = ((1.0 - y) * (1.0 + x) / 2.0) ** (a - 1.0)
    if x > y:
        first -= (x - y) ** (a - 1.0)
    return first / special.gamma(a), "one-sided"


def g_interval(p: StableParams, x: float, y: float) -> GreenEvaluation:
    """Green function of ``L`` killed on leaving (-1, 1).

    On the diagonal the continuous extension is returned for alpha > 1 and
    ``inf`` for alpha <= 1.
    """
    x, y = float(x), float(y)
    _check_interval(x, y)
    z = moebius_z(x, y)
    cls = p.process_class
    if cls is ProcessClass.BROWNIAN:
        return GreenEvaluation(x, y, z, (1.0 + min(x, y)) * (1.0 - max(x, y)) / 2.0, "brownian")
    if cls.one_sided:
        v, branch = _g_interval_onesided(p, x, y)
        return GreenEvaluation(x, y, z, max(v, 0.0), branch)
    if x == y:
        return GreenEvaluation(x, y, z, _g_diagonal(p, y), "diagonal")
    if y > x:
        v, branch = _g_up(p, x, y)
        return GreenEvaluation(x, y, z, v, branch)
    v, branch = _g_up(p.dual(), -x, -y)
    return GreenEvaluation(x, y, z, v, "dual-" + branch)


# ---------------------------------------------------------------------------
# Killed on entering [-1, 1]
# ---------------------------------------------------------------------------

def _gstar_same_side(p: StableParams, x: float, y: float) -> tuple[float, str]:
    # 1 < x < y
    a = p.alpha
    opx, omy = x + 1.0, y - 1.0
    w = (x - 1.0) * (y + 1.0) / (opx * omy)
    eps = 2.0 * (y - x) / (opx * omy)
    v, branch = psi_block(p, y - x, w, eps, opx * omy / 2.0)
    if a > 1.0:
        v -= ((a - 1.0) * 2.0 ** (1.0 - a)
              * inc_psi_value(p, x) * inc_psi_value(p.dual(), y))
    return _gamma_norm(p) * v, branch


def _gstar_opposite(p: StableParams, x: float, y: float) -> float:
    # x > 1, y < -1
    a = p.alpha
    ay = -y
    w = (x - 1.0) * (ay - 1.0) / ((x + 1.0) * (ay + 1.0))
    eps = 2.0 * (x - y) / ((x + 1.0) * (ay + 1.0))
    v, _ = psi_block(p, x - y, w, eps, (x + 1.0) * (ay + 1.0) / 2.0)
    if a > 1.0:
        v -= (a - 1.0) * 2.0 ** (1.0 - a) * inc_psi_value(p, x) * inc_psi_value(p, ay)
    return p.c_rho_hat / p.c_rho * _gamma_norm(p) * v


def _gstar_diagonal(p: StableParams, x: float) -> float:
    a = p.alpha
    if a <= 1.0:
        return math.inf
    v = ((x * x - 1.0) / 2.0) ** (a - 1.0) / (a - 1.0)
    v -= (a - 1.0) * 2.0 ** (1.0 - a) * inc_psi_value(p, x) * inc_psi_value(p.dual(), x)
    return _gamma_norm(p) * v


def _gstar_subordinator(p: StableParams, x: float, y: float) -> tuple[float, str]:
    # alpha < 1, rho = 1 (positive jumps only)
    a = p.alpha
    if y < x:
        return 0.0, "one-sided"
    if y == x:
        return math.inf, "diagonal"
    u = (y - x) ** (a - 1.0) / special.gamma(a)
    if x > 1.0 or y < -1.0:
        return u, "one-sided"
    # x < -1 < 1 < y: the path jumped over the interval
    big_w = -(1.0 + x) * (y - 1.0) / (2.0 * (y - x))
    j, _ = inc_beta(a, 1.0 - a, big_w / (1.0 + big_w), 1.0 / (1.0 + big_w))
    return u * math.sin(math.pi * a) / math.pi * j, "one-sided-jump-over"


def g_complement(p: StableParams, x: float, y: float) -> GreenEvaluation:
    """Green function of ``L`` killed on entering [-1, 1], for ``|x|, |y| > 1``."""
    x, y = float(x), float(y)
    if not (abs(x) > 1.0 and abs(y) > 1.0):
        raise DomainError(f"complement Green function requires |x|, |y| > 1, got x={x}, y={y}")
    z = moebius_z(x, y)
    cls = p.process_class
    if cls is ProcessClass.BROWNIAN:
        if (x > 0) != (y > 0):
            return GreenEvaluation(x, y, z, 0.0, "brownian")
        ax, ay = abs(x), abs(y)
        return GreenEvaluation(x, y, z, min(ax, ay) - 1.0, "brownian")
    if cls.one_sided:
        if p.alpha > 1.0:
            raise NotApplicableError("complement Green function of a spectrally one-sided process "
                                     "with alpha > 1 is not available")
        if cls is ProcessClass.SPECTRALLY_POSITIVE:
            v, branch = _gstar_subordinator(p, x, y)
        else:
            v, branch = _gstar_subordinator(p.dual(), -x, -y)
        return GreenEvaluation(x, y, z, v, branch)
    if x < -1.0:
        ev = g_complement(p.dual(), -x, -y)
        return GreenEvaluation(x, y, z, ev.value, "dual-" + ev.branch)
    if y < -1.0:
        return GreenEvaluation(x, y, z, max(_gstar_opposite(p, x, y), 0.0), "opposite-side")
    if y == x:
        return GreenEvaluation(x, y, z, _gstar_diagonal(p, x), "diagonal")
    if y > x:
        v, branch = _gstar_same_side(p, x, y)
        return GreenEvaluation(x, y, z, max(v, 0.0), "same-side-" + branch)
    v, branch = _gstar_same_side(p.dual(), y, x)
    return GreenEvaluation(x, y, z, max(v, 0.0), "hunt-switch-" + branch)


# ---------------------------------------------------------------------------
# Killed on passing above 1
# ---------------------------------------------------------------------------

def _gtau_up(p: StableParams, x: float, y: float) -> tuple[float, str]:
    # x < y < 1: kernel int_0^W t^(a r^ - 1)(1+t)^(a r - 1), W = (1-y)/(y-x)
    omx = 1.0 - x
    s = (1.0 - y) / omx          # W/(1+W)
    eps = (y - x) / omx          # 1/(1+W)
    v, branch = psi_block(p, y - x, s, eps, omx)
    return _gamma_norm(p) * v, branch


def g_halfline(p: StableParams, x: float, y: float) -> GreenEvaluation:
    """Green function of ``L`` killed at the first passage above 1, ``x, y < 1``."""
    x, y = float(x), float(y)
    if not (x < 1.0 and y < 1.0):
        raise DomainError(f"half-line Green function requires x, y < 1, got x={x}, y={y}")
    z = math.inf if x == y else abs((1.0 - y) / (y - x))
    cls = p.process_class
    a = p.alpha
    if cls is ProcessClass.BROWNIAN:
        return GreenEvaluation(x, y, z, 1.0 - max(x, y), "brownian")
    if cls.one_sided and a < 1.0:
        d = (y - x) if p.rho == 1.0 else (x - y)
        if d < 0:
            return GreenEvaluation(x, y, z, 0.0, "one-sided")
        if d == 0:
            return GreenEvaluation(x, y, z, math.inf, "diagonal")
        return GreenEvaluation(x, y, z, d ** (a - 1.0) / special.gamma(a), "one-sided")
    if x == y:
        if a <= 1.0:
            return GreenEvaluation(x, y, z, math.inf, "diagonal")
        return GreenEvaluation(x, y, z, (1.0 - x) ** (a - 1.0) * _gamma_norm(p) / (a - 1.0),
                               "diagonal")
    if y > x:
        v, branch = _gtau_up(p, x, y)
        return GreenEvaluation(x, y, z, v, branch)
    v, branch = _gtau_up(p.dual(), y, x)
    return GreenEvaluation(x, y, z, v, "dual-" + branch)


# ---------------------------------------------------------------------------
# Expected exit time
# ---------------------------------------------------------------------------

def expected_exit_time(p: StableParams, x: float) -> float:
    """``E_x[T] = (1-x)^(alpha rho) (1+x)^(alpha rho_hat) / Gamma(alpha + 1)``."""
    x = float(x)
    if not -1.0 < x < 1.0:
        raise DomainError(f"expected exit time requires x in (-1, 1), got x={x}")
    if p.process_class is ProcessClass.BROWNIAN:
        return (1.0 - x) * (1.0 + x) / 2.0
    return (1.0 - x) ** p.ar * (1.0 + x) ** p.ar_hat / special.gamma(p.alpha + 1.0)


def expected_exit_time_quadrature(p: StableParams, x: float, tol: float = DEFAULT_TOL) -> float:
    """``int_{-1}^{1} g(x, y) dy`` by quadrature, split at the diagonal."""
    x = float(x)
    if not -1.0 < x < 1.0:
        raise DomainError(f"expected exit time requires x in (-1, 1), got x={x}")
    a = p.alpha
    diag = a - 1.0 if a < 1.0 else 0.0

    def f(y):
        return g_interval(p, x, y).value

    lo_exp = p.ar if p.ar < 1.0 else 0.0
    hi_exp = p.ar_hat if p.ar_hat < 1.0 else 0.0
    if p.process_class is ProcessClass.BROWNIAN:
        lo_exp = hi_exp = 0.0
    left = quad_singular(f, -1.0, x, lo_exp, diag, tol=tol)
    right = quad_singular(f, x, 1.0, diag, hi_exp, tol=tol)
    return left + right
