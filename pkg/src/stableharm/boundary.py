"""Exit and entrance laws of stable processes for (-1, 1), its complement and a half-line.

``H_x`` is the law of ``L_T`` with ``T`` the first exit time from (-1, 1),
``H*_x`` the law of ``L_{T*}`` with ``T*`` the first entrance time into
(-1, 1), and the half-line law is that of ``L_tau`` with ``tau`` the first
passage time above 1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import special

from .errors import AccuracyError, DomainError, NotApplicableError
from .params import ProcessClass, StableParams, p1_at_zero
from .specfun import (DEFAULT_TOL, hyp2f1, inc_beta, inc_psi_value, quad_semi_infinite,
                      quad_singular)

__all__ = [
    "Region",
    "Segment",
    "ExitLaw",
    "KappaStar",
    "h_density",
    "hstar_density",
    "hstar_bracket_direct",
    "kappa_star",
    "kappa_star_hypergeometric",
    "tstar_tail_constant",
    "pstar_infinity",
    "semiinf_exit_density",
    "exit_law",
]


class Region(enum.Enum):
    INTERVAL = "interval"        # exit (-1, 1) from inside
    COMPLEMENT = "complement"    # enter (-1, 1) from outside [-1, 1]
    HALFLINE = "halfline"        # pass above 1 from x < 1

    @classmethod
    def parse(cls, value) -> "Region":
        return value if isinstance(value, cls) else cls(str(value).lower())

    def contains_start(self, x: float) -> bool:
        if self is Region.INTERVAL:
            return -1.0 < x < 1.0
        if self is Region.COMPLEMENT:
            return abs(x) > 1.0
        return x < 1.0

    def exited(self, y: float) -> bool:
        """True when ``y`` lies in the target set of the region."""
        if self is Region.INTERVAL:
            return abs(y) > 1.0
        if self is Region.COMPLEMENT:
            return abs(y) < 1.0
        return y > 1.0


@dataclass(frozen=True)
class Segment:
    """Support piece of an absolutely continuous part.

    ``lo_exp``/``hi_exp`` give the algebraic behaviour at finite endpoints;
    ``decay`` the tail ``|y|^(-1-decay)`` at an infinite one.
    """

    lo: float
    hi: float
    lo_exp: float = 0.0
    hi_exp: float = 0.0
    decay: float = 1.0

    def integrate(self, f: Callable[[float], float], tol: float = DEFAULT_TOL) -> float:
        return _integrate_piece(f, self.lo, self.hi, self.lo_exp, self.hi_exp, self.decay, tol)


def _integrate_piece(f, lo, hi, lo_exp, hi_exp, decay, tol):
    if math.isinf(lo) and math.isinf(hi):
        raise DomainError("doubly infinite segments are not supported")
    if math.isinf(hi):
        return quad_semi_infinite(f, lo, 1, left_exp=lo_exp, decay=decay, tol=tol)
    if math.isinf(lo):
        return quad_semi_infinite(f, hi, -1, left_exp=hi_exp, decay=decay, tol=tol)
    return quad_singular(f, lo, hi, lo_exp, hi_exp, tol=tol)


@dataclass(frozen=True)
class ExitLaw:
    """First exit/entrance distribution: density part, Dirac atoms and defect.

    ``defect`` is the probability that the target set is never reached.
    ``defect_source`` records whether it is a closed form, a consequence of
    the process class, or ``1 - mass`` computed numerically.
    """

    region: Region
    start: float
    density: Optional[Callable[[float], float]]
    segments: tuple[Segment, ...] = ()
    atoms: tuple[tuple[float, float], ...] = ()
    defect: float = 0.0
    defect_source: str = "class"

    def density_mass(self, tol: float = DEFAULT_TOL) -> float:
        if self.density is None:
            return 0.0
        return sum(seg.integrate(self.density, tol) for seg in self.segments)

    def total_mass(self, tol: float = DEFAULT_TOL) -> float:
        return self.density_mass(tol) + sum(w for _, w in self.atoms) + self.defect

    def cdf(self, ys: Sequence[float] | float, tol: float = 1e-9) -> np.ndarray | float:
        """``P[exit position <= y, exit happens]`` at each ``y``.

        The defect mass is not included, so the limit at +inf is
        ``1 - defect``.
        """
        scalar = np.isscalar(ys)
        arr = np.atleast_1d(np.asarray(ys, dtype=float))
        order = np.argsort(arr)
        out = np.empty_like(arr)
        atoms = sorted(self.atoms)
        seg_totals = [seg.integrate(self.density, tol) if self.density else 0.0
                      for seg in self.segments]
        # running integrals restart in each segment from its lower end
        state = {}
        for idx in order:
            y = arr[idx]
            total = sum(w for loc, w in atoms if loc <= y)
            for k, seg in enumerate(self.segments):
                if y >= seg.hi:
                    total += seg_totals[k]
                elif y > seg.lo:
                    prev_y, prev_val = state.get(k, (seg.lo, 0.0))
                    if prev_y == seg.lo:
                        piece = _integrate_piece(self.density, seg.lo, y, seg.lo_exp, 0.0,
                                                 seg.decay, tol)
                    else:
                        piece = _safe_quad(self.density, prev_y, y, tol)
                    val = prev_val + piece
                    state[k] = (y, val)
                    total += val
            out[idx] = total
        return float(out[0]) if scalar else out


def _safe_quad(f, a, b, tol):
    if b <= a:
        return 0.0
    try:
        return quad_singular(f, a, b, tol=tol)
    except AccuracyError as exc:
        if exc.error < 1e3 * tol:
            return exc.estimate
        raise


@dataclass(frozen=True)
class KappaStar:
    x: float
    value: float


def _check_two_sided_or_onesided(p: StableParams, what: str):
    if p.process_class is ProcessClass.BROWNIAN:
        raise NotApplicableError(f"{what} has no density for Brownian motion (atoms only)")


# ---------------------------------------------------------------------------
# Harmonic measure of (-1, 1)^c
# ---------------------------------------------------------------------------

def _h_right(p: StableParams, x: float, y: float) -> float:
    if p.c_rho == 0.0:
        return 0.0
    return (p.c_rho * (1.0 + x) ** p.ar_hat * (1.0 - x) ** p.ar
            * (1.0 + y) ** (-p.ar_hat) * (y - 1.0) ** (-p.ar) / (y - x))


def h_density(p: StableParams, x: float, y: float) -> float:
    """Density of ``H_x`` at ``y``, ``x`` in (-1, 1), ``|y| > 1``.

    For spectrally one-sided processes this is the density of the
    absolutely continuous part; the creeping atom is in :func:`exit_law`.
    """
    _check_two_sided_or_onesided(p, "H_x")
    if not -1.0 < x < 1.0:
        raise DomainError(f"h requires -1 < x < 1, got x={x}")
    if not abs(y) > 1.0:
        raise DomainError(f"h requires |y| > 1, got y={y}")
    if y > 1.0:
        return _h_right(p, x, y)
    return _h_right(p.dual(), -x, -y)


# ---------------------------------------------------------------------------
# Harmonic measure of (-1, 1) seen from outside
# ---------------------------------------------------------------------------

def _hstar_bracket(p: StableParams, x: float, y: float) -> float:
    """``(x+1)^(a r)(x-1)^(a r^)/(x-y) - (alpha-1)_+ int_1^x psi`` without cancellation.

    For alpha > 1 the bracket equals
    ``(x+1)^(a r - 1)(x-1)^(a r^)(1+y)/(x-y) + (1 - a r) 2^(alpha-1) B_w(a r^, 2-alpha)``,
    ``w = (x-1)/(x+1)``: the value at ``y = -1`` has x-derivative
    ``2(1 - a r)(x+1)^(a r - 2)(x-1)^(a r^ - 1)`` and vanishes at ``x = 1``.
    Both terms are non-negative.
    """
    if p.alpha <= 1.0:
        return (x + 1.0) ** p.ar * (x - 1.0) ** p.ar_hat / (x - y)
    first = (x + 1.0) ** (p.ar - 1.0) * (x - 1.0) ** p.ar_hat * (1.0 + y) / (x - y)
    if p.ar == 1.0:
        return first
    w = (x - 1.0) / (x + 1.0)
    b, _ = inc_beta(p.ar_hat, 2.0 - p.alpha, w, 2.0 / (x + 1.0))
    return first + (1.0 - p.ar) * 2.0 ** (p.alpha - 1.0) * b


def hstar_bracket_direct(p: StableParams, x: float, y: float) -> float:
    """The bracket of the entrance density exactly as written, by subtraction."""
    k1 = (x + 1.0) ** p.ar * (x - 1.0) ** p.ar_hat / (x - y)
    if p.alpha <= 1.0:
        return k1
    return k1 - (p.alpha - 1.0) * inc_psi_value(p, x)


def _hstar_right(p: StableParams, x: float, y: float) -> float:
    if p.c_rho_hat == 0.0:
        return 0.0
    return (p.c_rho_hat * (1.0 + y) ** (-p.ar) * (1.0 - y) ** (-p.ar_hat)
            * _hstar_bracket(p, x, y))


def hstar_density(p: StableParams, x: float, y: float) -> float:
    """Density of ``H*_x`` at ``y`` in (-1, 1) for ``|x| > 1``.

    Valid for processes with jumps of both signs; one-sided laws, which
    carry atoms, come from :func:`exit_law`.
    """
    if p.process_class is ProcessClass.BROWNIAN:
        raise NotApplicableError("H*_x has no density for Brownian motion")
    if p.process_class.one_sided and p.alpha > 1.0:
        raise NotApplicableError("H*_x of a spectrally one-sided process with alpha > 1 "
                                 "has an atom at the boundary; use exit_law")
    if not abs(x) > 1.0:
        raise DomainError(f"h* requires |x| > 1, got x={x}")
    if not -1.0 < y < 1.0:
        raise DomainError(f"h* requires -1 < y < 1, got y={y}")
    if x > 1.0:
        return _hstar_right(p, x, y)
    return _hstar_right(p.dual(), -x, -y)


def kappa_star(p: StableParams, x: float) -> KappaStar:
    """Correction term ``c_{alpha,rho_hat} (alpha - 1) int_1^x psi`` of the entrance equation."""
    if p.alpha <= 1.0:
        raise NotApplicableError(f"kappa* is defined for alpha > 1 only, got alpha={p.alpha}")
    if not x >= 1.0:
        raise DomainError(f"kappa* requires x >= 1, got x={x}")
    if x == 1.0 or p.c_rho_hat == 0.0:
        return KappaStar(x, 0.0)
    return KappaStar(x, p.c_rho_hat * (p.alpha - 1.0) * inc_psi_value(p, x))


def kappa_star_hypergeometric(p: StableParams, x: float) -> float:
    """Same quantity through ``2F1(1 - a r, a r^; 1 + a r^; (1-x)/2)``."""
    if p.alpha <= 1.0:
        raise NotApplicableError(f"kappa* is defined for alpha > 1 only, got alpha={p.alpha}")
    if not x >= 1.0:
        raise DomainError(f"kappa* requires x >= 1, got x={x}")
    if x == 1.0:
        return 0.0
    a, ah = p.ar, p.ar_hat
    f = hyp2f1(1.0 - a, ah, 1.0 + ah, (1.0 - x) / 2.0, rtol=1e-12)
    return (p.c_rho_hat * (p.alpha - 1.0) * 2.0 ** (p.alpha - 1.0) / ah
            * ((x - 1.0) / 2.0) ** ah * f)


def tstar_tail_constant(p: StableParams, x: float) -> float:
    """Prefactor ``C`` in ``P_x[T* > t] ~ C t^(1/alpha - 1)`` as ``t -> inf`` (alpha > 1)."""
    k = kappa_star(p, x).value
    return (-special.gamma(1.0 - p.alpha) * math.sin(math.pi / p.alpha)
            / (math.pi * p1_at_zero(p)) * k)


def pstar_infinity(p: StableParams, x: float) -> float:
    """``P_x[T* = inf]``, the probability of never entering (-1, 1) from ``|x| > 1``.

    Zero for alpha >= 1 (recurrence, or point hitting when alpha > 1).
    """
    if not abs(x) > 1.0:
        raise DomainError(f"P_x[T* = inf] requires |x| > 1, got x={x}")
    if p.alpha >= 1.0:
        return 0.0
    if x < -1.0:
        return pstar_infinity(p.dual(), -x)
    if p.ar_hat == 0.0:
        return 1.0  # subordinator moving away from the interval
    k = (special.gamma(1.0 - p.ar) * 2.0 ** (1.0 - p.alpha)
         / (special.gamma(p.ar_hat) * special.gamma(1.0 - p.alpha)))
    return min(1.0, k * inc_psi_value(p, x))


# ---------------------------------------------------------------------------
# Half-line
# ---------------------------------------------------------------------------

def semiinf_exit_density(p: StableParams, x: float, y: float) -> float:
    """Density of the position of the first passage above 1 from ``x < 1``."""
    if p.process_class is ProcessClass.BROWNIAN or (
            p.process_class is ProcessClass.SPECTRALLY_NEGATIVE and p.alpha > 1.0):
        raise NotApplicableError("first passage above 1 is by creeping: the law is a Dirac mass at 1")
    if not x < 1.0:
        raise DomainError(f"half-line exit requires x < 1, got x={x}")
    if not y > 1.0:
        raise DomainError(f"half-line exit density requires y > 1, got y={y}")
    if p.c_rho == 0.0:
        return 0.0
    return p.c_rho * (1.0 - x) ** p.ar / ((y - 1.0) ** p.ar * (y - x))


# ---------------------------------------------------------------------------
# Assembled laws
# ---------------------------------------------------------------------------

def exit_law(p: StableParams, region, x: float, tol: float = 1e-10) -> ExitLaw:
    """Complete exit/entrance law from ``x`` for every process class."""
    region = Region.parse(region)
    x = float(x)
    if not region.contains_start(x) or abs(x) == 1.0:
        raise DomainError(f"start x={x} is not strictly inside the source set of {region.value}")
    cls = p.process_class
    if region is Region.INTERVAL:
        return _interval_law(p, x, cls)
    if region is Region.COMPLEMENT:
        return _complement_law(p, x, cls, tol)
    return _halfline_law(p, x, cls)


def _interval_law(p, x, cls):
    if cls is ProcessClass.BROWNIAN:
        return ExitLaw(Region.INTERVAL, x, None, (), ((-1.0, (1.0 - x) / 2.0), (1.0, (1.0 + x) / 2.0)))
    segs = []
    if p.c_rho_hat > 0.0:
        segs.append(Segment(-math.inf, -1.0, 0.0, -p.ar_hat, p.alpha))
    if p.c_rho > 0.0:
        segs.append(Segment(1.0, math.inf, -p.ar, 0.0, p.alpha))
    atoms = ()
    if cls is ProcessClass.SPECTRALLY_NEGATIVE and p.alpha > 1.0:
        atoms = ((1.0, ((1.0 + x) / 2.0) ** (p.alpha - 1.0)),)
    elif cls is ProcessClass.SPECTRALLY_POSITIVE and p.alpha > 1.0:
        atoms = ((-1.0, ((1.0 - x) / 2.0) ** (p.alpha - 1.0)),)
    return ExitLaw(Region.INTERVAL, x, lambda y: h_density(p, x, y), tuple(segs), atoms)


def _complement_law(p, x, cls, tol):
    if cls is ProcessClass.BROWNIAN:
        return ExitLaw(Region.COMPLEMENT, x, None, (), ((math.copysign(1.0, x), 1.0),))
    if cls.one_sided and p.alpha > 1.0:
        # spectrally negative from the right jumps below 1 and may overshoot -1
        # spectrally negative from the left creeps up to -1; mirror for positive
        neg = cls is ProcessClass.SPECTRALLY_NEGATIVE
        if (x < -1.0) == neg:
            return ExitLaw(Region.COMPLEMENT, x, None, (), ((math.copysign(1.0, x), 1.0),))
        q = p if neg else p.dual()
        xs = x if neg else -x
        c = q.c_rho_hat
        a = p.alpha

        def dens(y, q=q, xs=xs, neg=neg):
            ys = y if neg else -y
            return c * (xs - 1.0) ** (a - 1.0) * (1.0 - ys) ** (1.0 - a) / (xs - ys)

        w = (xs - 1.0) / (xs + 1.0)
        weight, _ = inc_beta(a - 1.0, 2.0 - a, w, 2.0 / (xs + 1.0))
        seg = Segment(-1.0, 1.0, 0.0, 1.0 - a) if neg else Segment(-1.0, 1.0, 1.0 - a, 0.0)
        return ExitLaw(Region.COMPLEMENT, x, dens, (seg,),
                       ((-1.0 if neg else 1.0, c * weight),), 0.0, "class")
    seg = Segment(-1.0, 1.0, -p.ar, -p.ar_hat)
    dens = lambda y: hstar_density(p, x, y)  # noqa: E731
    if p.alpha >= 1.0:
        return ExitLaw(Region.COMPLEMENT, x, dens, (seg,), (), 0.0, "class")
    if cls.one_sided:
        moving_away = (cls is ProcessClass.SPECTRALLY_POSITIVE) == (x > 1.0)
        if moving_away:
            return ExitLaw(Region.COMPLEMENT, x, None, (), (), 1.0, "class")
        law = ExitLaw(Region.COMPLEMENT, x, dens, (seg,))
        defect = max(0.0, 1.0 - law.density_mass(tol))
        return ExitLaw(Region.COMPLEMENT, x, dens, (seg,), (), defect, "derived-numerical")
    return ExitLaw(Region.COMPLEMENT, x, dens, (seg,), (), pstar_infinity(p, x), "closed-form")


def _halfline_law(p, x, cls):
    if cls is ProcessClass.BROWNIAN or (cls is ProcessClass.SPECTRALLY_NEGATIVE and p.alpha > 1.0):
        return ExitLaw(Region.HALFLINE, x, None, (), ((1.0, 1.0),))
    if p.c_rho == 0.0:
        return ExitLaw(Region.HALFLINE, x, None, (), (), 1.0, "class")
    seg = Segment(1.0, math.inf, -p.ar, 0.0, p.ar)
    return ExitLaw(Region.HALFLINE, x, lambda y: semiinf_exit_density(p, x, y), (seg,))
