"""Point hitting before exit, the harmonic measure of ``{y} U [-1, 1]^c`` and harmonic functions on (-1, 1)."""

from __future__ import annotations

from dataclasses import dataclass

from scipy import special

from .boundary import ExitLaw, Region, exit_law
from .errors import DomainError, NotApplicableError
from .green import psi_block
from .params import ProcessClass, StableParams

__all__ = [
    "hit_prob",
    "hit_prob_halfline",
    "PointAugmentedLaw",
    "point_augmented_law",
    "hit_asymptote_constant",
    "HarmonicFamily",
    "harmonic_eval",
    "martin_kernel",
]


def _require_point_hitting(p: StableParams):
    if p.alpha <= 1.0:
        raise NotApplicableError(f"points are polar for alpha={p.alpha} <= 1: "
                                 "the process does not hit points")


def hit_prob(p: StableParams, x: float, y: float) -> float:
    """``P_x[T_y < T]`` with ``T`` the exit time of (-1, 1), alpha > 1."""
    _require_point_hitting(p)
    x, y = float(x), float(y)
    if not (-1.0 < x < 1.0 and -1.0 < y < 1.0):
        raise DomainError(f"hit_prob requires x, y in (-1, 1), got x={x}, y={y}")
    if x == y:
        return 1.0
    a = p.alpha
    cls = p.process_class
    if cls is ProcessClass.BROWNIAN:
        return (1.0 - x) / (1.0 - y) if x > y else (1.0 + x) / (1.0 + y)
    if cls is ProcessClass.SPECTRALLY_POSITIVE:
        return hit_prob(p.dual(), -x, -y)
    if cls is ProcessClass.SPECTRALLY_NEGATIVE:
        v = ((1.0 + x) / (1.0 + y)) ** (a - 1.0)
        if x > y:
            v -= (2.0 * (x - y) / (1.0 - y * y)) ** (a - 1.0)
        return min(1.0, max(0.0, v))
    if x < y:
        return hit_prob(p.dual(), -x, -y)
    # hatted kernel (t-1)^(a r - 1)(t+1)^(a r^ - 1)
    opx, omy = 1.0 + x, 1.0 - y
    w = (1.0 - x) * (1.0 + y) / (opx * omy)
    eps = 2.0 * (x - y) / (opx * omy)
    v, _ = psi_block(p, x - y, w, eps, opx * omy / 2.0, kernel_p=p.ar)
    v *= (a - 1.0) * (2.0 / ((1.0 - y) * (1.0 + y))) ** (a - 1.0)
    return min(1.0, max(0.0, v))


def hit_prob_halfline(p: StableParams, x: float, y: float) -> float:
    """``P_x[T_y < tau]`` with ``tau`` the first passage time above 1, alpha > 1.

    For ``x > y`` the kernel is ``t^(a r - 1)(1+t)^(a r^ - 1)`` up to
    ``(1-x)/(x-y)``; for ``x < y`` it is ``t^(a r^ - 1)(1+t)^(a r - 1)`` up to
    ``(1-y)/(y-x)``, both from the ratio ``g_tau(x, y)/g_tau(y, y)``.
    """
    _require_point_hitting(p)
    x, y = float(x), float(y)
    if not (x < 1.0 and y < 1.0):
        raise DomainError(f"hit_prob_halfline requires x, y < 1, got x={x}, y={y}")
    if x == y:
        return 1.0
    a = p.alpha
    cls = p.process_class
    if cls is ProcessClass.BROWNIAN:
        return (1.0 - x) / (1.0 - y) if x > y else 1.0
    if cls is ProcessClass.SPECTRALLY_NEGATIVE and x < y:
        return 1.0  # creeps upward
    # s = W/(1+W) and eps = 1/(1+W) for the upper limit W; scale = d/eps
    if x > y:
        kp, scale = p.ar, 1.0 - y
        s = (1.0 - x) / scale
    else:
        kp, scale = p.ar_hat, 1.0 - x
        s = (1.0 - y) / scale
    d = abs(x - y)
    v, _ = psi_block(p, d, s, d / scale, scale, kernel_p=kp)
    v *= (a - 1.0) * (1.0 - y) ** (1.0 - a)
    return min(1.0, max(0.0, v))


@dataclass(frozen=True)
class PointAugmentedLaw:
    """``H^{y}_x = rho(x,y) (delta_y - H_y) + H_x``, the harmonic measure of ``{y} U [-1,1]^c``."""

    rho_xy: float
    base_law: ExitLaw
    point_law: ExitLaw
    point: float

    def avoid_density(self, t: float) -> float:
        """Density of ``P_x[L_T in dt, T < T_y]``."""
        hx = self.base_law.density(t) if self.base_law.density else 0.0
        hy = self.point_law.density(t) if self.point_law.density else 0.0
        return hx - self.rho_xy * hy

    def avoid_atoms(self) -> tuple[tuple[float, float], ...]:
        merged: dict[float, float] = {}
        for loc, wgt in self.base_law.atoms:
            merged[loc] = merged.get(loc, 0.0) + wgt
        for loc, wgt in self.point_law.atoms:
            merged[loc] = merged.get(loc, 0.0) - self.rho_xy * wgt
        return tuple(sorted(merged.items()))

    def atoms(self) -> tuple[tuple[float, float], ...]:
        return ((self.point, self.rho_xy),) + self.avoid_atoms()

    def total_mass(self, tol: float = 1e-10) -> float:
        cont = sum(seg.integrate(self.avoid_density, tol) for seg in self.base_law.segments)
        return cont + sum(w for _, w in self.atoms())


def point_augmented_law(p: StableParams, x: float, y: float) -> PointAugmentedLaw:
    _require_point_hitting(p)
    if x == y:
        raise DomainError("point_augmented_law requires x != y")
    rho = hit_prob(p, x, y)
    return PointAugmentedLaw(rho, exit_law(p, Region.INTERVAL, x),
                             exit_law(p, Region.INTERVAL, y), float(y))


def hit_asymptote_constant(p: StableParams, side: str) -> float:
    """``C`` with ``P_x[T_0 > T] ~ C |2x|^(alpha-1)`` as ``x -> 0+`` (above) or ``0-`` (below)."""
    _require_point_hitting(p)
    if side not in ("above", "below"):
        raise DomainError(f"side must be 'above' or 'below', got {side!r}")
    if p.process_class is ProcessClass.BROWNIAN:
        return 0.5
    a = p.alpha
    num, den = (p.ar, p.ar_hat) if side == "above" else (p.ar_hat, p.ar)
    # 1/Gamma vanishes at the poles, giving the one-sided zero constants
    return special.gamma(2.0 - a) * special.gamma(num) * special.rgamma(1.0 - den)


@dataclass(frozen=True)
class HarmonicFamily:
    """Non-negative harmonic functions vanishing off the domain.

    ``kind='interval'``: ``lambda M_{-1} + mu M_1`` on (-1, 1).
    ``kind='halfline'``: ``lambda (1-x)^(a r) + mu (1-x)^(a r - 1)`` on (-inf, 1).
    Subordinators (alpha < 1, one-sided) have the one-parameter family
    spanned by ``mu``.
    """

    lambda_coef: float
    mu_coef: float
    kind: str = "interval"

    def __post_init__(self):
        if self.lambda_coef < 0 or self.mu_coef < 0:
            raise DomainError("harmonic family coefficients must be non-negative")
        if self.kind not in ("interval", "halfline"):
            raise DomainError(f"unknown harmonic family kind {self.kind!r}")


def martin_kernel(p: StableParams, side: int, x: float) -> float:
    """``M_1`` (side=+1) or ``M_{-1}`` (side=-1), the limits of ``g(x,y)/g(0,y)``."""
    x = float(x)
    if not -1.0 < x < 1.0:
        raise DomainError(f"Martin kernel requires x in (-1, 1), got x={x}")
    if side == 1:
        return (1.0 - x) ** (p.ar - 1.0) * (1.0 + x) ** p.ar_hat
    if side == -1:
        return (1.0 + x) ** (p.ar_hat - 1.0) * (1.0 - x) ** p.ar
    raise DomainError(f"side must be +1 or -1, got {side}")


def harmonic_eval(p: StableParams, fam: HarmonicFamily, x: float) -> float:
    x = float(x)
    subordinator = p.process_class.one_sided and p.alpha < 1.0
    if fam.kind == "halfline":
        if not x < 1.0:
            return 0.0
        if subordinator:
            raise NotApplicableError("half-line harmonic family is not available for subordinators")
        return fam.lambda_coef * (1.0 - x) ** p.ar + fam.mu_coef * (1.0 - x) ** (p.ar - 1.0)
    if not -1.0 < x < 1.0:
        return 0.0
    if subordinator:
        if fam.lambda_coef != 0.0:
            raise DomainError("subordinator harmonic functions form a one-parameter family; "
                              "set lambda_coef=0")
        base = (1.0 - x) if p.rho == 1.0 else (1.0 + x)
        return fam.mu_coef * base ** (p.alpha - 1.0)
    return fam.lambda_coef * martin_kernel(p, -1, x) + fam.mu_coef * martin_kernel(p, 1, x)
