"""Parametrization of strictly stable processes by index and positivity.

A strictly alpha-stable process ``L`` is described here by ``(alpha, rho)``
with ``rho = P[L_1 >= 0]``. Its characteristic exponent is

    Psi(lam) = -(i lam)^alpha exp(-i pi alpha rho sgn(lam)),

which for ``alpha`` not in {1, 2} is the classical
``-kappa |lam|^alpha (1 - i beta tan(pi alpha / 2) sgn(lam))`` with
``kappa = cos(pi alpha (rho - 1/2))``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import DomainError, ParameterDomainError

__all__ = [
    "ProcessClass",
    "StableParams",
    "make_params",
    "rho_from_beta",
    "beta_from_rho",
    "psi_kernel",
    "phi_kernel",
    "levy_density",
    "p1_at_zero",
]

SNAP_TOL = 1e-12


class ProcessClass(enum.Enum):
    TWO_SIDED = "two-sided"
    SPECTRALLY_POSITIVE = "spectrally-positive"
    SPECTRALLY_NEGATIVE = "spectrally-negative"
    BROWNIAN = "brownian"
    CAUCHY_DRIFT = "cauchy-drift"

    @property
    def has_two_sided_jumps(self) -> bool:
        return self in (ProcessClass.TWO_SIDED, ProcessClass.CAUCHY_DRIFT)

    @property
    def one_sided(self) -> bool:
        return self in (ProcessClass.SPECTRALLY_POSITIVE, ProcessClass.SPECTRALLY_NEGATIVE)


@dataclass(frozen=True)
class StableParams:
    """Immutable ``(alpha, rho)`` pair with every derived constant precomputed.

    Build instances through :func:`make_params`, which validates and snaps
    the parameters; the constructor itself trusts its inputs.
    """

    alpha: float
    rho: float
    rho_hat: float = field(init=False)
    beta: float = field(init=False)
    kappa: float = field(init=False)
    c_rho: float = field(init=False)
    c_rho_hat: float = field(init=False)
    process_class: ProcessClass = field(init=False)

    def __post_init__(self):
        a, r = self.alpha, self.rho
        rh = 1.0 - r
        set_ = object.__setattr__
        set_(self, "rho_hat", rh)
        set_(self, "beta", beta_from_rho(a, r) if a not in (1.0, 2.0) else 0.0)
        set_(self, "kappa", math.cos(math.pi * a * (r - 0.5)))
        set_(self, "c_rho", _sin_pi(a * r) / math.pi)
        set_(self, "c_rho_hat", _sin_pi(a * rh) / math.pi)
        set_(self, "process_class", _classify(a, r))

    # exponents that appear in nearly every formula
    @property
    def ar(self) -> float:
        return self.alpha * self.rho

    @property
    def ar_hat(self) -> float:
        return self.alpha * self.rho_hat

    def dual(self) -> "StableParams":
        """Parameters of ``-L`` (rho and rho_hat exchanged)."""
        return StableParams(self.alpha, self.rho_hat)

    @property
    def phi_integrable(self) -> bool:
        return self.ar < 1.0 and self.ar_hat < 1.0

    def describe(self) -> dict:
        return {
            "alpha": self.alpha,
            "rho": self.rho,
            "rho_hat": self.rho_hat,
            "beta": self.beta,
            "kappa": self.kappa,
            "c_rho": self.c_rho,
            "c_rho_hat": self.c_rho_hat,
            "process_class": self.process_class.value,
        }


def _sin_pi(u: float) -> float:
    # exact zeros at integers; sin(pi * 1.0) would give 1.2e-16
    if u == round(u):
        return 0.0
    return math.sin(math.pi * u)


def _classify(a: float, r: float) -> ProcessClass:
    if a == 2.0:
        return ProcessClass.BROWNIAN
    if a == 1.0:
        return ProcessClass.CAUCHY_DRIFT
    if a < 1.0:
        if r == 1.0:
            return ProcessClass.SPECTRALLY_POSITIVE
        if r == 0.0:
            return ProcessClass.SPECTRALLY_NEGATIVE
    else:
        if r == 1.0 - 1.0 / a:
            return ProcessClass.SPECTRALLY_POSITIVE
        if r == 1.0 / a:
            return ProcessClass.SPECTRALLY_NEGATIVE
    return ProcessClass.TWO_SIDED


def _snap(value: float, target: float) -> float:
    return target if abs(value - target) <= SNAP_TOL else value


def rho_range(alpha: float) -> tuple[float, float]:
    """Closed admissible range of rho (open at both ends when alpha = 1)."""
    if alpha == 2.0:
        return 0.5, 0.5
    if alpha <= 1.0:
        return 0.0, 1.0
    return 1.0 - 1.0 / alpha, 1.0 / alpha


def make_params(alpha: float, rho: float) -> StableParams:
    """Validate ``(alpha, rho)`` and return the cached parameter record.

    Values within ``1e-12`` of an admissible endpoint are snapped to it, so
    ``make_params(1.5, 2/3 + 1e-14)`` is classified spectrally negative.

    Raises
    ------
    ParameterDomainError
        If alpha is outside (0, 2] or rho is outside its range for alpha.
    """
    alpha = float(alpha)
    rho = float(rho)
    if not (math.isfinite(alpha) and math.isfinite(rho)):
        raise ParameterDomainError(f"non-finite parameters alpha={alpha!r}, rho={rho!r}")
    alpha = _snap(alpha, 2.0)
    if not 0.0 < alpha <= 2.0:
        raise ParameterDomainError(f"alpha={alpha!r} violates 0 < alpha <= 2")
    if alpha == 2.0:
        rho = _snap(rho, 0.5)
        if rho != 0.5:
            raise ParameterDomainError(f"alpha=2 requires rho=1/2, got rho={rho!r}")
        return StableParams(2.0, 0.5)
    if alpha == 1.0:
        if not 0.0 < rho < 1.0:
            raise ParameterDomainError(f"alpha=1 requires 0 < rho < 1, got rho={rho!r}")
        return StableParams(1.0, rho)
    lo, hi = rho_range(alpha)
    rho = _snap(_snap(rho, lo), hi)
    if rho < lo:
        raise ParameterDomainError(f"rho={rho!r} violates rho >= {lo!r} for alpha={alpha!r}")
    if rho > hi:
        raise ParameterDomainError(f"rho={rho!r} violates rho <= {hi!r} for alpha={alpha!r}")
    return StableParams(alpha, rho)


def beta_from_rho(alpha: float, rho: float) -> float:
    """Asymmetry parameter from Zolotarev's relation; alpha not in {1, 2}."""
    if alpha in (1.0, 2.0):
        raise ParameterDomainError(f"beta is not defined through Zolotarev's formula at alpha={alpha}")
    beta = math.tan(math.pi * alpha * (rho - 0.5)) / math.tan(math.pi * alpha / 2.0)
    return max(-1.0, min(1.0, beta))


def rho_from_beta(alpha: float, beta: float) -> float:
    """Positivity parameter ``1/2 + arctan(beta tan(pi alpha/2)) / (pi alpha)``."""
    alpha = float(alpha)
    beta = float(beta)
    if alpha in (1.0, 2.0):
        raise ParameterDomainError(f"rho_from_beta is unsupported at alpha={alpha} (beta degenerate)")
    if not 0.0 < alpha < 2.0:
        raise ParameterDomainError(f"alpha={alpha!r} violates 0 < alpha < 2")
    if not -1.0 <= beta <= 1.0:
        raise ParameterDomainError(f"beta={beta!r} violates -1 <= beta <= 1")
    return 0.5 + math.atan(beta * math.tan(math.pi * alpha / 2.0)) / (math.pi * alpha)


def psi_kernel(p: StableParams, t: float) -> float:
    """``(t-1)^(alpha rho_hat - 1) (t+1)^(alpha rho - 1)`` for ``t > 1``."""
    if not t > 1.0:
        raise DomainError(f"psi kernel requires t > 1, got t={t!r}")
    return (t - 1.0) ** (p.ar_hat - 1.0) * (t + 1.0) ** (p.ar - 1.0)


def phi_kernel(p: StableParams, t: float, hatted: bool = False) -> float:
    """``(1-t)^(-alpha rho) (1+t)^(-alpha rho_hat)``, or its dual when ``hatted``."""
    if not -1.0 < t < 1.0:
        raise DomainError(f"phi kernel requires -1 < t < 1, got t={t!r}")
    a, b = (p.ar_hat, p.ar) if hatted else (p.ar, p.ar_hat)
    return (1.0 - t) ** (-a) * (1.0 + t) ** (-b)


def levy_density(p: StableParams, y: float) -> float:
    """Density of the Levy measure, zero on the side without jumps."""
    if y == 0.0:
        raise DomainError("Levy density is undefined at y=0")
    if p.process_class is ProcessClass.BROWNIAN:
        return 0.0
    c = p.c_rho if y > 0 else p.c_rho_hat
    if c == 0.0:
        return 0.0
    return math.gamma(p.alpha + 1.0) * abs(y) ** (-p.alpha - 1.0) * c


def p1_at_zero(p: StableParams) -> float:
    """Transition density of ``L_1`` at the origin, ``Gamma(1 + 1/alpha) sin(pi rho) / pi``."""
    return math.gamma(1.0 + 1.0 / p.alpha) * math.sin(math.pi * p.rho) / math.pi
