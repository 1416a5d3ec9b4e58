"""Exact fluctuation identities for real strictly stable Lévy processes.

Exit laws from (-1, 1), first entrance laws into it, Green functions of the
interval, its complement and the half-line, point-hitting probabilities,
plus Monte Carlo cross-checks and quadrature-based identity checks.
"""

__version__ = "0.1.0"

from .boundary import (ExitLaw, KappaStar, Region, exit_law, h_density, hstar_density,
                       kappa_star, pstar_infinity, semiinf_exit_density, tstar_tail_constant)
from .errors import (AccuracyError, ContractError, DivergenceError, DomainError,
                     NotApplicableError, ParameterDomainError, StableHarmError)
from .green import (GreenEvaluation, expected_exit_time, g_complement, g_halfline, g_interval)
from .hitting import (HarmonicFamily, PointAugmentedLaw, harmonic_eval, hit_asymptote_constant,
                      hit_prob, hit_prob_halfline, martin_kernel, point_augmented_law)
from .montecarlo import (EmpiricalSummary, ExitSample, SimConfig, defect_interval, ks_statistic,
                         simulate_exit, simulate_exit_levels, summarize)
from .params import (ProcessClass, StableParams, beta_from_rho, levy_density, make_params,
                     p1_at_zero, rho_from_beta, rho_range)
from .verify import CheckReport, run_checks

__all__ = [name for name in dir() if not name.startswith("_")]
