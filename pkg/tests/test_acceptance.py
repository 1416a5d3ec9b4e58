"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` (the lines are printed in the
terminal summary) or ``python3 tests/test_acceptance.py``.
"""

import math
import sys
import time

import mpmath as mp
import numpy as np
import pytest
from scipy import special

from oracles import green_interval_mp
from stableharm.boundary import (exit_law, h_density, hstar_density, kappa_star,
                                 kappa_star_hypergeometric, pstar_infinity)
from stableharm.green import expected_exit_time, g_complement, g_interval
from stableharm.hitting import hit_asymptote_constant, hit_prob
from stableharm.montecarlo import (SimConfig, defect_interval, path_stream, sample_stable,
                                   simulate_exit, simulate_exit_levels, summarize)
from stableharm.params import make_params
from stableharm.verify import check_ikeda_watanabe, run_checks

RESULTS: list[str] = []


def record(n: int, title: str, passed: bool, detail: str):
    line = f"criterion {n:2d} {'PASS' if passed else 'FAIL'}  {title}: {detail}"
    RESULTS.append(line)
    print(line)
    assert passed, line


def test_c01_abelian_identity():
    t0 = time.perf_counter()
    reps = run_checks(("lemma1",))
    elapsed = time.perf_counter() - t0
    worst = max(abs(r.residual) for r in reps)
    ok = len(reps) == 36 and all(r.passed and abs(r.residual) <= 1e-8 for r in reps) \
        and elapsed < 10.0
    record(1, "Abelian identity int u_hat phi = 1", ok,
           f"{len(reps)} cases, max |residual| {worst:.2e}, {elapsed:.2f} s")


def test_c02_potential_identity():
    reps = run_checks(("lemma2",))
    worst = max(abs(r.residual) for r in reps)
    ok = len(reps) == 36 and all(abs(r.residual) <= 1e-8 for r in reps)
    record(2, "potential identity for x > 1", ok,
           f"{len(reps)} cases, max relative residual {worst:.2e}")


def test_c03_total_masses():
    reps = run_checks(("masses",))
    worst = max(abs(r.residual) for r in reps)
    ok = all(abs(r.residual) <= 1e-8 for r in reps)
    n_h = sum(r.check_name == "mass-h" for r in reps)
    record(3, "total masses of H and H*", ok,
           f"{n_h} interior and {len(reps) - n_h} exterior starts, max |residual| {worst:.2e}")


def test_c04_ikeda_watanabe():
    rng = np.random.default_rng(2024)
    worst, count, ok = 0.0, 0, True
    for alpha, rho in ((0.8, 0.3), (1.5, 0.6)):
        p = make_params(alpha, rho)
        for _ in range(10):
            x = rng.uniform(-0.9, 0.9)
            y = rng.choice([-1, 1]) * rng.uniform(1.05, 5.0)
            rep = check_ikeda_watanabe(p, x, y, "interval")
            worst, count = max(worst, abs(rep.residual)), count + 1
            ok &= abs(rep.residual) <= 1e-6
        for _ in range(10):
            x = rng.choice([-1, 1]) * rng.uniform(1.05, 5.0)
            y = rng.uniform(-0.9, 0.9)
            rep = check_ikeda_watanabe(p, x, y, "complement")
            worst, count = max(worst, abs(rep.residual)), count + 1
            ok &= abs(rep.residual) <= 1e-6
    record(4, "Ikeda-Watanabe convolution", bool(ok),
           f"{count} pairs, max relative error {worst:.2e}")


def _rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def test_c05_dualities():
    inside = np.linspace(-0.95, 0.95, 9)
    outside = np.concatenate([-np.geomspace(1.02, 30, 5), np.geomspace(1.02, 30, 5)])
    worst, n = 0.0, 0
    for alpha, rho in ((0.5, 0.3), (0.8, 0.7), (1.0, 0.35), (1.3, 0.6), (1.7, 0.45)):
        p = make_params(alpha, rho)
        q = p.dual()
        for x in inside:
            for y in outside:
                worst = max(worst, _rel(h_density(p, x, y), h_density(q, -x, -y)))
                worst = max(worst, _rel(hstar_density(p, y, x), hstar_density(q, -y, -x)))
                n += 2
            for y in inside:
                if x == y:
                    continue
                v = g_interval(p, x, y).value
                worst = max(worst, _rel(v, g_interval(q, -x, -y).value),
                            _rel(v, g_interval(q, y, x).value))
                n += 2
        for x in outside:
            for y in outside:
                if x == y:
                    continue
                v = g_complement(p, x, y).value
                worst = max(worst, _rel(v, g_complement(q, -x, -y).value),
                            _rel(v, g_complement(q, y, x).value))
                n += 2
    record(5, "duality and Hunt switching", worst <= 1e-12,
           f"{n} comparisons, max relative gap {worst:.2e}")


def test_c06_brownian():
    p = make_params(2, 0.5)
    worst = 0.0
    grid = np.linspace(-0.9, 0.9, 7)
    for x in grid:
        for y in grid:
            if x > y:
                worst = max(worst, abs(hit_prob(p, x, y) - (1 - x) / (1 - y)))
        worst = max(worst, abs(expected_exit_time(p, x) - (1 - x * x) / 2))
    worst = max(worst, abs(g_interval(p, 0.0, 0.0).value - 0.5))
    record(6, "Brownian reductions", worst <= 1e-12, f"max error {worst:.2e}")


def test_c07_kappa_star():
    worst = 0.0
    for alpha, rho in ((1.3, 0.4), (1.3, 0.6), (1.7, 0.45), (1.7, 0.55)):
        p = make_params(alpha, rho)
        for x in (1.5, 3.0, 20.0):
            worst = max(worst, _rel(kappa_star(p, x).value, kappa_star_hypergeometric(p, x)))
    record(7, "kappa* incomplete-integral vs 2F1 form", worst <= 1e-10,
           f"max relative gap {worst:.2e}")


def _g_diag_mp(p, y):
    with mp.workdps(40):
        a, r = mp.mpf(p.alpha), mp.mpf(p.rho)
        y = mp.mpf(y)
        return ((1 - y * y) / 2) ** (a - 1) / (mp.gamma(a * r) * mp.gamma(a * (1 - r)) * (a - 1))


def test_c08_ratio_oracle():
    rng = np.random.default_rng(7)
    worst = 0.0
    for alpha, rho in ((1.3, 0.4), (1.7, 0.45)):
        p = make_params(alpha, rho)
        for x, y in rng.uniform(-0.95, 0.95, size=(20, 2)):
            gxy = green_interval_mp(p, x, y) if y > x else green_interval_mp(p.dual(), -x, -y)
            worst = max(worst, _rel(hit_prob(p, x, y), float(gxy / _g_diag_mp(p, y))))
    record(8, "hitting probability vs Green ratio", worst <= 1e-10,
           f"40 pairs, max relative gap {worst:.2e}")


def test_c09_hitting_asymptotics():
    ratios = []
    for rho in (0.5, 0.55):
        p = make_params(1.5, rho)
        for x, side in ((1e-4, "above"), (-1e-4, "below")):
            c = hit_asymptote_constant(p, side)
            ratios.append((1 - hit_prob(p, x, 0.0)) / (c * (2 * abs(x)) ** 0.5))
    ok = all(0.98 <= r <= 1.02 for r in ratios)
    record(9, "non-hitting asymptotics at |x| = 1e-4", ok,
           "ratios " + ", ".join(f"{r:.5f}" for r in ratios))


def test_c10_positivity():
    t0 = time.perf_counter()
    zs = []
    for alpha, rho in ((0.5, 0.3), (0.8, 0.5), (1.0, 0.3), (1.3, 0.6), (1.7, 0.45),
                       (1.5, 1 / 1.5)):
        x = sample_stable(make_params(alpha, rho), 1.0, 100_000, path_stream(1, 0))
        zs.append((np.mean(x >= 0) - rho) / math.sqrt(rho * (1 - rho) / x.size))
    elapsed = time.perf_counter() - t0
    ok = all(abs(z) <= 3 for z in zs) and elapsed < 5.0
    record(10, "Monte Carlo positivity", ok,
           "z-scores " + ", ".join(f"{z:+.2f}" for z in zs) + f", {elapsed:.2f} s")


def test_c11_exit_law_monte_carlo():
    t0 = time.perf_counter()
    p = make_params(1.5, 0.5)
    levels = simulate_exit_levels(SimConfig(p, "interval", 0.0, 6.25e-4, 10_000, seed=7),
                                  (16, 4, 1))
    law = exit_law(p, "interval", 0.0)
    sums = {dt: summarize(s, "interval", law.cdf) for dt, s in levels.items()}
    elapsed = time.perf_counter() - t0
    steps = sorted(sums, reverse=True)
    ks = [sums[dt].ks_vs_cdf for dt in steps]
    fine, mid = sums[steps[-1]], sums[steps[-2]]
    target = 1 / special.gamma(2.5)
    # step-bias allowance: the change between the two finest coupled levels
    allowance = abs(fine.mean_exit_time - mid.mean_exit_time)
    gap = abs(fine.mean_exit_time - target)
    ok_mean = gap <= 3 * fine.stderr_exit_time + allowance
    ok_ks = ks[0] > ks[1] > ks[2]
    ok = ok_mean and ok_ks and elapsed < 120.0
    record(11, "Monte Carlo exit law", ok,
           f"mean {fine.mean_exit_time:.4f} vs {target:.4f} (gap {gap:.4f}, "
           f"3se {3 * fine.stderr_exit_time:.4f}, allowance {allowance:.4f}); "
           f"KS {ks[0]:.4f} > {ks[1]:.4f} > {ks[2]:.4f}; {elapsed:.1f} s")


def test_c12_creeping_atom():
    p = make_params(1.5, 1 / 1.5)
    levels = simulate_exit_levels(SimConfig(p, "interval", 0.0, 6.25e-4, 10_000, seed=8),
                                  (16, 4, 1))
    steps = sorted(levels, reverse=True)
    fr = [summarize(levels[dt], "interval").exit_side_fractions["above"] for dt in steps]
    target = 2 ** -0.5
    # coarse grids miss brief up-crossings, so the fraction can only grow under refinement
    monotone = fr[0] <= fr[1] <= fr[2]
    gap = abs(fr[2] - target)
    record(12, "upward creeping atom", monotone and gap < 0.03,
           "fractions " + ", ".join(f"{f:.4f}" for f in fr)
           + f" vs {target:.4f}, final gap {gap:.4f}")


def test_c13_defect_mass():
    p = make_params(0.5, 0.5)
    cfg = SimConfig(p, "complement", 3.0, 1e-2, 4000, max_steps=10_000_000, seed=3,
                    escape_radius=1e3)
    lo, hi = defect_interval(simulate_exit(cfg), p)
    target = pstar_infinity(p, 3.0)
    record(13, "never-entering probability", lo <= target <= hi,
           f"interval [{lo:.4f}, {hi:.4f}] vs {target:.4f}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
