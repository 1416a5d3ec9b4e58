import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from oracles import free_potential, green_interval_mp
from stableharm.boundary import h_density, hstar_density
from stableharm.errors import DomainError, NotApplicableError
from stableharm.green import (expected_exit_time, expected_exit_time_quadrature, g_complement,
                              g_halfline, g_interval, moebius_z)
from stableharm.params import make_params, rho_range

TWO_SIDED = [(0.5, 0.3), (0.8, 0.5), (1.0, 0.3), (1.3, 0.6), (1.5, 0.4), (1.7, 0.45), (1.9, 0.5)]


def test_brownian_values():
    p = make_params(2, 0.5)
    assert g_interval(p, 0.0, 0.5).value == pytest.approx(0.25, rel=1e-15)
    assert g_interval(p, 0.5, 0.0).value == pytest.approx(0.25, rel=1e-15)
    assert g_halfline(p, -2.0, 0.0).value == pytest.approx(1.0, rel=1e-15)
    assert g_complement(p, 3.0, 2.0).value == pytest.approx(1.0, rel=1e-15)
    assert g_complement(p, 3.0, -2.0).value == 0.0


def test_moebius_z():
    assert moebius_z(0.0, 0.5) == pytest.approx(2.0)
    assert moebius_z(0.3, 0.3) == math.inf


@pytest.mark.parametrize("alpha,rho", TWO_SIDED)
def test_hunt_switching_and_duality(alpha, rho):
    p = make_params(alpha, rho)
    q = p.dual()
    for x, y in [(-0.6, 0.3), (0.2, -0.9), (0.95, 0.94)]:
        v = g_interval(p, x, y).value
        assert g_interval(q, y, x).value == pytest.approx(v, rel=1e-12)
        assert g_interval(q, -x, -y).value == pytest.approx(v, rel=1e-12)
    for x, y in [(1.5, 3.0), (4.0, 1.2), (2.0, -3.0), (-1.5, 6.0)]:
        v = g_complement(p, x, y).value
        assert g_complement(q, y, x).value == pytest.approx(v, rel=1e-12)
        assert g_complement(q, -x, -y).value == pytest.approx(v, rel=1e-12)
    for x, y in [(-0.5, 0.5), (0.5, -3.0)]:
        assert g_halfline(q, y, x).value == pytest.approx(g_halfline(p, x, y).value, rel=1e-12)


def _edge_integral(f, lo, hi, lo_exp, hi_exp):
    # QUADPACK algebraic weights take the edge powers out of f; the rule
    # samples the endpoints, where f / weight is continuous, so nudge inwards
    d = 1e-12 * (hi - lo)

    def smooth(t):
        t = min(max(t, lo + d), hi - d)
        return f(t) / ((t - lo) ** lo_exp * (hi - t) ** hi_exp)
    v, _ = integrate.quad(smooth, lo, hi, weight="alg", wvar=(lo_exp, hi_exp),
                          epsabs=1e-14, epsrel=1e-12, limit=200)
    return v


def _tail_integral(f, start, sign, e):
    # |t| from 1 to 2 with the edge weight, then to infinity
    near = _edge_integral(lambda s: f(sign * s), 1.0, 2.0, e, 0.0)
    far, _ = integrate.quad(lambda s: f(sign * s), 2.0, math.inf, epsabs=1e-14, epsrel=1e-12,
                            limit=200)
    return near + far


@pytest.mark.parametrize("alpha,rho", [(0.3, 0.6), (0.5, 0.5), (0.7, 0.3), (0.9, 0.8)])
@pytest.mark.parametrize("x,y", [(0.0, 0.5), (0.6, -0.4), (-0.9, 0.95)])
def test_interval_green_free_potential(alpha, rho, x, y):
    # g(x, y) = u(y - x) - E_x u(y - L_T) for a transient process
    p = make_params(alpha, rho)
    f = lambda t: h_density(p, x, t) * free_potential(p, y - t)  # noqa: E731
    harm = _tail_integral(f, 1.0, 1, -p.ar) + _tail_integral(f, 1.0, -1, -p.ar_hat)
    ref = free_potential(p, y - x) - harm
    assert g_interval(p, x, y).value == pytest.approx(ref, rel=1e-9)


@pytest.mark.parametrize("alpha,rho", [(0.3, 0.6), (0.5, 0.5), (0.7, 0.3), (0.9, 0.8)])
@pytest.mark.parametrize("x,y", [(1.5, 3.0), (3.0, 1.5), (2.0, -2.5), (-1.2, 4.0)])
def test_complement_green_free_potential(alpha, rho, x, y):
    p = make_params(alpha, rho)
    f = lambda t: hstar_density(p, x, t) * free_potential(p, y - t)  # noqa: E731
    harm = _edge_integral(f, -1.0, 1.0, -p.ar, -p.ar_hat)
    ref = free_potential(p, y - x) - harm
    assert g_complement(p, x, y).value == pytest.approx(ref, rel=1e-9)


@pytest.mark.parametrize("alpha", [0.4, 0.7])
@pytest.mark.parametrize("x,y", [(-3.0, 2.0), (-1.5, 1.01), (-10.0, 5.0)])
def test_subordinator_jump_over_free_potential(alpha, x, y):
    # the entry law into [-1, 1] of an upward subordinator from x < -1
    p = make_params(alpha, 1.0)
    f = lambda t: hstar_density(p, x, t) * free_potential(p, y - t)  # noqa: E731
    harm = _edge_integral(f, -1.0, 1.0, -p.ar, 0.0)
    ref = free_potential(p, y - x) - harm
    assert g_complement(p, x, y).value == pytest.approx(ref, rel=1e-9)


def test_subordinator_closed_forms():
    p = make_params(0.6, 1.0)
    assert g_interval(p, 0.2, -0.3).value == 0.0
    assert g_interval(p, -0.3, 0.2).value == pytest.approx(0.5 ** -0.4 / math.gamma(0.6),
                                                           rel=1e-14)
    assert g_complement(p, 2.0, 1.5).value == 0.0
    assert g_complement(p, 1.5, 2.0).value == pytest.approx(0.5 ** -0.4 / math.gamma(0.6),
                                                            rel=1e-14)
    q = make_params(0.6, 0.0)
    assert g_interval(q, 0.2, -0.3).value == pytest.approx(0.5 ** -0.4 / math.gamma(0.6),
                                                           rel=1e-14)


@pytest.mark.parametrize("alpha,rho", [(1.3, 0.6), (1.5, 0.4), (1.7, 0.45), (1.9, 0.5),
                                       (0.8, 0.5), (1.0, 0.3)])
@pytest.mark.parametrize("x,y", [(-0.3, 0.4), (0.5, -0.8), (0.1, 0.1 + 1e-4),
                                 (0.1, 0.1 - 1e-7), (-0.99, 0.99), (0.7, 0.7 + 1e-10)])
def test_interval_green_vs_mpmath(alpha, rho, x, y):
    p = make_params(alpha, rho)
    if y > x:
        ref = green_interval_mp(p, x, y)
    else:
        ref = green_interval_mp(p.dual(), -x, -y)
    assert g_interval(p, x, y).value == pytest.approx(float(ref), rel=1e-10)


@pytest.mark.parametrize("alpha,rho", [(1.3, 0.6), (1.5, 0.5), (1.8, 0.45)])
def test_interval_green_diagonal_rate(alpha, rho):
    # g(x, x) - g(x, x + d) = C d^(alpha - 1) + O(d), so the scaled gap has
    # successive differences shrinking by 100^(2 - alpha) per two decades
    p = make_params(alpha, rho)
    x = 0.2
    diag = g_interval(p, x, x).value
    assert math.isfinite(diag) and diag > 0
    scaled = [(diag - g_interval(p, x, x + d).value) / d ** (alpha - 1)
              for d in (1e-4, 1e-6, 1e-8)]
    assert scaled[2] > 0
    shrink = (scaled[2] - scaled[1]) / (scaled[1] - scaled[0])
    assert shrink == pytest.approx(100.0 ** (alpha - 2), rel=0.05)


def test_diagonal_infinite_below_one():
    assert g_interval(make_params(0.7, 0.5), 0.1, 0.1).value == math.inf
    assert g_complement(make_params(0.7, 0.5), 2.0, 2.0).value == math.inf
    assert g_halfline(make_params(1.0, 0.5), 0.0, 0.0).value == math.inf


@pytest.mark.parametrize("alpha,rho", TWO_SIDED + [(2.0, 0.5), (1.5, 1 / 1.5), (0.6, 1.0)])
@pytest.mark.parametrize("x", [-0.8, 0.0, 0.45])
def test_expected_exit_time(alpha, rho, x):
    p = make_params(alpha, rho)
    closed = expected_exit_time(p, x)
    assert expected_exit_time_quadrature(p, x, tol=1e-11) == pytest.approx(closed, rel=1e-8)


def test_expected_exit_time_symmetric():
    for a in (0.5, 1.0, 1.5, 2.0):
        p = make_params(a, 0.5)
        assert expected_exit_time(p, 0.3) == pytest.approx(
            (1 - 0.09) ** (a / 2) / math.gamma(1 + a), rel=1e-14)
    assert expected_exit_time(make_params(2, 0.5), 0.5) == pytest.approx(0.375, rel=1e-15)


@pytest.mark.parametrize("alpha,rho", [(0.7, 0.4), (1.3, 0.6), (1.6, 0.5)])
def test_halfline_green_is_scaling_limit(alpha, rho):
    # (-B, 1) mapped affinely onto (-1, 1); Green functions scale by length^(alpha - 1)
    p = make_params(alpha, rho)
    big = 1e9
    half = (big + 1) / 2
    u = lambda t: (t + big) / half - 1  # noqa: E731
    for x, y in [(0.0, 0.5), (-3.0, 0.9), (0.5, -2.0)]:
        approx = g_interval(p, u(x), u(y)).value * half ** (alpha - 1)
        assert approx == pytest.approx(g_halfline(p, x, y).value, rel=1e-3)


def test_domain_errors():
    p = make_params(1.5, 0.5)
    with pytest.raises(DomainError):
        g_interval(p, 1.0, 0.0)
    with pytest.raises(DomainError):
        g_complement(p, 0.5, 2.0)
    with pytest.raises(DomainError):
        g_halfline(p, 1.0, 0.0)
    with pytest.raises(DomainError):
        expected_exit_time(p, -1.0)
    with pytest.raises(NotApplicableError):
        g_complement(make_params(1.5, 1 / 1.5), 2.0, 3.0)


@settings(max_examples=80, deadline=None)
@given(alpha=st.floats(0.2, 1.95), u=st.floats(0.02, 0.98),
       x=st.floats(-0.99, 0.99), y=st.floats(-0.99, 0.99))
def test_interval_green_nonnegative(alpha, u, x, y):
    lo, hi = rho_range(alpha)
    p = make_params(alpha, lo + u * (hi - lo))
    v = g_interval(p, x, y).value
    assert v >= 0
    if x != y:
        assert math.isfinite(v)
