import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fdrelay.channels import ChannelSet
from fdrelay.fd_optimizer import solve_closed_form
from fdrelay.link_model import SystemParams, link_budget
from fdrelay.tsr_optimizer import (
    alpha_from_z,
    bisect,
    f_z,
    solve_tsr,
    solve_z_star,
    stationarity_residual,
    tsr_constant,
    tsr_rate,
    tsr_snr,
    z_from_alpha,
)

from conftest import generic_instance

mpmath.mp.dps = 50


def _mp_f(z, gamma1, c):
    z, g1, c = mpmath.mpf(z), mpmath.mpf(gamma1), mpmath.mpf(c)
    return (g1 * c * z * mpmath.log(z) + (c - 1) * z**2
            - z * (g1 * c + 2 * c - 2 * g1 - 2) - (g1 + 1) * (g1 + 1 - c))


def _mp_root(gamma1, c):
    return mpmath.findroot(lambda z: _mp_f(z, gamma1, c), (mpmath.mpf(1), mpmath.mpf(1 + gamma1)),
                           solver="anderson")


def _mp_rate_argmax(gamma1, c):
    # independent route: maximize the rate in alpha directly
    g1, c = mpmath.mpf(gamma1), mpmath.mpf(c)

    def drate(a):
        return mpmath.diff(lambda x: (1 - x) * mpmath.log(1 + g1 * x / (x + c * (1 - x))), a)

    return mpmath.findroot(drate, (mpmath.mpf("1e-12"), 1 - mpmath.mpf("1e-12")), solver="anderson")


def test_f_z_small_integer_point():
    assert f_z(2.0, 3.0, 2.0) == pytest.approx(12 * math.log(2) - 8, abs=1e-12)


def test_f_z_matches_literal_expression():
    rng = np.random.default_rng(12)
    for _ in range(300):
        gamma1, c = 10 ** rng.uniform(-1, 8), 10 ** rng.uniform(-2, 7)
        z = 1 + gamma1 * rng.uniform(0, 1)
        exact = _mp_f(z, gamma1, c)
        scale = max(abs(exact), gamma1**2)
        assert abs(f_z(z, gamma1, c) - float(exact)) <= 1e-12 * float(scale)


@pytest.mark.parametrize("gamma1, c", [(2e6, 312500.15625), (3.0, 2.0), (50.0, 0.1), (1e4, 1e6)])
def test_f_z_endpoints(gamma1, c):
    assert f_z(1.0, gamma1, c) == pytest.approx(-gamma1**2, rel=1e-9)
    top = gamma1 * c * (1 + gamma1) * math.log1p(gamma1)
    assert f_z(1.0 + gamma1, gamma1, c) == pytest.approx(top, rel=1e-9)
    zs = np.linspace(1.0, 1.0 + gamma1, 2001)
    vals = f_z(zs, gamma1, c)
    assert np.all(np.diff(vals) > 0)


def test_tsr_constant_reference(ref_params, ref_channels):
    c = tsr_constant(ref_params, ref_channels.h, ref_channels.g)
    assert c == pytest.approx(3.125e5, rel=1e-5)
    gamma1 = 2e6
    assert c == pytest.approx((1 + gamma1) * 1e-12 / (2 * 0.8 * 2e-6 * 2e-6), rel=1e-12)
    with pytest.raises(ValueError):
        tsr_constant(SystemParams(ps=0.0), ref_channels.h, ref_channels.g)


def test_reference_split(ref_params, ref_channels):
    sol = solve_tsr(ref_params, ref_channels.h, ref_channels.g)
    ref = _mp_root(sol.gamma1, sol.c_const)
    assert sol.z_star == pytest.approx(float(ref), rel=1e-10)
    assert sol.alpha_star == pytest.approx(0.4556, abs=1e-3)
    assert sol.gamma_d == pytest.approx(sol.z_star - 1, rel=1e-9)


@pytest.mark.parametrize("gamma1, c", [(2e6, 312500.15625), (3.0, 2.0), (50.0, 0.1),
                                       (1e4, 1e6), (1e8, 1e3), (0.01, 0.5)])
def test_z_star_matches_high_precision_root(gamma1, c):
    z = solve_z_star(gamma1, c)
    assert z == pytest.approx(float(_mp_root(gamma1, c)), rel=1e-10)
    alpha = alpha_from_z(z, gamma1, c)
    assert alpha == pytest.approx(float(_mp_rate_argmax(gamma1, c)), rel=1e-8)


@settings(max_examples=200, deadline=None)
@given(st.floats(-2, 9), st.floats(-3, 7))
def test_root_properties(log_g1, log_c):
    gamma1, c = 10.0**log_g1, 10.0**log_c
    z = solve_z_star(gamma1, c)
    assert 1.0 < z < 1.0 + gamma1
    alpha = alpha_from_z(z, gamma1, c)
    assert 0.0 < alpha < 1.0
    assert z_from_alpha(alpha, gamma1, c) == pytest.approx(z, rel=1e-10)
    assert tsr_snr(alpha, gamma1, c) == pytest.approx(z - 1, rel=1e-8, abs=1e-12)
    assert abs(stationarity_residual(alpha, gamma1, c)) <= 1e-8 * max(1.0, math.log1p(gamma1))
    r_star = tsr_rate(alpha, gamma1, c)
    for da in (-1e-4, 1e-4):
        trial = min(max(alpha + da, 1e-15), 1 - 1e-15)
        assert tsr_rate(trial, gamma1, c) <= r_star + 1e-14


def test_grid_optimality_and_concavity():
    rng = np.random.default_rng(3)
    alphas = np.arange(1, 10_001) / 10_001
    for _ in range(100):
        params, ch = generic_instance(rng)
        sol = solve_tsr(params, ch.h, ch.g)
        rates = tsr_rate(alphas, sol.gamma1, sol.c_const)
        assert rates.max() <= sol.rate + 1e-9
        second = np.diff(rates, 2)
        assert np.all(second <= 1e-12)


def test_bisect_helper():
    lo, hi = bisect(lambda x: x**3 - 2.0, 0.0, 2.0, rtol=1e-14)
    assert lo < 2 ** (1 / 3) <= hi
    assert hi - lo <= 1e-13
    with pytest.raises(RuntimeError):
        bisect(lambda x: x + 5.0, 0.0, 1.0)


def test_relay_power_and_energy_causality():
    rng = np.random.default_rng(8)
    for _ in range(100):
        params, ch = generic_instance(rng)
        sol = solve_tsr(params, ch.h, ch.g)
        a = link_budget(params, ch.h).harvest_scale
        # energy harvested in the alpha T slot powers the (1 - alpha) T / 2 relay slot
        harvested = a * sol.alpha_star * params.t_block
        spent = sol.pr * (1 - sol.alpha_star) * params.t_block / 2
        assert spent == pytest.approx(harvested, rel=1e-12)


def test_tsr_below_full_duplex_reference_geometry(ref_channels):
    for ps_dbm in range(20, 51):
        params = SystemParams(ps=10 ** ((ps_dbm - 30) / 10))
        tsr = solve_tsr(params, ref_channels.h, ref_channels.g)
        assert tsr.rate < solve_closed_form(params, ref_channels).rate


def test_tsr_can_win_at_very_low_snr():
    # long harvesting slots pay off when the second hop is starved;
    # dominance of full duplex is a high-SNR statement only
    params = SystemParams(ps=34.0, sigma_r2=6.69e-12, sigma_d2=2.61e-12, eta=0.577)
    ch = ChannelSet(h=[-1.103e-4 - 1.730e-4j, 5.135e-5 - 5.593e-5j, -9.834e-5 - 1.379e-4j],
                    g=[2.824e-6 + 6.639e-5j], f=[-0.06815 + 0.005417j])
    assert solve_tsr(params, ch.h, ch.g).rate > solve_closed_form(params, ch).rate


def test_split_shrinks_with_source_power(ref_channels):
    alphas = [solve_tsr(SystemParams(ps=ps), ref_channels.h, ref_channels.g).alpha_star
              for ps in np.logspace(-2, 2, 20)]
    assert np.all(np.diff(alphas) < 0)
