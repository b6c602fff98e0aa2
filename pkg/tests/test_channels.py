import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fdrelay.channels import (
    ChannelSet,
    GeometryConfig,
    db_to_linear,
    dbm_to_watts,
    effective_angle_cos,
    linear_to_db,
    make_loop_channel,
    make_los_channel,
)


@pytest.mark.parametrize("db, expected", [(0.0, 1.0), (-60.0, 1e-6), (10.0, 10.0)])
def test_db_to_linear_reference_points(db, expected):
    assert db_to_linear(db) == pytest.approx(expected, rel=1e-15)


def test_db_to_linear_minus_15():
    assert abs(db_to_linear(-15.0) - 0.0316228) < 1e-7


@pytest.mark.parametrize("dbm, watts", [(30.0, 1.0), (-90.0, 1e-12), (0.0, 1e-3)])
def test_dbm_to_watts(dbm, watts):
    assert dbm_to_watts(dbm) == pytest.approx(watts, rel=1e-12)


def test_db_to_linear_vectorized():
    np.testing.assert_allclose(db_to_linear(np.array([0.0, -30.0])), [1.0, 1e-3])


@given(st.floats(min_value=-300, max_value=300))
def test_db_roundtrip(x):
    assert db_to_linear(linear_to_db(db_to_linear(x))) == pytest.approx(db_to_linear(x), rel=1e-12)
    assert linear_to_db(db_to_linear(x)) == pytest.approx(x, rel=1e-12, abs=1e-12)


def test_los_channel_reference_geometry():
    h = make_los_channel(2, 0.5, 10.0, -60.0)
    np.testing.assert_allclose(np.abs(h), [1e-3, 1e-3], rtol=1e-12)
    # direct evaluation of pi * sin(10 deg)
    expected_phase = math.pi * math.sin(math.radians(10.0))
    assert np.angle(h[1]) == pytest.approx(expected_phase, abs=1e-12)
    assert np.angle(h[1]) == pytest.approx(0.5456, abs=1e-3)
    assert h[0] == pytest.approx(1e-3)


def test_los_channel_zero_angle_and_single_element():
    np.testing.assert_allclose(make_los_channel(2, 0.37, 0.0, 0.0), [1, 1])
    np.testing.assert_allclose(make_los_channel(1, 0.5, 5.0, -60.0), [1e-3])


@pytest.mark.parametrize("n", [0, -1])
def test_channel_builders_reject_nonpositive_n(n):
    with pytest.raises(ValueError):
        make_los_channel(n, 0.5, 10.0, -60.0)
    with pytest.raises(ValueError):
        make_loop_channel(n, -15.0)


def test_loop_channel():
    np.testing.assert_allclose(make_loop_channel(2, -15.0), [0.177828, 0.177828], atol=1e-6)
    f0 = make_loop_channel(2, -np.inf)
    assert np.all(f0 == 0)
    np.testing.assert_array_equal(make_loop_channel(1, 0.0), [1.0])


def test_effective_angle_parallel_and_orthogonal():
    g = np.array([1 + 2j, -0.5j])
    assert effective_angle_cos(2 * g, g) == pytest.approx(1.0)
    orth = np.array([-np.conj(g[1]), np.conj(g[0])])
    assert abs(np.vdot(orth, g)) < 1e-15
    assert effective_angle_cos(orth, g) == pytest.approx(0.0, abs=1e-15)


def test_effective_angle_reference_geometry(ref_channels):
    # independent evaluation: |1 + exp(-j pi sin 5deg)| / 2
    oracle = abs(1 + np.exp(-1j * math.pi * math.sin(math.radians(5.0)))) / 2
    value = effective_angle_cos(ref_channels.f, ref_channels.g)
    assert value == pytest.approx(oracle, abs=1e-14)
    assert abs(value - 0.990637) < 1e-5


def test_effective_angle_zero_f_and_zero_g():
    g = np.array([1.0, 1j])
    assert effective_angle_cos(np.zeros(2), g) == 0.0
    with pytest.raises(ValueError):
        effective_angle_cos(g, np.zeros(2))


@given(
    st.floats(0.01, 100), st.floats(-math.pi, math.pi),
    st.floats(0.01, 100), st.floats(-math.pi, math.pi),
    st.integers(0, 2**31),
)
def test_effective_angle_scale_invariant(s1, p1, s2, p2, seed):
    rng = np.random.default_rng(seed)
    f = rng.normal(size=3) + 1j * rng.normal(size=3)
    g = rng.normal(size=3) + 1j * rng.normal(size=3)
    base = effective_angle_cos(f, g)
    scaled = effective_angle_cos(s1 * np.exp(1j * p1) * f, s2 * np.exp(1j * p2) * g)
    assert scaled == pytest.approx(base, abs=1e-12)
    assert 0.0 <= base <= 1.0


@pytest.mark.parametrize("m, n", [(1, 1), (2, 2), (3, 4)])
def test_channel_norms_match_geometry(m, n):
    geo = GeometryConfig(num_source_antennas=m, num_relay_tx_antennas=n, aod_h=-33.0,
                         aod_g=71.0, beta_sr=-52.0, beta_rd=-67.0, beta_rr=-12.0)
    ch = ChannelSet.from_geometry(geo)
    assert np.vdot(ch.h, ch.h).real == pytest.approx(m * 10 ** -5.2, rel=1e-12)
    assert np.vdot(ch.g, ch.g).real == pytest.approx(n * 10 ** -6.7, rel=1e-12)
    assert np.vdot(ch.f, ch.f).real == pytest.approx(n * 10 ** -1.2, rel=1e-12)
    for vec, loss in ((ch.h, -52.0), (ch.g, -67.0), (ch.f, -12.0)):
        np.testing.assert_allclose(np.abs(vec), math.sqrt(10 ** (loss / 10)), rtol=1e-12)


def test_channel_set_validation():
    with pytest.raises(ValueError):
        ChannelSet(h=[0, 0], g=[1, 1], f=[0, 0])
    with pytest.raises(ValueError):
        ChannelSet(h=[1, 0], g=[0, 0], f=[0, 0])
    with pytest.raises(ValueError):
        ChannelSet(h=[1, 0], g=[1, 1], f=[0, 0, 0])
    with pytest.raises(ValueError):
        ChannelSet(h=[1, np.nan], g=[1, 1], f=[0, 0])


def test_channel_set_is_immutable_and_copies():
    g = np.array([1.0 + 0j, 2.0])
    ch = ChannelSet(h=[1.0], g=g, f=[0, 0])
    g[0] = 99
    assert ch.g[0] == 1.0
    with pytest.raises(ValueError):
        ch.g[0] = 5


def test_geometry_warns_on_positive_path_loss():
    with pytest.warns(UserWarning):
        GeometryConfig(beta_sr=3.0)
