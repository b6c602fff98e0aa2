import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from fdrelay import FullDuplexRelayOptimizer, TimeSwitchingRelayOptimizer
from fdrelay.estimators import check_channels
from fdrelay.fd_optimizer import solve_closed_form
from fdrelay.link_model import SystemParams


def test_get_params_and_clone():
    est = FullDuplexRelayOptimizer(eta=0.5, method="matrix")
    params = est.get_params()
    assert params == {"ps": 1.0, "sigma_r2": 1e-12, "sigma_d2": 1e-12, "eta": 0.5,
                      "t_block": 1.0, "method": "matrix"}
    twin = clone(est)
    assert twin.get_params() == params and twin is not est
    assert TimeSwitchingRelayOptimizer().set_params(tol=1e-9).tol == 1e-9


def test_fd_fit_predict_score(ref_channels):
    est = FullDuplexRelayOptimizer().fit(ref_channels)
    ref = solve_closed_form(SystemParams(), ref_channels)
    assert est.gamma2_star_ == pytest.approx(ref.gamma2_star)
    assert est.score() == est.rate_ == pytest.approx(ref.rate)
    rates = est.predict([0.1, 1.0, 10.0])
    assert rates.shape == (3,)
    assert rates[1] == pytest.approx(ref.rate)
    assert np.all(np.diff(rates) > 0)


def test_fd_methods_agree(ref_channels):
    a = FullDuplexRelayOptimizer().fit(ref_channels)
    b = FullDuplexRelayOptimizer(method="matrix").fit(ref_channels)
    assert b.gamma2_star_ == pytest.approx(a.gamma2_star_, rel=1e-9)
    with pytest.raises(ValueError):
        FullDuplexRelayOptimizer(method="newton").fit(ref_channels)


def test_tsr_fit_tuple_input(ref_channels):
    est = TimeSwitchingRelayOptimizer().fit((ref_channels.h, ref_channels.g))
    assert est.alpha_star_ == pytest.approx(0.4556, abs=1e-3)
    assert est.predict(np.array([[1.0]]))[0] == pytest.approx(est.rate_)


def test_not_fitted():
    with pytest.raises(NotFittedError):
        FullDuplexRelayOptimizer().predict([1.0])


def test_check_channels_inputs(ref_channels):
    assert check_channels(ref_channels) is ref_channels
    as_dict = check_channels({"h": ref_channels.h, "g": ref_channels.g, "f": ref_channels.f})
    np.testing.assert_array_equal(as_dict.f, ref_channels.f)
    with pytest.raises(ValueError):
        check_channels([ref_channels.h])
    with pytest.raises(TypeError):
        check_channels(3.0)


def test_predict_rejects_negative_power(ref_channels):
    est = FullDuplexRelayOptimizer().fit(ref_channels)
    with pytest.raises(ValueError):
        est.predict([-1.0])
