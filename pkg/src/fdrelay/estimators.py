"""scikit-learn style wrappers around the two relay optimizers.

``fit`` takes the channel state (a :class:`ChannelSet` or an
``(h, g, f)`` tuple) and stores the optimum in trailing-underscore
attributes. ``predict`` maps source powers in watts to the optimal
throughput for the fitted channels, and ``score`` returns the fitted
throughput. Hyperparameters are the system parameters, so
``get_params``/``set_params``/``clone`` behave as usual.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .channels import ChannelSet
from .fd_optimizer import solve_closed_form, solve_matrix_path
from .link_model import SystemParams
from .tsr_optimizer import solve_tsr


def check_channels(X):
    """Coerce `X` to a :class:`ChannelSet`.

    Accepts a ChannelSet, a mapping with keys ``h``, ``g``, ``f``, or a
    3-sequence ``(h, g, f)``. For time switching `f` is ignored and may
    be omitted.
    """
    if isinstance(X, ChannelSet):
        return X
    if isinstance(X, dict):
        g = X["g"]
        return ChannelSet(h=X["h"], g=g, f=X.get("f", np.zeros_like(np.atleast_1d(g))))
    try:
        parts = list(X)
    except TypeError:
        raise TypeError(f"expected ChannelSet or (h, g, f), got {type(X).__name__}") from None
    if len(parts) == 2:
        parts.append(np.zeros_like(np.atleast_1d(parts[1])))
    if len(parts) != 3:
        raise ValueError(f"expected (h, g, f), got a sequence of length {len(parts)}")
    return ChannelSet(h=parts[0], g=parts[1], f=parts[2])


def _check_powers(X):
    ps = np.asarray(X, dtype=float)
    if ps.ndim > 1:
        ps = ps.reshape(-1)
    if not np.all(np.isfinite(ps)) or np.any(ps < 0):
        raise ValueError("source powers must be finite and non-negative")
    return np.atleast_1d(ps)


class _RelayOptimizer(BaseEstimator):

    def __init__(self, ps=1.0, sigma_r2=1e-12, sigma_d2=1e-12, eta=0.8, t_block=1.0):
        self.ps = ps
        self.sigma_r2 = sigma_r2
        self.sigma_d2 = sigma_d2
        self.eta = eta
        self.t_block = t_block

    def _params(self, ps=None):
        return SystemParams(ps=self.ps if ps is None else float(ps), sigma_r2=self.sigma_r2,
                            sigma_d2=self.sigma_d2, eta=self.eta, t_block=self.t_block)

    def fit(self, X, y=None):
        self.channels_ = check_channels(X)
        self.solution_ = self._solve(self._params(), self.channels_)
        self._store(self.solution_)
        return self

    def predict(self, X):
        """Optimal throughput (bps/Hz) at each source power in `X` (watts)."""
        check_is_fitted(self, "solution_")
        return np.array([self._solve(self._params(p), self.channels_).rate
                         for p in _check_powers(X)])

    def score(self, X=None, y=None):
        check_is_fitted(self, "solution_")
        return self.rate_


class FullDuplexRelayOptimizer(_RelayOptimizer):
    """Optimal relay power and beamformer with self-energy recycling.

    Parameters
    ----------
    ps, sigma_r2, sigma_d2 : float
        Source power and noise powers in watts.
    eta : float
        Harvesting efficiency in (0, 1].
    t_block : float
        Block duration in seconds.
    method : {"closed_form", "matrix"}
        Closed-form solution or the matrix reformulation.

    Attributes
    ----------
    pr_star_ : float
    v_r_star_ : ndarray of complex
    gamma2_star_ : float
    rate_ : float
    solution_ : FdSolution
    """

    def __init__(self, ps=1.0, sigma_r2=1e-12, sigma_d2=1e-12, eta=0.8, t_block=1.0,
                 method="closed_form"):
        super().__init__(ps=ps, sigma_r2=sigma_r2, sigma_d2=sigma_d2, eta=eta, t_block=t_block)
        self.method = method

    def _solve(self, params, channels):
        if self.method == "closed_form":
            return solve_closed_form(params, channels)
        if self.method == "matrix":
            return solve_matrix_path(params, channels)
        raise ValueError(f"method must be 'closed_form' or 'matrix', got {self.method!r}")

    def _store(self, sol):
        self.pr_star_ = sol.pr_star
        self.v_r_star_ = sol.v_r_star
        self.gamma2_star_ = sol.gamma2_star
        self.rate_ = sol.rate


class TimeSwitchingRelayOptimizer(_RelayOptimizer):
    """Optimal harvesting time fraction for the time-switching benchmark.

    Attributes
    ----------
    alpha_star_ : float
    pr_ : float
    rate_ : float
    solution_ : TsrSolution
    """

    def __init__(self, ps=1.0, sigma_r2=1e-12, sigma_d2=1e-12, eta=0.8, t_block=1.0, tol=1e-12):
        super().__init__(ps=ps, sigma_r2=sigma_r2, sigma_d2=sigma_d2, eta=eta, t_block=t_block)
        self.tol = tol

    def _solve(self, params, channels):
        return solve_tsr(params, channels.h, channels.g, tol=self.tol)

    def _store(self, sol):
        self.alpha_star_ = sol.alpha_star
        self.pr_ = sol.pr
        self.rate_ = sol.rate
