"""Closed-form link quantities of the two-hop AF relay.

Everything here works at the level of SNR and energy statistics; no
symbol-level waveforms are simulated.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from ._validation import as_complex_vector, check_scalar, check_unit_norm


@dataclass(frozen=True)
class SystemParams:
    """Source power, noise powers and harvester settings, all in linear units.

    Attributes
    ----------
    ps : float
        Source transmit power in watts.
    sigma_r2, sigma_d2 : float
        Noise power at the relay and at the destination, in watts.
    eta : float
        Energy-harvesting efficiency in (0, 1].
    t_block : float
        Block duration in seconds. Optima do not depend on it.
    """

    ps: float = 1.0
    sigma_r2: float = 1e-12
    sigma_d2: float = 1e-12
    eta: float = 0.8
    t_block: float = 1.0

    def __post_init__(self):
        check_scalar(self.ps, "ps", low=0.0)
        check_scalar(self.sigma_r2, "sigma_r2", low=0.0, low_inclusive=False)
        check_scalar(self.sigma_d2, "sigma_d2", low=0.0, low_inclusive=False)
        check_scalar(self.eta, "eta", low=0.0, high=1.0, low_inclusive=False)
        check_scalar(self.t_block, "t_block", low=0.0, low_inclusive=False)


@dataclass(frozen=True)
class LinkBudget:
    gamma1: float
    a_power: float
    harvest_scale: float


def link_budget(params, h):
    """First-hop SNR, received power ``A`` and directly harvested power ``a``."""
    h2 = _norm2(as_complex_vector(h, "h"))
    received = params.ps * h2
    return LinkBudget(
        gamma1=received / params.sigma_r2,
        a_power=received + params.sigma_r2,
        harvest_scale=params.eta * received,
    )


def _norm2(x):
    return float(np.vdot(x, x).real)


def mrt_vector(h):
    """Maximal-ratio transmit beamformer ``h / ||h||``."""
    h = as_complex_vector(h, "h", allow_zero=False)
    return h / np.linalg.norm(h)


def first_hop_snr(params, h):
    return params.ps * _norm2(as_complex_vector(h, "h")) / params.sigma_r2


def second_hop_snr(pr, v_r, g, sigma_d2):
    """SNR of the relay-to-destination hop, ``P_r |g^H v_r|^2 / sigma_d^2``."""
    pr = check_scalar(pr, "pr", low=0.0)
    v_r = check_unit_norm(v_r)
    g = as_complex_vector(g, "g")
    return pr * abs(np.vdot(g, v_r)) ** 2 / sigma_d2


def end_to_end_snr(gamma1, gamma2):
    """AF end-to-end SNR ``g1 g2 / (g1 + g2 + 1)``. Works on arrays."""
    gamma1 = np.asarray(gamma1, dtype=float)
    gamma2 = np.asarray(gamma2, dtype=float)
    out = gamma1 * gamma2 / (gamma1 + gamma2 + 1.0)
    return float(out) if out.ndim == 0 else out


def gamma_d_direct(params, h, g, pr, v_r):
    """End-to-end SNR at the destination from the received-signal model.

    ``P_s ||h||^2 / (sigma_r^2 + sigma_d^2 A / (P_r |g^H v_r|^2))``.
    Returns 0 when no signal power reaches the destination; if that is
    because the beamformer is orthogonal to `g` while ``pr > 0`` a
    RuntimeWarning is issued.
    """
    pr = check_scalar(pr, "pr", low=0.0)
    v_r = check_unit_norm(v_r)
    g = as_complex_vector(g, "g")
    budget = link_budget(params, h)
    forward = pr * abs(np.vdot(g, v_r)) ** 2
    if forward == 0.0:
        if pr > 0.0:
            warnings.warn("beamformer is orthogonal to g; gamma_d = 0", RuntimeWarning, stacklevel=2)
        return 0.0
    received = budget.gamma1 * params.sigma_r2
    return received / (params.sigma_r2 + params.sigma_d2 * budget.a_power / forward)


def throughput(gamma_d):
    """Two-phase AF throughput ``0.5 log2(1 + gamma_d)`` in bps/Hz."""
    out = 0.5 * np.log2(1.0 + np.asarray(gamma_d, dtype=float))
    return float(out) if out.ndim == 0 else out


def harvested_energy_bound(params, h, f, pr, v_r):
    """Energy harvested by the relay per block, including the recycled loop energy.

    This is the upper bound attained when the source's energy signal is
    phase-aligned with the looped-back relay signal. Receiver noise is
    not harvested.
    """
    pr = check_scalar(pr, "pr", low=0.0)
    v_r = check_unit_norm(v_r)
    f = as_complex_vector(f, "f")
    budget = link_budget(params, h)
    loop = np.sqrt(pr / budget.a_power) * abs(np.vdot(f, v_r))
    return 0.5 * params.t_block * budget.harvest_scale * (1.0 + loop) ** 2


def tight_power(budget, loop_gain):
    """Largest relay power meeting energy causality for a given ``|f^H v_r|``.

    Solves ``P = a (1 + sqrt(P/A) |f^H v_r|)^2`` for the larger-is-infeasible
    root. Accepts arrays of `loop_gain`; entries whose loop is not
    contractive return ``inf``.
    """
    a = budget.harvest_scale
    x = np.sqrt(a / budget.a_power) * np.asarray(loop_gain, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(x < 1.0, a / (1.0 - x) ** 2, np.inf)
    return float(out) if out.ndim == 0 else out


def feasible_max_power(params, h, f, v_r):
    """Maximum relay power allowed by energy causality for beamformer `v_r`.

    Returns
    -------
    float
        The tight power in watts, or ``math.inf`` when the loop is not
        contractive (``eta |f^H v_r|^2 >= 1 + 1/gamma1``) and every power
        is feasible.
    """
    v_r = check_unit_norm(v_r)
    f = as_complex_vector(f, "f")
    return tight_power(link_budget(params, h), abs(np.vdot(f, v_r)))
