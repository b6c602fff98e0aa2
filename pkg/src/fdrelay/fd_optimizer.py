"""Joint relay power and beamforming for full-duplex relaying with self-energy recycling.

Two independent routes to the same optimum are provided:

* :func:`solve_closed_form` evaluates the closed-form beamformer
  ``v = alpha1 e^{j arg(g^H f)} g + alpha2 f`` directly and is the
  production path.
* :func:`solve_matrix_path` rewrites the energy constraint as a ball
  ``||F^{1/2} v - b||^2 <= beta`` with ``F = I - a f_hat f_hat^H`` and
  maximizes ``|g^H v|`` over it with explicit rank-one matrix functions.
  It exists to cross-check the closed form.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .channels import effective_angle_cos
from .exceptions import DegenerateChannelError, UnboundedPowerError
from .link_model import (
    end_to_end_snr,
    link_budget,
    second_hop_snr,
    throughput,
)

NEAR_SINGULAR_EPS = 1e-12


@dataclass(frozen=True)
class FdSolution:
    """Optimal operating point of the full-duplex relay.

    `near_singular` is set when ``1 + 1/gamma1 - eta ||f||^2`` is positive
    but below ``1e-12``; the numbers are valid but very large.
    """

    pr_star: float
    v_r_star: np.ndarray = field(repr=False)
    gamma1: float
    gamma2_star: float
    gamma_d: float
    rate: float
    alpha1: float
    alpha2: float
    cos_theta: float
    near_singular: bool = False


@dataclass(frozen=True)
class MatrixPathIntermediates:
    f_hat: np.ndarray
    f_matrix: np.ndarray
    f_inv: np.ndarray
    f_inv_sqrt: np.ndarray
    f_sqrt: np.ndarray
    b_vec: np.ndarray
    beta_scalar: float
    psi: float
    v_unscaled: np.ndarray


def _check_channels(ch):
    if not np.any(ch.h):
        raise DegenerateChannelError("source-relay channel h is zero")
    if not np.any(ch.g):
        raise DegenerateChannelError("relay-destination channel g is zero")


def _loop_margin(params, budget, f_norm2):
    """``1 + 1/gamma1 - eta ||f||^2``; positive in the bounded regime."""
    return 1.0 + 1.0 / budget.gamma1 - params.eta * f_norm2


def _align_phase(v, f, g):
    # rotate so that f^H v is real non-negative (g^H v when f^H v vanishes)
    ref = np.vdot(f, v)
    if ref == 0:
        ref = np.vdot(g, v)
    if ref == 0:
        return v
    return v * np.exp(-1j * np.angle(ref))


def _no_power_solution(params, ch):
    g = ch.g
    return FdSolution(
        pr_star=0.0,
        v_r_star=g / np.linalg.norm(g),
        gamma1=0.0,
        gamma2_star=0.0,
        gamma_d=0.0,
        rate=0.0,
        alpha1=0.0,
        alpha2=0.0,
        cos_theta=effective_angle_cos(ch.f, g),
    )


def _finish(params, ch, v, alpha1, alpha2, cos_theta, margin):
    pr = float(np.vdot(v, v).real)
    v_r = _align_phase(v / math.sqrt(pr), ch.f, ch.g)
    gamma1 = link_budget(params, ch.h).gamma1
    gamma2 = second_hop_snr(pr, v_r, ch.g, params.sigma_d2)
    gamma_d = end_to_end_snr(gamma1, gamma2)
    return FdSolution(
        pr_star=pr,
        v_r_star=v_r,
        gamma1=gamma1,
        gamma2_star=gamma2,
        gamma_d=gamma_d,
        rate=throughput(gamma_d),
        alpha1=alpha1,
        alpha2=alpha2,
        cos_theta=cos_theta,
        near_singular=bool(margin < NEAR_SINGULAR_EPS),
    )


def optimal_second_hop_snr(params, h_norm2, g_norm2, f_norm, cos_theta):
    """Optimal second-hop SNR as a function of channel norms and the effective angle.

    Raises
    ------
    UnboundedPowerError
        If ``1 + 1/gamma1 - eta ||f||^2 <= 0``.
    """
    received = params.ps * h_norm2
    if received == 0.0:
        return 0.0
    kappa = 1.0 + params.sigma_r2 / received
    margin = kappa - params.eta * f_norm**2
    if margin <= 0.0:
        raise UnboundedPowerError(f"1 + 1/gamma1 - eta*||f||^2 = {margin:.3e} <= 0")
    sin2 = max(0.0, 1.0 - cos_theta**2)
    bracket = math.sqrt(params.eta) * f_norm * cos_theta + math.sqrt(
        kappa - params.eta * f_norm**2 * sin2
    )
    return (kappa * params.eta * received * g_norm2 * bracket**2
            / (params.sigma_d2 * margin**2))


def solve_closed_form(params, ch):
    """Optimal relay power and beamformer from the closed-form solution.

    Parameters
    ----------
    params : SystemParams
    ch : ChannelSet

    Returns
    -------
    FdSolution

    Raises
    ------
    UnboundedPowerError
        When ``1 + 1/gamma1 - eta ||f||^2 <= 0``: the relay could recycle
        more energy than it spends and no finite power is optimal.
    DegenerateChannelError
        When `h` or `g` is zero.
    """
    _check_channels(ch)
    if params.ps == 0.0:
        return _no_power_solution(params, ch)
    h, g, f = ch.h, ch.g, ch.f
    budget = link_budget(params, h)
    h_norm = float(np.linalg.norm(h))
    g_norm = float(np.linalg.norm(g))
    f_norm = float(np.linalg.norm(f))
    eta = params.eta

    kappa = 1.0 + 1.0 / budget.gamma1
    margin = _loop_margin(params, budget, f_norm**2)
    if margin <= 0.0:
        raise UnboundedPowerError(
            f"1 + 1/gamma1 - eta*||f||^2 = {margin:.3e} <= 0; relay power is unbounded"
        )
    cos_theta = effective_angle_cos(f, g)
    sin2 = max(0.0, 1.0 - cos_theta**2)
    root = math.sqrt(kappa - eta * f_norm**2 * sin2)

    alpha1 = h_norm * math.sqrt(kappa * eta * params.ps) / (g_norm * root)
    alpha2 = (eta * h_norm * math.sqrt(kappa * params.ps) / margin
              * (1.0 + math.sqrt(eta) * f_norm * cos_theta / root))
    phase = np.exp(1j * np.angle(np.vdot(g, f)))
    v = alpha1 * phase * g + alpha2 * f
    return _finish(params, ch, v, alpha1, alpha2, cos_theta, margin)


def _rank_one_power(f_hat, a, p):
    """``F^p`` for ``F = I - a f_hat f_hat^H`` via its rank-one structure.

    ``F^p = I + c f_hat f_hat^H`` with ``1 + c ||f_hat||^2 = (1 - a ||f_hat||^2)^p``.
    """
    n = f_hat.size
    s2 = float(np.vdot(f_hat, f_hat).real)
    if s2 == 0.0:
        return np.eye(n, dtype=np.complex128)
    c = math.expm1(p * math.log1p(-a * s2)) / s2
    return np.eye(n, dtype=np.complex128) + c * np.outer(f_hat, f_hat.conj())


def matrix_path_intermediates(params, ch):
    """Quantities of the ball reformulation, built explicitly.

    Raises
    ------
    UnboundedPowerError
        When ``a ||f_hat||^2 >= 1`` (F is not positive definite).
    """
    _check_channels(ch)
    budget = link_budget(params, ch.h)
    a = budget.harvest_scale
    g = ch.g
    f_hat = ch.f / math.sqrt(budget.a_power)
    loop = a * float(np.vdot(f_hat, f_hat).real)
    if loop >= 1.0:
        raise UnboundedPowerError(f"a*||f_hat||^2 = {loop:.6g} >= 1; F is not positive definite")

    n = g.size
    f_matrix = np.eye(n, dtype=np.complex128) - a * np.outer(f_hat, f_hat.conj())
    f_inv = _rank_one_power(f_hat, a, -1.0)
    f_inv_sqrt = _rank_one_power(f_hat, a, -0.5)
    f_sqrt = _rank_one_power(f_hat, a, 0.5)

    b = a * (f_inv_sqrt @ f_hat)
    beta = a + float(np.vdot(b, b).real)
    proj = np.vdot(g, f_inv_sqrt @ b)
    psi = float(np.angle(proj)) if proj != 0 else 0.0
    w = f_inv_sqrt @ g
    v = a * (f_inv @ f_hat) + math.sqrt(beta) * (f_inv @ g) * np.exp(1j * psi) / np.linalg.norm(w)
    return MatrixPathIntermediates(
        f_hat=f_hat,
        f_matrix=f_matrix,
        f_inv=f_inv,
        f_inv_sqrt=f_inv_sqrt,
        f_sqrt=f_sqrt,
        b_vec=b,
        beta_scalar=beta,
        psi=psi,
        v_unscaled=v,
    )


def solve_matrix_path(params, ch):
    """Same optimum as :func:`solve_closed_form`, via the ball reformulation.

    `alpha1` and `alpha2` are recovered by projecting the unscaled
    optimum onto ``e^{j arg(g^H f)} g`` and `f`; they are NaN when those
    two directions are linearly dependent.
    """
    _check_channels(ch)
    if params.ps == 0.0:
        return _no_power_solution(params, ch)
    mats = matrix_path_intermediates(params, ch)
    budget = link_budget(params, ch.h)
    f, g = ch.f, ch.g
    margin = _loop_margin(params, budget, float(np.vdot(f, f).real))
    alpha1, alpha2 = _span_coefficients(mats.v_unscaled, g, f)
    return _finish(params, ch, mats.v_unscaled, alpha1, alpha2,
                   effective_angle_cos(f, g), margin)


def _span_coefficients(v, g, f):
    basis = np.column_stack([np.exp(1j * np.angle(np.vdot(g, f))) * g, f])
    if np.linalg.matrix_rank(basis) < 2:
        return math.nan, math.nan
    coef, *_ = np.linalg.lstsq(basis, v, rcond=None)
    # the optimum is defined up to a global phase; report magnitudes
    return float(abs(coef[0])), float(abs(coef[1]))


def siso_optimal_power(params, h, f_scalar):
    """Optimal relay power with a single relay transmit antenna.

    ``P_r = a / (1 - sqrt(eta) |f| / sqrt(1 + 1/gamma1))^2`` with
    ``a = eta P_s ||h||^2``.

    Raises
    ------
    UnboundedPowerError
        When ``sqrt(eta) |f| >= sqrt(1 + 1/gamma1)``.
    DegenerateChannelError
        When `h` is zero.
    """
    h = np.atleast_1d(np.asarray(h, dtype=np.complex128))
    if not np.any(h):
        raise DegenerateChannelError("source-relay channel h is zero")
    budget = link_budget(params, h)
    if budget.gamma1 == 0.0:
        return 0.0
    kappa = 1.0 + 1.0 / budget.gamma1
    ratio = math.sqrt(params.eta) * abs(complex(f_scalar)) / math.sqrt(kappa)
    if ratio >= 1.0:
        raise UnboundedPowerError(
            f"sqrt(eta)|f| / sqrt(1 + 1/gamma1) = {ratio:.6g} >= 1; relay power is unbounded"
        )
    return budget.harvest_scale / (1.0 - ratio) ** 2
