"""Optimal time split for the time-switching relaying (TSR) benchmark.

A fraction ``alpha`` of the block is spent harvesting, the rest is split
evenly between the two AF hops. The relay beamformer is fixed to the
matched filter ``g / ||g||``.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._validation import as_complex_vector, check_scalar
from .link_model import link_budget

MAX_BISECTION_ITER = 200


@dataclass(frozen=True)
class TsrSolution:
    alpha_star: float
    z_star: float
    c_const: float
    gamma1: float
    pr: float
    gamma_d: float
    rate: float


def tsr_constant(params, h, g):
    """``C = (1 + gamma1) sigma_d^2 / (2 eta P_s ||h||^2 ||g||^2)``."""
    h = as_complex_vector(h, "h", allow_zero=False)
    g = as_complex_vector(g, "g", allow_zero=False)
    budget = link_budget(params, h)
    received = budget.gamma1 * params.sigma_r2
    if received == 0.0:
        raise ValueError("C is undefined for zero source power")
    g2 = float(np.vdot(g, g).real)
    return (1.0 + budget.gamma1) * params.sigma_d2 / (2.0 * params.eta * received * g2)


def f_z(z, gamma1, c):
    """Auxiliary function whose root in ``(1, 1 + gamma1)`` gives the optimal split.

    ``gamma1 C z ln z + (C - 1) z^2 - z (gamma1 C + 2C - 2 gamma1 - 2)
    - (gamma1 + 1)(gamma1 + 1 - C)``

    Evaluated in extended precision after expanding the polynomial part
    around ``w = z - 1``, where it reads
    ``(C - 1) w^2 + gamma1 (2 - C) w - gamma1^2``. This avoids the
    cancellation of the raw form when ``C`` dwarfs ``gamma1``.
    """
    w = np.asarray(z, dtype=np.longdouble) - 1
    g1 = np.longdouble(gamma1)
    cl = np.longdouble(c)
    out = g1 * cl * (1 + w) * np.log1p(w) + (cl - 1) * w * w + g1 * (2 - cl) * w - g1 * g1
    out = out.astype(float)
    return float(out) if out.ndim == 0 else out


def bisect(func, lo, hi, rtol=1e-12, max_iter=MAX_BISECTION_ITER):
    """Shrink a sign-change bracket of an increasing function.

    Returns the final ``(lo, hi)`` with ``func(lo) < 0 <= func(hi)``.
    Stops once ``hi - lo <= rtol * |hi|`` or after `max_iter` halvings.
    """
    f_lo, f_hi = func(lo), func(hi)
    if not (f_lo < 0.0 < f_hi):
        raise RuntimeError(f"no sign change on [{lo}, {hi}]: f = ({f_lo}, {f_hi})")
    for _ in range(max_iter):
        if hi - lo <= rtol * abs(hi):
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if func(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return lo, hi


def solve_z_star(gamma1, c, tol=1e-12):
    """Root of :func:`f_z` on ``(1, 1 + gamma1)`` by bisection."""
    gamma1 = check_scalar(gamma1, "gamma1", low=0.0, low_inclusive=False)
    c = check_scalar(c, "c", low=0.0, low_inclusive=False)
    tol = check_scalar(tol, "tol", low=0.0, low_inclusive=False)
    lo, hi = bisect(lambda z: f_z(z, gamma1, c), 1.0, 1.0 + gamma1, rtol=tol)
    return 0.5 * (lo + hi)


def alpha_from_z(z, gamma1, c):
    return (z - 1.0) * c / ((z - 1.0) * c + 1.0 + gamma1 - z)


def z_from_alpha(alpha, gamma1, c):
    return 1.0 + gamma1 * alpha / (alpha + c * (1.0 - alpha))


def tsr_snr(alpha, gamma1, c):
    """End-to-end SNR ``gamma1 / (1 + C (1 - alpha) / alpha)``; 0 at ``alpha = 0``."""
    alpha = np.asarray(alpha, dtype=float)
    out = gamma1 * alpha / (alpha + c * (1.0 - alpha))
    return float(out) if out.ndim == 0 else out


def tsr_rate(alpha, gamma1, c):
    """TSR throughput ``((1 - alpha)/2) log2(1 + gamma_d(alpha))`` in bps/Hz."""
    alpha = np.asarray(alpha, dtype=float)
    out = 0.5 * (1.0 - alpha) * np.log2(1.0 + tsr_snr(alpha, gamma1, c))
    return float(out) if out.ndim == 0 else out


def stationarity_residual(alpha, gamma1, c):
    """Left minus right side of the first-order optimality condition of the TSR rate."""
    d = alpha + c * (1.0 - alpha)
    lhs = gamma1 * c * (1.0 - alpha) / ((d + gamma1 * alpha) * d)
    rhs = math.log1p(gamma1 * alpha / d)
    return lhs - rhs


def solve_tsr(params, h, g, tol=1e-12):
    """Optimal TSR time split, relay power and throughput.

    Raises
    ------
    ValueError
        On zero channels or zero source power.
    """
    budget = link_budget(params, h)
    c = tsr_constant(params, h, g)
    gamma1 = budget.gamma1
    z = solve_z_star(gamma1, c, tol)
    alpha = alpha_from_z(z, gamma1, c)
    gamma_d = tsr_snr(alpha, gamma1, c)
    return TsrSolution(
        alpha_star=alpha,
        z_star=z,
        c_const=c,
        gamma1=gamma1,
        pr=2.0 * alpha * budget.harvest_scale / (1.0 - alpha),
        gamma_d=gamma_d,
        rate=0.5 * (1.0 - alpha) * math.log2(1.0 + gamma_d),
    )
