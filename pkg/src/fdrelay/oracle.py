"""Brute-force reference solutions used to certify the closed forms.

The relay problem is searched over unit beamformers in ``span{g, f}``,
parameterized modulo a global phase as
``v = cos(t) u1 + sin(t) e^{j phi} u2`` with ``t in [0, pi/2]`` and
``phi in [0, 2 pi)``. For each beamformer the tight relay power comes
straight from the energy-causality constraint, so nothing here depends
on the closed-form solution.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_scalar
from .channels import ChannelSet, make_loop_channel, make_los_channel
from .exceptions import UnboundedPowerError
from .link_model import SystemParams, link_budget, tight_power
from .tsr_optimizer import tsr_rate

_ROWS_PER_CHUNK = 64


@dataclass(frozen=True)
class GridSpec:
    """Resolution of the beamformer grid search.

    `angular_resolution` and `phase_resolution` are the coarse grid
    steps in `t` and `phi`. Each refinement round re-grids a window of
    one coarse step around the incumbent at a 10x finer step.
    """

    angular_resolution: float = 1e-3
    phase_resolution: float = 1e-3
    refine_rounds: int = 2

    def __post_init__(self):
        check_scalar(self.angular_resolution, "angular_resolution", low=0.0, low_inclusive=False)
        check_scalar(self.phase_resolution, "phase_resolution", low=0.0, low_inclusive=False)
        if self.refine_rounds < 0:
            raise ValueError(f"refine_rounds must be >= 0, got {self.refine_rounds}")


@dataclass(frozen=True)
class OracleResult:
    best_value: float
    best_point: object = field(repr=False)
    certified_gap_bound: float
    num_evaluations: int = 0


def _span_basis(g, f):
    """Orthonormal basis of ``span{g, f}`` with ``u1`` along `g`."""
    u1 = g / np.linalg.norm(g)
    r = f - u1 * np.vdot(u1, f)
    nr = np.linalg.norm(r)
    if nr <= 1e-12 * max(np.linalg.norm(f), np.finfo(float).tiny):
        return u1, None
    return u1, r / nr


class _BeamformerObjective:
    """Second-hop SNR at the tight power, evaluated on (t, phi) grids."""

    def __init__(self, params, ch, u1, u2):
        self.budget = link_budget(params, ch.h)
        self.sigma_d2 = params.sigma_d2
        g, f = ch.g, ch.f
        self.g1, self.g2 = np.vdot(g, u1), np.vdot(g, u2)
        self.f1, self.f2 = np.vdot(f, u1), np.vdot(f, u2)
        self.u1, self.u2 = u1, u2

    def __call__(self, t, phi):
        ct = np.cos(t)[:, None]
        st = np.sin(t)[:, None]
        rot = np.exp(1j * phi)[None, :]
        gv = ct * self.g1 + st * rot * self.g2
        fv = ct * self.f1 + st * rot * self.f2
        pr = tight_power(self.budget, np.abs(fv))
        pr = np.atleast_2d(pr)
        if np.isinf(pr).any():
            raise UnboundedPowerError("non-contractive energy loop on the search grid")
        return pr * np.abs(gv) ** 2 / self.sigma_d2

    def point(self, t, phi):
        return math.cos(t) * self.u1 + math.sin(t) * np.exp(1j * phi) * self.u2


def _lipschitz(budget, g_norm, f_norm, sigma_d2):
    # |d gamma2| <= L (|dt| + |dphi|), from ||dv/dt|| = 1 and ||dv/dphi|| <= 1
    a = budget.harvest_scale
    x_max = math.sqrt(a / budget.a_power) * f_norm
    if x_max >= 1.0:
        return math.inf
    pr_max = a / (1.0 - x_max) ** 2
    dpr = 2.0 * a * math.sqrt(a / budget.a_power) / (1.0 - x_max) ** 3 * f_norm
    return (dpr * g_norm**2 + pr_max * 2.0 * g_norm**2) / sigma_d2


def _argmax_first(values):
    # row-major argmax: lowest t first, then lowest phi
    idx = int(np.argmax(values))
    return np.unravel_index(idx, values.shape), float(values.flat[idx])


def grid_search_p1(params, ch, spec=None, full_sphere=False):
    """Exhaustive search for the optimal relay beamformer and power.

    Parameters
    ----------
    params : SystemParams
    ch : ChannelSet
    spec : GridSpec, optional
    full_sphere : bool
        Search the whole unit sphere of C^2 (standard basis) instead of
        ``span{g, f}``. Only available for two relay antennas.

    Returns
    -------
    OracleResult
        `best_point` is the unit beamformer of the incumbent,
        `best_value` its second-hop SNR, and `certified_gap_bound`
        bounds how far the true optimum may exceed `best_value`.

    Raises
    ------
    UnboundedPowerError
        If any grid point sees a non-contractive energy loop.
    """
    spec = spec or GridSpec()
    g, f = ch.g, ch.f
    if full_sphere:
        if g.size != 2:
            raise ValueError("full-sphere search is only implemented for two relay antennas")
        u1, u2 = np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)
    else:
        u1, u2 = _span_basis(g, f)

    budget = link_budget(params, ch.h)
    if u2 is None:
        # span is one-dimensional: a single beamformer modulo phase
        pr = tight_power(budget, abs(np.vdot(f, u1)))
        if math.isinf(pr):
            raise UnboundedPowerError("non-contractive energy loop")
        value = pr * abs(np.vdot(g, u1)) ** 2 / params.sigma_d2
        return OracleResult(best_value=value, best_point=u1, certified_gap_bound=0.0,
                            num_evaluations=1)

    objective = _BeamformerObjective(params, ch, u1, u2)
    nt = int(math.ceil((math.pi / 2) / spec.angular_resolution)) + 1
    nphi = int(math.ceil((2 * math.pi) / spec.phase_resolution))
    t_grid = np.linspace(0.0, math.pi / 2, nt)
    phi_grid = np.arange(nphi) * (2 * math.pi / nphi)
    ht, hphi = t_grid[1] - t_grid[0], phi_grid[1] - phi_grid[0]

    best_value, best_t, best_phi = -math.inf, 0.0, 0.0
    for start in range(0, nt, _ROWS_PER_CHUNK):
        block = objective(t_grid[start:start + _ROWS_PER_CHUNK], phi_grid)
        (i, j), value = _argmax_first(block)
        if value > best_value:
            best_value, best_t, best_phi = value, t_grid[start + i], phi_grid[j]
    coarse_best = best_value
    evaluations = nt * nphi

    step_t, step_phi = ht, hphi
    offsets = np.arange(-10, 11) / 10.0
    for _ in range(spec.refine_rounds):
        ts = np.clip(best_t + offsets * step_t, 0.0, math.pi / 2)
        ps = np.mod(best_phi + offsets * step_phi, 2 * math.pi)
        order_t, order_p = np.argsort(ts, kind="stable"), np.argsort(ps, kind="stable")
        ts, ps = ts[order_t], ps[order_p]
        (i, j), value = _argmax_first(objective(ts, ps))
        evaluations += ts.size * ps.size
        if value > best_value:
            best_value, best_t, best_phi = value, ts[i], ps[j]
        step_t, step_phi = step_t / 10.0, step_phi / 10.0

    lip = _lipschitz(budget, float(np.linalg.norm(g)), float(np.linalg.norm(f)), params.sigma_d2)
    gap = max(0.0, coarse_best + 0.5 * lip * (ht + hphi) - best_value)
    return OracleResult(
        best_value=float(best_value),
        best_point=objective.point(best_t, best_phi),
        certified_gap_bound=gap,
        num_evaluations=evaluations,
    )


def scan_p2(gamma1, c, num_points=10_000):
    """Dense scan of the TSR rate over ``alpha in (0, 1)`` plus one refinement round.

    The gap bound uses concavity of the rate in `alpha`: the true
    maximum lies within one grid step of the incumbent and cannot
    exceed it by more than the larger neighbouring drop.
    """
    if num_points < 100:
        raise ValueError(f"num_points must be >= 100, got {num_points}")
    alphas = np.arange(1, num_points + 1) / (num_points + 1)
    values = tsr_rate(alphas, gamma1, c)
    k = int(np.argmax(values))

    lo = alphas[k - 1] if k > 0 else 0.0
    hi = alphas[k + 1] if k + 1 < num_points else 1.0
    fine = np.linspace(lo, hi, num_points + 2)[1:-1]
    fine_values = tsr_rate(fine, gamma1, c)
    kf = int(np.argmax(fine_values))
    best_alpha, best_value = float(fine[kf]), float(fine_values[kf])
    if values[k] >= best_value:
        best_alpha, best_value = float(alphas[k]), float(values[k])
        grid, vals, idx = alphas, values, k
    else:
        grid, vals, idx = fine, fine_values, kf

    left = vals[idx - 1] if idx > 0 else 0.0
    right = vals[idx + 1] if idx + 1 < grid.size else 0.0
    gap = max(0.0, best_value - left, best_value - right)
    return OracleResult(best_value=best_value, best_point=best_alpha, certified_gap_bound=gap,
                        num_evaluations=num_points + fine.size)


@dataclass(frozen=True)
class InstanceDistribution:
    """Ranges for random verification instances (angles in degrees, losses in dB)."""

    num_source_antennas: int = 2
    num_relay_tx_antennas: int = 2
    d_over_lambda: float = 0.5
    aod_range: tuple = (-90.0, 90.0)
    path_loss_range: tuple = (-80.0, -40.0)
    beta_rr_range: tuple = (-30.0, -10.0)
    ps_dbm_range: tuple = (20.0, 50.0)
    eta_range: tuple = (0.1, 1.0)
    sigma2_dbm: float = -90.0


def random_instance(rng, dist=None, reject_unbounded=True, max_tries=1000):
    """Draw ``(SystemParams, ChannelSet)`` from `dist` using generator `rng`."""
    dist = dist or InstanceDistribution()
    for _ in range(max_tries):
        aod_h, aod_g = rng.uniform(*dist.aod_range, size=2)
        beta_sr, beta_rd = rng.uniform(*dist.path_loss_range, size=2)
        beta_rr = rng.uniform(*dist.beta_rr_range)
        ps_dbm = rng.uniform(*dist.ps_dbm_range)
        eta = rng.uniform(*dist.eta_range)
        sigma2 = 10.0 ** ((dist.sigma2_dbm - 30.0) / 10.0)
        params = SystemParams(ps=10.0 ** ((ps_dbm - 30.0) / 10.0), sigma_r2=sigma2,
                              sigma_d2=sigma2, eta=float(eta))
        n = dist.num_relay_tx_antennas
        ch = ChannelSet(
            h=make_los_channel(dist.num_source_antennas, dist.d_over_lambda, float(aod_h), float(beta_sr)),
            g=make_los_channel(n, dist.d_over_lambda, float(aod_g), float(beta_rd)),
            f=make_loop_channel(n, float(beta_rr)),
        )
        if not reject_unbounded or is_bounded(params, ch):
            return params, ch
    raise RuntimeError(f"no bounded-regime instance in {max_tries} draws")


def is_bounded(params, ch):
    """True when ``eta ||f||^2 < 1 + 1/gamma1`` (finite optimal relay power)."""
    budget = link_budget(params, ch.h)
    if budget.gamma1 == 0.0:
        return True
    return params.eta * float(np.vdot(ch.f, ch.f).real) < 1.0 + 1.0 / budget.gamma1
