"""Source-power sweeps, CSV output and randomized verification runs."""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .channels import ChannelSet
from .exceptions import UnboundedPowerError
from .fd_optimizer import solve_closed_form, solve_matrix_path
from .link_model import feasible_max_power
from .oracle import grid_search_p1, is_bounded, random_instance, scan_p2
from .tsr_optimizer import solve_tsr, stationarity_residual, tsr_rate

CSV_HEADER = ["ps_dbm", "rate_fd_bpshz", "rate_tsr_bpshz", "gamma2_star",
              "pr_fd_w", "alpha_star", "pr_tsr_w", "regime"]


@dataclass(frozen=True)
class SweepRow:
    ps_dbm: float
    rate_fd: float
    rate_tsr: float
    gamma2_star: float
    pr_fd_watts: float
    alpha_star: float
    pr_tsr_watts: float
    regime_flag: str

    def as_csv_fields(self):
        nums = (self.ps_dbm, self.rate_fd, self.rate_tsr, self.gamma2_star,
                self.pr_fd_watts, self.alpha_star, self.pr_tsr_watts)
        return [format(x, ".9g") for x in nums] + [self.regime_flag]


def solve_point(config, ps_dbm, channels=None):
    """Both protocols at one source power, as a :class:`SweepRow`."""
    channels = channels or ChannelSet.from_geometry(config.geometry)
    params = config.system_params(ps_dbm)
    tsr = solve_tsr(params, channels.h, channels.g, tol=config.bisection_tol)
    try:
        fd = solve_closed_form(params, channels)
    except UnboundedPowerError:
        return SweepRow(ps_dbm, math.nan, tsr.rate, math.nan, math.nan,
                        tsr.alpha_star, tsr.pr, "unbounded")
    regime = "near-singular" if fd.near_singular else "ok"
    return SweepRow(ps_dbm, fd.rate, tsr.rate, fd.gamma2_star, fd.pr_star,
                    tsr.alpha_star, tsr.pr, regime)


def run_sweep(config):
    """One :class:`SweepRow` per source-power grid point, ascending in power."""
    channels = ChannelSet.from_geometry(config.geometry)
    return [solve_point(config, ps, channels) for ps in config.sweep.points()]


def write_csv(rows, stream):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.as_csv_fields())


@dataclass
class VerifyReport:
    """Outcome of :func:`run_verify`.

    Deviations are maxima over checked instances. `failures` and
    `skipped` entries carry the per-instance seed, which regenerates the
    instance via ``random_instance(np.random.default_rng(seed), ...)``.
    """

    num_requested: int
    num_checked: int = 0
    max_oracle_rel_dev: float = 0.0
    max_oracle_excess: float = -math.inf
    max_cross_path_rel_dev: float = 0.0
    min_beamformer_overlap: float = 1.0
    max_tsr_grid_excess: float = -math.inf
    max_stationarity_residual: float = 0.0
    failures: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def format(self):
        lines = [
            f"instances requested : {self.num_requested}",
            f"instances checked   : {self.num_checked}",
            f"instances skipped   : {len(self.skipped)}",
            f"max |closed - oracle| / closed          : {self.max_oracle_rel_dev:.3e}",
            f"max (oracle - closed) / closed          : {self.max_oracle_excess:.3e}",
            f"max |closed - matrix path| / closed     : {self.max_cross_path_rel_dev:.3e}",
            f"min |<v_closed, v_matrix>|              : {self.min_beamformer_overlap:.12f}",
            f"max TSR grid value - R(alpha*)          : {self.max_tsr_grid_excess:.3e}",
            f"max TSR stationarity residual           : {self.max_stationarity_residual:.3e}",
        ]
        for item in self.skipped:
            lines.append(f"SKIP seed={item['seed']}: {item['reason']}")
        for item in self.failures:
            lines.append(f"FAIL seed={item['seed']} [{item['check']}]: {item['detail']}")
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines)


ORACLE_RTOL = 1e-3
CROSS_PATH_RTOL = 1e-9
TSR_GRID_POINTS = 10_000
TSR_GRID_ATOL = 1e-9
STATIONARITY_ATOL = 1e-8


def _verify_instance(report, seed, params, ch, config, fd_solver):
    def fail(check, detail):
        report.failures.append({"seed": seed, "check": check, "detail": detail,
                                "ps": params.ps, "eta": params.eta,
                                "h": ch.h.tolist(), "g": ch.g.tolist(), "f": ch.f.tolist()})

    closed = fd_solver(params, ch)
    oracle = grid_search_p1(params, ch, config.grid)
    rel = abs(closed.gamma2_star - oracle.best_value) / closed.gamma2_star
    excess = (oracle.best_value - closed.gamma2_star) / closed.gamma2_star
    report.max_oracle_rel_dev = max(report.max_oracle_rel_dev, rel)
    report.max_oracle_excess = max(report.max_oracle_excess, excess)
    if rel > ORACLE_RTOL:
        fail("oracle", f"closed {closed.gamma2_star:.12g} vs oracle {oracle.best_value:.12g} (rel {rel:.3e})")
    if oracle.best_value - closed.gamma2_star > oracle.certified_gap_bound + 1e-12 * closed.gamma2_star:
        fail("oracle-gap", f"oracle beats closed form by more than the gap bound {oracle.certified_gap_bound:.3e}")
    pr_cap = feasible_max_power(params, ch.h, ch.f, closed.v_r_star)
    if closed.pr_star > pr_cap * (1 + 1e-9):
        fail("feasibility", f"pr_star {closed.pr_star:.6g} exceeds energy-causal limit {pr_cap:.6g}")

    matrix = solve_matrix_path(params, ch)
    cross = abs(closed.gamma2_star - matrix.gamma2_star) / closed.gamma2_star
    overlap = abs(np.vdot(closed.v_r_star, matrix.v_r_star))
    report.max_cross_path_rel_dev = max(report.max_cross_path_rel_dev, cross)
    report.min_beamformer_overlap = min(report.min_beamformer_overlap, overlap)
    if cross > CROSS_PATH_RTOL or overlap < 1 - CROSS_PATH_RTOL:
        fail("cross-path", f"gamma2 rel dev {cross:.3e}, beamformer overlap {overlap:.15f}")

    tsr = solve_tsr(params, ch.h, ch.g, tol=config.bisection_tol)
    scan = scan_p2(tsr.gamma1, tsr.c_const, TSR_GRID_POINTS)
    r_star = tsr_rate(tsr.alpha_star, tsr.gamma1, tsr.c_const)
    grid_excess = scan.best_value - r_star
    resid = abs(stationarity_residual(tsr.alpha_star, tsr.gamma1, tsr.c_const))
    report.max_tsr_grid_excess = max(report.max_tsr_grid_excess, grid_excess)
    report.max_stationarity_residual = max(report.max_stationarity_residual, resid)
    if grid_excess > TSR_GRID_ATOL:
        fail("tsr-grid", f"grid value exceeds R(alpha*) by {grid_excess:.3e}")
    if resid > STATIONARITY_ATOL:
        fail("tsr-stationarity", f"residual {resid:.3e}")


def run_verify(config, num_random_instances, seed=0, distribution=None, fd_solver=solve_closed_form):
    """Check the closed forms against the oracles on random instances.

    Parameters
    ----------
    config : RunConfig
        Supplies the oracle grid and bisection tolerance.
    num_random_instances : int
    seed : int
        Master seed; each instance gets its own derived seed.
    distribution : InstanceDistribution, optional
    fd_solver : callable
        Full-duplex solver under test, ``(params, channels) -> FdSolution``.

    Returns
    -------
    VerifyReport
    """
    if num_random_instances < 1:
        raise ValueError("num_random_instances must be >= 1")
    master = np.random.default_rng(seed)
    report = VerifyReport(num_requested=num_random_instances)
    for _ in range(num_random_instances):
        inst_seed = int(master.integers(2**63 - 1))
        params, ch = random_instance(np.random.default_rng(inst_seed), distribution,
                                     reject_unbounded=False)
        if not is_bounded(params, ch):
            report.skipped.append({"seed": inst_seed,
                                   "reason": "unbounded regime (eta*||f||^2 >= 1 + 1/gamma1)"})
            continue
        _verify_instance(report, inst_seed, params, ch, config, fd_solver)
        report.num_checked += 1
    return report
