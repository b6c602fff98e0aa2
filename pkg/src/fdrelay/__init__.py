"""Full-duplex wireless-powered AF relaying with self-energy recycling.

Optimal relay power and beamforming for the full-duplex protocol, the
optimal time split of the time-switching benchmark, and brute-force
oracles that certify both.
"""

from .channels import (
    ChannelSet,
    GeometryConfig,
    db_to_linear,
    dbm_to_watts,
    effective_angle_cos,
    linear_to_db,
    make_loop_channel,
    make_los_channel,
)
from .config import ConfigError, RunConfig, load_config
from .estimators import FullDuplexRelayOptimizer, TimeSwitchingRelayOptimizer
from .exceptions import DegenerateChannelError, UnboundedPowerError
from .fd_optimizer import (
    FdSolution,
    siso_optimal_power,
    solve_closed_form,
    solve_matrix_path,
)
from .harness import SweepRow, run_sweep, run_verify
from .link_model import (
    SystemParams,
    end_to_end_snr,
    feasible_max_power,
    first_hop_snr,
    gamma_d_direct,
    harvested_energy_bound,
    mrt_vector,
    second_hop_snr,
    throughput,
)
from .oracle import GridSpec, OracleResult, grid_search_p1, scan_p2
from .tsr_optimizer import TsrSolution, f_z, solve_tsr, solve_z_star, tsr_constant

__version__ = "0.1.0"
