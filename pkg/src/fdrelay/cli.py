"""Command-line front end: ``fdrelay {solve-fd,solve-tsr,sweep,verify}``."""

import argparse
import sys

from .channels import ChannelSet
from .config import ConfigError, RunConfig, load_config
from .exceptions import UnboundedPowerError
from .fd_optimizer import solve_closed_form
from .harness import run_sweep, run_verify, solve_point, write_csv
from .tsr_optimizer import solve_tsr


def _echo_config(config, stream):
    for key, value in config.to_flat_dict().items():
        print(f"# {key} = {value}", file=stream)


def _write_rows(rows, path):
    if path:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            write_csv(rows, fh)
    else:
        write_csv(rows, sys.stdout)


def _fmt_vector(v):
    return "[" + ", ".join(f"{z.real:+.9g}{z.imag:+.9g}j" for z in v) + "]"


def cmd_solve_fd(config, args):
    _echo_config(config, sys.stdout)
    params = config.system_params(args.ps_dbm)
    channels = ChannelSet.from_geometry(config.geometry)
    try:
        sol = solve_closed_form(params, channels)
    except UnboundedPowerError as exc:
        print(f"unbounded: {exc}")
        return 2
    print(f"ps_dbm       = {_ps(config, args):.9g}")
    print(f"gamma1       = {sol.gamma1:.9g}")
    print(f"cos_theta    = {sol.cos_theta:.9g}")
    print(f"alpha1       = {sol.alpha1:.9g}")
    print(f"alpha2       = {sol.alpha2:.9g}")
    print(f"pr_star_w    = {sol.pr_star:.9g}")
    print(f"v_r_star     = {_fmt_vector(sol.v_r_star)}")
    print(f"gamma2_star  = {sol.gamma2_star:.9g}")
    print(f"gamma_d      = {sol.gamma_d:.9g}")
    print(f"rate_bpshz   = {sol.rate:.9g}")
    if sol.near_singular:
        print("warning: near-singular regime (1 + 1/gamma1 - eta*||f||^2 < 1e-12)")
    if args.out:
        _write_rows([solve_point(config, _ps(config, args), channels)], args.out)
    return 0


def cmd_solve_tsr(config, args):
    _echo_config(config, sys.stdout)
    params = config.system_params(args.ps_dbm)
    channels = ChannelSet.from_geometry(config.geometry)
    sol = solve_tsr(params, channels.h, channels.g, tol=config.bisection_tol)
    print(f"ps_dbm       = {_ps(config, args):.9g}")
    print(f"gamma1       = {sol.gamma1:.9g}")
    print(f"c_const      = {sol.c_const:.9g}")
    print(f"z_star       = {sol.z_star:.12g}")
    print(f"alpha_star   = {sol.alpha_star:.9g}")
    print(f"pr_w         = {sol.pr:.9g}")
    print(f"gamma_d      = {sol.gamma_d:.9g}")
    print(f"rate_bpshz   = {sol.rate:.9g}")
    if args.out:
        _write_rows([solve_point(config, _ps(config, args), channels)], args.out)
    return 0


def cmd_sweep(config, args):
    _echo_config(config, sys.stderr)
    rows = run_sweep(config)
    _write_rows(rows, args.out or config.output_path)
    return 0


def cmd_verify(config, args):
    _echo_config(config, sys.stdout)
    report = run_verify(config, args.instances, seed=args.seed)
    print(report.format())
    return 0 if report.passed else 1


def _ps(config, args):
    return config.ps_dbm if args.ps_dbm is None else args.ps_dbm


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat YAML configuration file (defaults if omitted)")
    common.add_argument("--seed", type=int, default=0, help="master random seed")
    common.add_argument("--out", help="CSV output path (stdout if omitted)")

    parser = argparse.ArgumentParser(prog="fdrelay", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func, help_ in (
        ("solve-fd", cmd_solve_fd, "optimal full-duplex power and beamformer at one source power"),
        ("solve-tsr", cmd_solve_tsr, "optimal time-switching split at one source power"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--ps-dbm", type=float, help="source power in dBm (overrides ps_dbm)")
        p.set_defaults(func=func)
    p = sub.add_parser("sweep", parents=[common], help="throughput of both protocols over source power")
    p.set_defaults(func=cmd_sweep)
    p = sub.add_parser("verify", parents=[common], help="certify the closed forms against brute force")
    p.add_argument("--instances", type=int, default=100, help="number of random instances")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config) if args.config else RunConfig()
    except (OSError, ConfigError) as exc:
        print(f"fdrelay: config error: {exc}", file=sys.stderr)
        return 2
    if getattr(args, "instances", 1) < 1:
        print("fdrelay: --instances must be >= 1", file=sys.stderr)
        return 2
    return args.func(config, args)


if __name__ == "__main__":
    sys.exit(main())
