"""Command-line interface: ``lossy-twinbeam <subcommand> [options]``.

Exit status is 0 on success, 2 for configuration errors and 3 for numerical
failures such as hitting the overflow cap.
"""

from __future__ import annotations

import argparse
import sys

from . import commands
from .config import ConfigError, RunConfig, load_config, parse_override
from .dynamics import MomentState
from .errors import ParameterError, TwinBeamError
from .gaussian import covariance_from_moments, is_physical
from .reproduce import FIGURE_DEFAULTS, FIGURES, reproduce
from .tables import write_table, write_text

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_OBJECTIVES = {"rate": "asymptotic_rate", "intensity": "final_intensity"}


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="flat YAML run configuration")
    common.add_argument("--out", metavar="PATH", help="output file (stdout when omitted)")
    common.add_argument("--format", choices=("csv", "json"), help="output format")
    common.add_argument("--model", choices=("quantum", "classical"))
    common.add_argument("--objective", choices=tuple(_OBJECTIVES))
    common.add_argument(
        "--set", action="append", default=[], metavar="KEY=VALUE",
        help="override one config key (repeatable)",
    )
    common.add_argument(
        "--echo-config", metavar="PATH",
        help="write the effective configuration as YAML to PATH",
    )

    parser = argparse.ArgumentParser(
        prog="lossy-twinbeam",
        description="Twin-beam generation in a lossy parametric medium.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", parents=[common], help="trajectory along z")
    p.add_argument("--with-eof", action="store_true", help="also compute the EoF column")

    p = sub.add_parser("sweep", parents=[common], help="sweep delta_k or gamma_b")
    p.add_argument("--with-gamma-opt", action="store_true", help="add the gamma_opt column")

    sub.add_parser("optimize-gamma", parents=[common], help="optimal idler loss")
    sub.add_parser("threshold", parents=[common], help="mismatch beyond which loss helps")

    p = sub.add_parser("entanglement", parents=[common], help="entanglement of one state")
    p.add_argument("--with-eof", action="store_true", help="accepted for symmetry; EoF is always reported")
    for name in ("n-a", "n-b", "m-re", "m-im"):
        p.add_argument(f"--{name}", type=float, metavar="X", help="explicit moment (all four or none)")

    p = sub.add_parser("reproduce", parents=[common], help="figure data tables and plot script")
    p.add_argument("figure", choices=FIGURES)
    return parser


def _figure_keys(args) -> set:
    if args.command != "reproduce":
        return set()
    return set(FIGURE_DEFAULTS[args.figure]) | {"gamma_max", "entropy_base"}


def _build_config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    run_keys = set(RunConfig.__dataclass_fields__)
    extra = _figure_keys(args) - run_keys
    changes = {k: v for k, v in map(parse_override, args.set) if k not in extra}
    if args.model:
        changes["model"] = args.model
    if args.objective:
        changes["objective"] = _OBJECTIVES[args.objective]
    if args.format:
        changes["format"] = args.format
    if args.out:
        changes["output"] = args.out
    return cfg.with_(**changes) if changes else cfg


def _explicit_moments(args):
    values = [args.n_a, args.n_b, args.m_re, args.m_im]
    given = [v is not None for v in values]
    if not any(given):
        return None
    if not all(given):
        raise ConfigError("entanglement: give all of --n-a, --n-b, --m-re, --m-im or none")
    state = MomentState(values[0], values[1], complex(values[2], values[3]))
    if not is_physical(covariance_from_moments(state)):
        raise ConfigError("entanglement: moments violate the uncertainty principle")
    return state


def run(args) -> int:
    cfg = _build_config(args)
    if args.echo_config:
        write_text(args.echo_config, cfg.to_yaml())
    if args.command == "reproduce":
        outdir = cfg.output or "."
        keys = _figure_keys(args)
        overrides = {k: v for k, v in map(parse_override, args.set) if k in keys}
        written = reproduce(args.figure, outdir, cfg.format, overrides)
        for path in written:
            print(path)
        return EXIT_OK
    if args.command == "evolve":
        table = commands.cmd_evolve(cfg, with_eof=args.with_eof)
    elif args.command == "sweep":
        table = commands.cmd_sweep(cfg, with_gamma_opt=args.with_gamma_opt)
    elif args.command == "optimize-gamma":
        table = commands.cmd_optimize_gamma(cfg)
    elif args.command == "threshold":
        table = commands.cmd_threshold(cfg)
    else:
        table = commands.cmd_entanglement(cfg, _explicit_moments(args))
    write_table(table, cfg.output, cfg.format)
    return EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return run(args)
    except (ConfigError, ParameterError) as exc:
        print(f"lossy-twinbeam: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TwinBeamError as exc:
        print(f"lossy-twinbeam: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
