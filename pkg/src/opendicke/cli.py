"""Command-line entry point: ``opendicke {build,diag,converge,scan,calibrate,run}``."""
from __future__ import annotations

import argparse
import logging
import sys

from . import pipeline
from .errors import DickeError
from .pipeline import RunConfig

COMMANDS = {
    "build": pipeline.cmd_build,
    "diag": pipeline.cmd_diag,
    "converge": pipeline.cmd_converge,
    "scan": pipeline.cmd_scan,
    "calibrate": pipeline.cmd_calibrate,
    "run": pipeline.run_all,
}


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", metavar="PATH", help="JSON run configuration")
    p.add_argument("--gamma", type=float, help="atom-field coupling")
    p.add_argument("--nmax", type=int, help="photon-number cutoff")
    p.add_argument("--two-j", type=int, dest="two_j", help="twice the total spin")
    p.add_argument("--sector", choices=("+", "-", "full"), help="parity sector")
    p.add_argument("--delta", type=float, help="tail-weight tolerance")
    p.add_argument("--window", type=int, help="eigenvalues per window")
    p.add_argument("--step", type=int, help="window stride (0: single window)")
    p.add_argument("--seed", type=int, help="random seed (calibration)")
    p.add_argument("--trials", type=int, help="calibration trials per ensemble")
    p.add_argument("--out", metavar="DIR", help="output directory")
    p.add_argument("--no-cache", action="store_true", help="recompute cached artifacts")
    p.add_argument("-q", "--quiet", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="opendicke", description="Spectral pipeline for the open Dicke model."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        _common(sub.add_parser(name, help=(fn.__doc__ or "").splitlines()[0]))
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Config file (or defaults) overridden by explicit flags."""
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    model = {
        k: v for k, v in (("gamma", args.gamma), ("n_max", args.nmax), ("two_j", args.two_j))
        if v is not None
    }
    changes = {
        k: v for k, v in (
            ("sector", args.sector), ("delta", args.delta), ("window_size", args.window),
            ("window_step", args.step), ("seed", args.seed), ("trials", args.trials),
            ("output_dir", args.out),
        )
        if v is not None
    }
    if args.no_cache:
        changes["cache_policy"] = "refresh"
    if model:
        changes["model"] = {**cfg.model.to_dict(), **model}
    return cfg.replace(**changes) if changes else cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(levelname)s %(message)s",
    )
    try:
        cfg = resolve_config(args)
        out = COMMANDS[args.command](cfg)
    except DickeError as exc:
        logging.getLogger("opendicke").error("%s: %s", type(exc).__name__, exc)
        return exc.exit_code
    if isinstance(out, dict):
        for name, path in out.items():
            print(f"{name}\t{path}")
    else:
        print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
