"""Command-line entry point: sweeps, single-state reports and self-checks.

    exstates sweep --family EBS --k 0,1,2 --M 10 --observables mandel_q
    exstates report --family ENBS --k 1 --eta 0.5 --M 1
    exstates preset fig3 --out fig3.csv
    exstates verify full
"""

import argparse
import dataclasses
import json
import logging
import sys
from typing import List, Optional

import pyrallis

from pyexstates.errors import ExStatesError, UsageError
from sweeps.config import OBSERVABLES, OUTPUT_FORMATS, EtaGrid, SweepConfig
from sweeps.presets import PRESETS
from sweeps.run_sweep import render_report, report_point, run_sweep
from sweeps.verify import VerifyLevel, verify_suite
from utils.datasets import write_dataset

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY_FAILED = 2


class ArgumentParser(argparse.ArgumentParser):
    """argparse that raises UsageError instead of exiting with status 2."""

    def error(self, message):
        raise UsageError(message)


def _k_list(text: str) -> List[int]:
    try:
        return [int(k) for k in text.split(",") if k.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"--k expects a comma separated list of integers, got {text!r}"
        ) from None


def _name_list(text: str) -> List[str]:
    return [name.strip() for name in text.split(",") if name.strip()]


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument(
        "--verbose", action="store_true", help="Log at DEBUG level"
    )
    common.add_argument(
        "--quiet",
        action="store_true",
        help="Only log warnings and hide the progress bar",
    )

    output = ArgumentParser(add_help=False)
    output.add_argument("--format", choices=OUTPUT_FORMATS, default=None)
    output.add_argument(
        "--out", default=None, help="Write here instead of to stdout"
    )
    output.add_argument("--tail-tol", type=float, default=None)

    parser = ArgumentParser(
        prog="exstates",
        description="Photon statistics of excited binomial and excited "
        "negative binomial states.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    sweep = commands.add_parser(
        "sweep", parents=[common, output], help="Sweep eta for several k"
    )
    sweep.add_argument("--config", default=None, help="JSON SweepConfig file")
    sweep.add_argument("--family", default=None, help="BS, NBS, EBS or ENBS")
    sweep.add_argument("--k", type=_k_list, default=None, help="e.g. 0,1,2,3")
    sweep.add_argument("--M", type=int, default=None)
    sweep.add_argument("--eta-start", type=float, default=None)
    sweep.add_argument("--eta-stop", type=float, default=None)
    sweep.add_argument("--eta-count", type=int, default=None)
    sweep.add_argument(
        "--observables",
        type=_name_list,
        default=None,
        help=f"Comma separated subset of {','.join(OBSERVABLES)}",
    )

    preset = commands.add_parser(
        "preset", parents=[common, output], help="Run a named figure sweep"
    )
    preset.add_argument("name", choices=sorted(PRESETS))

    report = commands.add_parser(
        "report", parents=[common], help="All observables of one state"
    )
    report.add_argument("--family", required=True)
    report.add_argument("--k", type=int, default=0)
    report.add_argument("--eta", type=float, required=True)
    report.add_argument("--M", type=int, required=True)
    report.add_argument("--format", choices=["text", "json"], default="text")
    report.add_argument("--tail-tol", type=float, default=None)

    verify = commands.add_parser(
        "verify", parents=[common], help="Run the self-check suite"
    )
    verify.add_argument(
        "level",
        nargs="?",
        default=VerifyLevel.FAST.value,
        choices=[level.value for level in VerifyLevel],
    )
    return parser


def load_config(path: str) -> SweepConfig:
    """Decode a JSON file mirroring SweepConfig."""
    try:
        with open(path) as f:
            raw = json.load(f)
    except (OSError, json.JSONDecodeError) as err:
        raise UsageError(f"cannot read config {path}: {err}") from err
    try:
        return pyrallis.decode(SweepConfig, raw)
    except Exception as err:
        raise UsageError(f"invalid config {path}: {err}") from err


def sweep_config_from_args(args: argparse.Namespace) -> SweepConfig:
    """Config file (if any) overridden by explicit flags."""
    config = load_config(args.config) if args.config else SweepConfig()
    overrides = {
        "family": args.family.upper() if args.family else None,
        "k_values": args.k,
        "M": args.M,
        "observables": args.observables,
    }
    grid = dataclasses.replace(
        config.eta_grid,
        **{
            name: value
            for name, value in (
                ("start", args.eta_start),
                ("stop", args.eta_stop),
                ("count", args.eta_count),
            )
            if value is not None
        },
    )
    config = dataclasses.replace(
        config,
        eta_grid=grid,
        **{name: value for name, value in overrides.items() if value is not None},
    )
    return _apply_output_flags(config, args)


def _apply_output_flags(config: SweepConfig, args) -> SweepConfig:
    if args.format is not None:
        config.output_format = args.format
    if args.out is not None:
        config.out = args.out
    if args.tail_tol is not None:
        config.tail_tolerance = args.tail_tol
    return config.validate()


def _sweep(config: SweepConfig, quiet: bool) -> int:
    df = run_sweep(config, progress=not quiet)
    write_dataset(df, config.output_format, config.out, sys.stdout)
    if config.out:
        logger.info("Wrote %d rows to %s", len(df), config.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    return _sweep(sweep_config_from_args(args), args.quiet)


def cmd_preset(args) -> int:
    logger.info("Running preset %s", args.name)
    config = _apply_output_flags(PRESETS[args.name](), args)
    return _sweep(config, args.quiet)


def cmd_report(args) -> int:
    kwargs = {} if args.tail_tol is None else {"tail_tolerance": args.tail_tol}
    try:
        report = report_point(
            args.family.upper(), args.k, args.eta, args.M, **kwargs
        )
    except (ExStatesError, ValueError) as err:
        raise UsageError(
            f"family={args.family} k={args.k} eta={args.eta} M={args.M}: {err}"
        ) from err
    sys.stdout.write(render_report(report, args.format))
    return EXIT_OK


def cmd_verify(args) -> int:
    summary = verify_suite(VerifyLevel(args.level))
    sys.stdout.write(summary.render())
    return EXIT_OK if summary.passed else EXIT_VERIFY_FAILED


COMMANDS = {
    "sweep": cmd_sweep,
    "preset": cmd_preset,
    "report": cmd_report,
    "verify": cmd_verify,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as err:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"exstates: error: {err}\n")
        return EXIT_USAGE

    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    logging.basicConfig(level=level)

    try:
        return COMMANDS[args.command](args)
    except UsageError as err:
        sys.stderr.write(f"exstates: error: {err}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
