"""Entry point: ``levy.py <command> --config <file> [options]``."""

import argparse
import logging
import sys

from hilbertlevy.cli import commands
from hilbertlevy.cli.config import FORMATS, load_config
from hilbertlevy.errors import ConfigError, HilbertLevyError


logger = logging.getLogger(__name__)


def _probe(text):
    try:
        return [float(v) for v in text.split(",")]
    except ValueError as error:
        raise argparse.ArgumentTypeError(
            f"probe must be comma-separated numbers: {text}") from error


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="YAML configuration or JSON report")
    common.add_argument("--seed", type=int, default=None, help="overrides run.seed (u64)")
    common.add_argument("--out", default=None, help="output directory")
    common.add_argument("--threads", type=int, default=1, help="Monte Carlo worker threads")
    common.add_argument("--format", type=str.lower, choices=FORMATS, default=None,
                        help="output format")
    common.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], type=str.upper,
                        help="logging level")

    parser = argparse.ArgumentParser(
        description="Simulate and verify subordinated Lévy processes in truncated Hilbert spaces.")
    subparsers = parser.add_subparsers(dest="command", required=True)

    exponent = subparsers.add_parser("exponent", parents=[common], help="print rho(u)")
    exponent.add_argument("--u", type=_probe, action="append", default=None,
                          help="probe as flat comma-separated coefficients, repeatable")
    subparsers.add_parser("simulate", parents=[common], help="write samples or paths")
    subparsers.add_parser("verify", parents=[common], help="run the check battery")
    classify = subparsers.add_parser("classify", parents=[common],
                                     help="print the integrability classification")
    classify.add_argument("--json", action="store_true", help="machine-readable output")
    triplet = subparsers.add_parser("triplet", parents=[common],
                                    help="print the characteristics of X")
    triplet.add_argument("--radii", type=float, nargs="+", default=None,
                         help="radii of the printed tail masses")
    return parser


def run(args):
    config = load_config(args.config, args.seed)
    formats = (args.format,) if args.format else None
    if args.command == "exponent":
        return commands.cmd_exponent(config, args.u, args.format or "csv", sys.stdout)
    if args.command == "simulate":
        return commands.cmd_simulate(config, args.out, formats, args.threads)
    if args.command == "verify":
        return commands.cmd_verify(config, args.out, args.threads, sys.stdout)
    if args.command == "classify":
        return commands.cmd_classify(config, args.json, sys.stdout)
    return commands.cmd_triplet(config, args.radii, sys.stdout)


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        return run(args)
    except (ConfigError, HilbertLevyError, ValueError) as error:
        logger.error("%s", error)
        sys.stderr.write(f"error: {error}\n")
        return commands.EXIT_CONFIG
    except OSError as error:
        logger.error("%s", error)
        sys.stderr.write(f"error: {error}\n")
        return commands.EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
