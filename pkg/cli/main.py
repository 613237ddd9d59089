#!/usr/bin/env python3

import argparse
import json
import logging
import sys
from typing import Optional, Sequence

from cli.commands import COMMANDS
from cli.commands.output import emit
from cli.config import ParameterResolver, initialize_config, parse_document
from sdof import __version__
from sdof.types import NumberClass, Variant
from shared.errors import ConfigurationError, DomainError, UsageError
from shared.logs import initialize_log


EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2


class CliParser(argparse.ArgumentParser):
    """argparse reports misuse through UsageError instead of exiting with code 2."""

    def error(self, message):
        raise UsageError(message)


def build_parser() -> CliParser:
    parser = CliParser(prog="sdof", description="structured-code secure degrees of freedom toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)

    def subcommand(name: str, help_text: str, output: bool = True) -> CliParser:
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("--config", help="JSON or YAML document with parameter values")
        if output:
            sub.add_argument("--out", help="output file; stdout when omitted")
        return sub

    sweep = subcommand("sweep", "best layered DoF over a sqrt(ab) grid")
    sweep.add_argument("--ab-min", dest="ab_min", type=float)
    sweep.add_argument("--ab-max", dest="ab_max", type=float)
    sweep.add_argument("--steps", type=int)
    sweep.add_argument("--qmax", type=int)
    sweep.add_argument("--variant", choices=[v.value for v in Variant])

    fq = subcommand("fq", "f(Q) against its upper bound")
    fq.add_argument("--qmax", type=int)

    theorem6 = subcommand("theorem6", "optimise the binary digit distributions")
    theorem6.add_argument("--grid", dest="theorem6_grid", type=int)

    rates = subcommand("rates", "structured vs gaussian secrecy rates over powers")
    rates.add_argument("--powers", help="comma-separated powers")
    rates.add_argument("--sqrt-ab", dest="sqrt_ab", type=float)
    rates.add_argument("--b", type=float)
    rates.add_argument("--epsilon", type=float)

    simulate = subcommand("simulate", "Monte Carlo run of the layered scheme")
    simulate.add_argument("--gamma", type=float)
    simulate.add_argument("--p", type=int)
    simulate.add_argument("--q", type=int)
    simulate.add_argument("--b", type=float)
    simulate.add_argument("--layers", type=int)
    simulate.add_argument("--backoff", type=float)
    simulate.add_argument("--trials", type=int)
    simulate.add_argument("--seed", type=int)
    simulate.add_argument("--dither-refinement", dest="dither_refinement", type=int)
    simulate.add_argument("--noiseless", action="store_const", const=True)
    simulate.add_argument("--genie", action="store_const", const=True)

    complex_gain = subcommand("complex", "secrecy rate with a complex cross gain")
    complex_gain.add_argument("--psi", type=float)
    complex_gain.add_argument("--b", type=float)
    complex_gain.add_argument("--p1", type=float)
    complex_gain.add_argument("--p2", type=float)

    plotscript = subcommand("plotscript", "gnuplot script for a CSV table")
    plotscript.add_argument("csv_path")
    plotscript.add_argument("--kind")

    sdof = subcommand("sdof", "best achievable secure DoF for a channel")
    sdof.add_argument("--a", type=float)
    sdof.add_argument("--b", type=float)
    sdof.add_argument("--sign")
    sdof.add_argument("--psi", type=float)
    sdof.add_argument("--number-class", dest="number_class", choices=[c.value for c in NumberClass])
    sdof.add_argument("--qmax", type=int)
    sdof.add_argument("--variant", choices=[v.value for v in Variant])

    leakage = subcommand("leakage", "exact leakage of dithered nested lattice inputs")
    leakage.add_argument("--kmax", dest="leakage_kmax", type=int)
    leakage.add_argument("--refinements", help="comma-separated dither refinements")
    leakage.add_argument("--sign")

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        sys.stderr.write(f"usage error: {e}\n")
        return EXIT_USAGE

    try:
        config = initialize_config()
    except (KeyError, ValueError) as e:
        sys.stderr.write(f"Configuration error: {e}\n")
        return EXIT_USAGE

    initialize_log(config.logging_level)

    flags = {key: value for key, value in vars(args).items() if key not in ("command", "config", "out")}
    try:
        document = parse_document(args.config)
        resolver = ParameterResolver(flags, document, config)
        output = COMMANDS[args.command](resolver)
        emit(output, document.get("out") if args.out is None else args.out)
    except (UsageError, ConfigurationError) as e:
        logging.error(f"action: {args.command} | result: fail | error: {e}")
        sys.stderr.write(f"usage error: {e}\n")
        return EXIT_USAGE
    except DomainError as e:
        logging.error(f"action: {args.command} | result: fail | error: {e}")
        sys.stdout.write(json.dumps({"error": type(e).__name__, "message": str(e)}, sort_keys=True) + "\n")
        return EXIT_DOMAIN

    logging.info(f"action: {args.command} | result: success")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
