"""CLI entry point for genhamilton.

Commands:
- analyze-group: verdict from exact vertex degrees of permutation groups
- analyze-chartable: verdict from primitive permutation characters
- oracle: cross-check against a search on the explicit generating graph
- l2q: the L2(q) degree checks on character table data
- derive-chartable: character table data from a group and its maximal subgroups
"""

from __future__ import annotations

import argparse
import json
import sys

from genhamilton import __version__


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per pipeline."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("files", nargs="+", metavar="FILE", help="input files (JSON or YAML)")
    common.add_argument("--cap", type=int, dest="group_order_cap", help="group order cap")
    common.add_argument("--quotient-cap", type=int, dest="quotient_cap", help="cap on |G/G'|")
    common.add_argument("--oracle-cap", type=int, dest="oracle_cap", help="oracle group order cap")
    common.add_argument("--budget", type=int, dest="search_budget", help="search backtrack budget")
    common.add_argument(
        "--json", action="store_const", const=True, dest="json_output", help="emit JSON reports"
    )
    common.add_argument(
        "--quiet-posa0",
        action="store_const",
        const=True,
        dest="quiet_posa0",
        help='suppress "Posa for 0th closure" lines',
    )
    common.add_argument("--jobs", type=int, help="files processed concurrently")
    common.add_argument("--log-level", dest="log_level", help="DEBUG, INFO, WARNING, ...")
    common.add_argument("--config", dest="config_file", help="YAML configuration file")

    parser = argparse.ArgumentParser(
        prog="genhamilton",
        description="Hamiltonicity criteria for generating graphs of finite groups",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    subparsers.add_parser("analyze-group", parents=[common], help="exact degrees from a group file")
    subparsers.add_parser(
        "analyze-chartable", parents=[common], help="character bounds from a table file"
    )
    subparsers.add_parser("oracle", parents=[common], help="explicit graph cross-check")
    subparsers.add_parser("l2q", parents=[common], help="L2(q) degree checks")
    subparsers.add_parser(
        "derive-chartable", parents=[common], help="table data from maximal subgroups"
    )
    return parser


def main(argv: list[str] | None = None) -> None:
    """Entry point for the genhamilton command."""
    args = build_parser().parse_args(argv)

    from pydantic import ValidationError

    from genhamilton.cli.commands import run_batch
    from genhamilton.core.config import load_config
    from genhamilton.core.utils.logger import logger, setup_logging

    try:
        config = load_config(
            group_order_cap=args.group_order_cap,
            quotient_cap=args.quotient_cap,
            oracle_cap=args.oracle_cap,
            search_budget=args.search_budget,
            json_output=args.json_output,
            quiet_posa0=args.quiet_posa0,
            jobs=args.jobs,
            log_level=args.log_level,
            config_file=args.config_file,
        )
    except ValidationError as e:
        print(f"Error: invalid configuration: {e}", file=sys.stderr)
        sys.exit(2)

    setup_logging(config.log_level)
    logger.debug(f"Running {args.command} on {len(args.files)} file(s)")

    try:
        outcomes = run_batch(args.command, args.files, config)
    except KeyboardInterrupt:
        print("\nInterrupted", file=sys.stderr)
        sys.exit(130)

    exit_code = 0
    payloads = []
    for outcome in outcomes:
        if outcome.report is None:
            print(f"Error: {outcome.path}: {outcome.error}", file=sys.stderr)
            exit_code = exit_code or outcome.exit_code
            continue
        if config.json_output:
            payloads.append(outcome.report.payload)
        elif outcome.report.text:
            print(outcome.report.text)

    if config.json_output:
        print(json.dumps(payloads, sort_keys=True, indent=2))
    sys.exit(exit_code)


if __name__ == "__main__":
    main()
