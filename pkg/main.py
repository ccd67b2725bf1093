"""
casimir-td: finite-temperature Casimir forces from damped time-domain runs.

    casimir-td run configs/plates_1d.cfg --jobs 4
    casimir-td weights configs/plates_1d.cfg
    casimir-td reference configs/piston_2d.cfg

Exit status: 0 on success, 1 for an unreadable or invalid configuration,
2 when a computation failed.
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv

from app.commands import cmd_reference, cmd_run, cmd_weights
from app.config import parse_config
from core.errors import CasimirError, ConfigError


# Load environment variables
load_dotenv()

# Configure logging
logging.basicConfig(
    level=getattr(logging, os.getenv("LOG_LEVEL", "INFO")),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("config", type=Path, help="Run configuration file")
    common.add_argument(
        "--no-timestamp",
        action="store_true",
        help="Omit the '# generated' line so tables are byte-identical across runs",
    )

    parser = argparse.ArgumentParser(
        prog="casimir-td",
        description="Casimir forces at nonzero temperature from conductive time-domain runs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", parents=[common], help="Compute forces for every sweep point")
    run.add_argument(
        "--jobs",
        type=int,
        default=int(os.getenv("CASIMIR_JOBS", "1")),
        help="Worker processes (default: $CASIMIR_JOBS or 1)",
    )
    run.add_argument("--debug-dumps", action="store_true", help="Dump raw field responses and traces")

    sub.add_parser("weights", parents=[common], help="Tabulate frequency and time-domain weights")

    sub.add_parser("reference", parents=[common], help="Tabulate Matsubara series of the grid oracle")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    try:
        config = parse_config(args.config.read_text())
    except OSError as e:
        logger.error(f"cannot read {args.config}: {e}")
        return 1
    except ConfigError as e:
        logger.error(f"{args.config}: {e}")
        return 1

    timestamp = not args.no_timestamp
    try:
        if args.command == "run":
            return cmd_run(config, jobs=args.jobs, timestamp=timestamp, debug_dumps=args.debug_dumps)
        if args.command == "weights":
            return cmd_weights(config, timestamp=timestamp)
        return cmd_reference(config, timestamp=timestamp)
    except CasimirError as e:
        logger.error(f"{args.command} failed: {e}", exc_info=True)
        return 2


if __name__ == "__main__":
    sys.exit(main())
