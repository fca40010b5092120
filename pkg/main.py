"""
SkinLock command line.

Usage:
    python main.py hn-profiles --config runs/locking.json --out out/locking
    python main.py ssh-crossover --threads 4
    python main.py oracle-check -v
"""

import argparse
import sys
from typing import List, Optional

from skinlock import __version__
from skinlock.commands import COMMANDS
from skinlock.errors import SkinLockError
from skinlock.logging_config import configure_logging
from skinlock.models import RunConfig


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skinlock",
        description="Steady states and natural-orbital locking in nonreciprocal open fermion chains.",
    )
    parser.add_argument('--version', action='version', version=f"skinlock {__version__}")
    parser.add_argument('command', choices=sorted(COMMANDS), help="What to compute")
    parser.add_argument('--config', metavar='PATH', help="JSON run configuration; defaults otherwise")
    parser.add_argument('--out', metavar='DIR', help="Output directory (overrides the config)")
    parser.add_argument('--threads', type=int, metavar='N', help="Worker threads for scans")
    parser.add_argument('--solver', choices=('direct', 'spectral'), help="Steady-state solver")
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help="Log progress (-v) or numerical health (-vv)")
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    """Config file (or defaults) with command-line flags applied on top."""
    config = RunConfig.from_json_file(args.config) if args.config else RunConfig()
    return config.apply_overrides(out_dir=args.out, threads=args.threads, solver=args.solver)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one command.

    Returns:
        0 on success, otherwise the exit code carried by the error:
        1 validation failure, 2 numeric or parameter error, 3 infeasibility
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        config = load_config(args)
        COMMANDS[args.command](config)
    except SkinLockError as e:
        print(f"skinlock {args.command}: {e}", file=sys.stderr)
        return e.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
