"""Command-line entry point."""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from sumfunc import __version__
from sumfunc.api.commands import build_command, run_command, verify_command
from sumfunc.config import settings


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sumfunc",
        description="Exact arithmetic function tables and summatory-function experiments.",
    )
    parser.add_argument("--version", action="version", version=f"sumfunc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", help="Build a table and store it in the cache")
    build.add_argument("--kind", required=True)
    build.add_argument("--limit", type=int, required=True)
    build.add_argument("--segment", type=int, default=None)
    build.add_argument("--constant", type=int, default=1)
    build.add_argument("--cache", type=Path, default=settings.cache_dir)
    build.add_argument("--threads", type=int, default=None)

    run = sub.add_parser("run", help="Run a named experiment")
    run.add_argument("--experiment", required=True)
    run.add_argument("--config", type=Path, default=None)
    run.add_argument("--out", type=Path, default=None, help="Output directory")
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--threads", type=int, default=None)
    run.add_argument("--kind", default=None)
    run.add_argument("--limit", type=int, default=None)
    run.add_argument("--cache", type=Path, default=None)

    verify = sub.add_parser("verify", help="Check a table against the trial-division oracle")
    verify.add_argument("--kind", required=True)
    verify.add_argument("--limit", type=int, required=True)
    verify.add_argument("--up-to", type=int, required=True)
    verify.add_argument("--samples", type=int, default=0)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--segment", type=int, default=None)
    verify.add_argument("--threads", type=int, default=None)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments and dispatch to a command handler.

    Returns:
        Process exit code (0 ok, 1 expectation failed, 2 usage, 3 I/O or integrity)
    """
    # Configure logging
    logging.basicConfig(
        level=settings.log_level.upper(),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )
    args = _parser().parse_args(argv)

    if args.command == "build":
        return build_command(
            args.kind,
            args.limit,
            args.cache,
            segment=args.segment,
            constant=args.constant,
            threads=args.threads,
        )
    if args.command == "run":
        overrides = {
            "out_dir": args.out,
            "seed": args.seed,
            "threads": args.threads,
            "kind": args.kind,
            "limit": args.limit,
            "cache_dir": args.cache,
        }
        return run_command(args.experiment, args.config, overrides)
    return verify_command(
        args.kind,
        args.limit,
        args.up_to,
        samples=args.samples,
        seed=args.seed,
        segment=args.segment,
        threads=args.threads,
    )


if __name__ == "__main__":
    sys.exit(main())
