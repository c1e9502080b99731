"""
Quadrature-domain toolkit (command-line entry point)

Key rules:
- Every subcommand lives in commands.py (single source of truth).
- JSON goes to stdout or --out; logs go to stderr (and --log-file).
- Exit codes: 0 ok, 1 verification failure, 2 malformed input,
  3 numeric failure, 4 unknown catalog entry, 5 unwritable output.

Usage:
    python qd.py analyze quarter-cubed
    python qd.py render half-cubed --res 512 --max-iter 60 --out out/
    python qd.py verify --all --out out/verify.json
    python qd.py trees --max-vertices 9
    python qd.py group-maps nielsen --samples 256
    python qd.py catalog
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from commands import COMMANDS, CliConfig, run_command
from config import MAX_TREE_VERTICES, RENDER_RES, SEED
from core.errors import QDError
from utils.helpers import parse_bounds
from utils.logging import log_error, set_log_file


def _bounds(text: str):
    try:
        return parse_bounds(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qd",
        description="Quadrature domains, Schwarz reflections and their escape pictures.",
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("source", nargs="?", help="catalog name or domain-spec JSON path")
    parser.add_argument("--map", dest="map_path", help="domain-spec JSON path")
    parser.add_argument("--catalog", dest="catalog_name", help="catalog entry name")
    parser.add_argument("--bounds", type=_bounds, help="view rectangle cx,cy,w,h")
    parser.add_argument("--res", type=int, default=RENDER_RES)
    parser.add_argument("--max-iter", type=int)
    parser.add_argument("--tol", type=float, help="boundary band tolerance override")
    parser.add_argument("--out", help="output file or directory")
    parser.add_argument("--seed", type=int, default=SEED)
    parser.add_argument("--supersample", type=int, default=1)
    parser.add_argument("--all", action="store_true", help="verify every catalog quadrature map")
    parser.add_argument("--max-vertices", type=int, default=MAX_TREE_VERTICES)
    parser.add_argument("--samples", type=int, default=256)
    parser.add_argument("--log-file", help="mirror log lines into this file")
    return parser


def config_from_args(args: argparse.Namespace) -> CliConfig:
    return CliConfig(
        command=args.command,
        source=args.source,
        map_path=args.map_path,
        catalog_name=args.catalog_name,
        bounds=args.bounds,
        res=args.res,
        max_iter=args.max_iter,
        tol=args.tol,
        out=args.out,
        seed=args.seed,
        supersample=args.supersample,
        all=args.all,
        max_vertices=args.max_vertices,
        samples=args.samples,
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad flags, 0 on --help
        return int(e.code or 0)

    set_log_file(args.log_file)
    cfg = config_from_args(args)
    if cfg.res < 1 or cfg.supersample < 1 or (cfg.max_iter is not None and cfg.max_iter < 1):
        log_error("[CLI] --res, --supersample and --max-iter must be positive")
        return 2
    try:
        return run_command(cfg)
    except QDError as e:
        log_error(f"[CLI] {type(e).__name__}: {e}")
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
