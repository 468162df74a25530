"""Command-line entry point: run a configured market experiment.

    simulate --config market.yaml --runs 10 --seed 42 --out results/

Exit codes: 0 on success, 1 on configuration errors, 2 when output
cannot be written. Set DATAMARKET_LOG=info (or debug) for progress logs.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from typing import List, Optional

from .config import load_config
from .errors import ConfigError, IoError
from .experiment import emit_csv, run_experiment

log = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simulate",
        description="Run a data-market simulation and write per-run, aggregate and ledger CSVs.",
    )
    parser.add_argument("--config", required=True, metavar="PATH", help="YAML market configuration")
    parser.add_argument("--runs", type=int, default=10, metavar="N", help="independent runs (default: 10)")
    parser.add_argument("--seed", type=int, default=None, metavar="U64", help="base seed (default: the config's)")
    parser.add_argument("--out", default="out", metavar="DIR", help="output directory (default: ./out)")
    parser.add_argument("--horizon", type=int, default=None, metavar="T", help="override the configured horizon")
    parser.add_argument(
        "--no-accrual",
        action="store_true",
        help="keep owned-dataset value out of spendable funds",
    )
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = getattr(logging, os.environ.get("DATAMARKET_LOG", "warning").upper(), logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        config = load_config(args.config)
        if args.horizon is not None:
            config.horizon = args.horizon
        if args.no_accrual:
            config.accrual_to_budget = False
        config.validate()
        if args.seed is not None and not 0 <= args.seed < 2**64:
            raise ConfigError("--seed", f"must be in [0, 2**64), got {args.seed}")
        base_seed = args.seed if args.seed is not None else config.seed
        log.info("running %d runs of %s (base seed %d)", args.runs, args.config, base_seed)
        result = run_experiment(config, args.runs, base_seed)
        paths = emit_csv(result, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except IoError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2
    for name in ("runs.csv", "aggregate.csv", "ledger.csv"):
        print(paths[name])
    return 0


if __name__ == "__main__":
    sys.exit(main())
