"""Multi-run experiment harness and CSV emission.

An experiment is n independent runs of one market config, each under a
seed derived from (base_seed, k). The harness keeps a per-timestamp,
per-buyer trace of every run and aggregates mean and stddev of funds by
(timestamp, predictor), the data behind a funds-per-turn plot.
"""

from __future__ import annotations

import csv
import logging
import statistics
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .config import MarketConfig
from .core import Transaction
from .engine import run
from .errors import ConfigError, IoError
from .money import Money, exact_mean, fmt, to_units
from .rng import substream_seed

log = logging.getLogger(__name__)

RUNS_HEADER = ["run_id", "t", "buyer_id", "predictor", "funds", "owned_count", "purchases"]
AGGREGATE_HEADER = ["t", "predictor", "mean_funds", "std_funds"]
LEDGER_HEADER = ["run_id", "t", "buyer_id", "seller_id", "dataset_id", "price"]


@dataclass(frozen=True)
class RunRow:
    """One buyer's snapshot at the end of one timestamp."""

    t: int
    buyer_id: int
    predictor: str
    funds: Money
    owned_count: int
    purchases: int


@dataclass
class RunRecord:
    """Per-timestamp, per-buyer trace of one run."""

    run_id: int
    rows: List[RunRow]


@dataclass(frozen=True)
class AggregateRow:
    """Funds statistics for one (timestamp, predictor) cell."""

    t: int
    predictor: str
    mean_funds: Money
    std_funds: float


@dataclass
class ExperimentResult:
    records: List[RunRecord]
    aggregate: List[AggregateRow]
    # (run_id, transaction) in settlement order within each run
    ledger: List[Tuple[int, Transaction]]


def run_seed(base_seed: int, k: int) -> int:
    """Seed of run k. Depends only on (base_seed, k), never on how many
    runs were requested, so adding runs never moves earlier ones."""
    return substream_seed(base_seed, "run", k)


def run_experiment(config: MarketConfig, n_runs: int, base_seed: Optional[int] = None) -> ExperimentResult:
    """Execute n_runs independent runs and aggregate funds per turn."""
    if n_runs < 1:
        raise ConfigError("runs", f"need at least one run, got {n_runs}")
    if base_seed is None:
        base_seed = config.seed
    records: List[RunRecord] = []
    ledger: List[Tuple[int, Transaction]] = []
    for k in range(n_runs):
        cfg = replace(config, seed=run_seed(base_seed, k))
        reports, state = run(cfg)
        predictor_of = {b.id: b.predictor.value for b in state.buyers}
        rows: List[RunRow] = []
        for report in reports:
            bought: Dict[int, int] = {}
            for tx in report.transactions:
                bought[tx.buyer] = bought.get(tx.buyer, 0) + 1
            for buyer_id in sorted(report.buyer_funds):
                rows.append(
                    RunRow(
                        t=report.t,
                        buyer_id=buyer_id,
                        predictor=predictor_of[buyer_id],
                        funds=report.buyer_funds[buyer_id],
                        owned_count=report.buyer_owned_counts[buyer_id],
                        purchases=bought.get(buyer_id, 0),
                    )
                )
        records.append(RunRecord(run_id=k, rows=rows))
        ledger.extend((k, tx) for tx in state.ledger)
        log.info("run %d finished: %d transactions", k, len(state.ledger))
    return ExperimentResult(records=records, aggregate=_aggregate(records), ledger=ledger)


def _aggregate(records: List[RunRecord]) -> List[AggregateRow]:
    groups: Dict[Tuple[int, str], List[Money]] = {}
    for record in records:
        for row in record.rows:
            groups.setdefault((row.t, row.predictor), []).append(row.funds)
    out = []
    for t, predictor in sorted(groups):
        funds = groups[(t, predictor)]
        out.append(
            AggregateRow(
                t=t,
                predictor=predictor,
                mean_funds=exact_mean(funds),
                std_funds=statistics.pstdev(to_units(f) for f in funds),
            )
        )
    return out


def emit_csv(result: ExperimentResult, out_dir) -> Dict[str, Path]:
    """Write runs.csv, aggregate.csv and ledger.csv under out_dir.

    Row order is canonical: runs.csv by (run_id, t, buyer_id),
    aggregate.csv by (t, predictor), ledger.csv by run then settlement
    order. Identical experiments produce byte-identical files.
    """
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoError(f"{out}: {exc}") from exc

    paths: Dict[str, Path] = {}

    def write(name: str, header: List[str], rows) -> None:
        path = out / name
        try:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(header)
                writer.writerows(rows)
        except OSError as exc:
            raise IoError(f"{path}: {exc}") from exc
        paths[name] = path

    runs_rows = sorted(
        (record.run_id, row.t, row.buyer_id, row.predictor, fmt(row.funds), row.owned_count, row.purchases)
        for record in result.records
        for row in record.rows
    )
    write("runs.csv", RUNS_HEADER, runs_rows)
    write(
        "aggregate.csv",
        AGGREGATE_HEADER,
        [(r.t, r.predictor, fmt(r.mean_funds), f"{r.std_funds:.6g}") for r in result.aggregate],
    )
    write(
        "ledger.csv",
        LEDGER_HEADER,
        [(k, tx.timestamp, tx.buyer, tx.seller, tx.dataset, fmt(tx.price)) for k, tx in result.ledger],
    )
    return paths
