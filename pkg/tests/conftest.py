"""Shared fixtures and config builders for the test suite."""

from pathlib import Path

import pytest

from datamarket.config import BuyerSpec, CatalogSpec, DatasetSpec, MarketConfig, SellerSpec
from datamarket.money import SCALE
from datamarket.strategies import (
    AdaptiveRule,
    LinearRule,
    NoisyAdaptiveRule,
    NoisyLinearRule,
    PredictorKind,
)

REPO_ROOT = Path(__file__).resolve().parents[1]
CONFIG_DIR = REPO_ROOT / "configs"

# One line per acceptance criterion, echoed after the run so the
# checklist survives output capture.
ACCEPTANCE_LINES: list = []


def record_acceptance(line: str) -> None:
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

PREDICTOR_CYCLE = (
    PredictorKind.LAST,
    PredictorKind.MEAN,
    PredictorKind.MAX,
    PredictorKind.MIN,
    PredictorKind.REGRESSION,
)


def mixed_market_config(
    n_buyers: int = 10,
    n_sellers: int = 5,
    n_datasets: int = 20,
    horizon: int = 50,
    seed: int = 1234,
    accrual: bool = False,
) -> MarketConfig:
    """A busy market with every predictor and rule kind represented."""
    datasets = [
        DatasetSpec(
            name=f"set-{d}",
            domain_tag=("retail", "ads", "health", "iot")[d % 4],
            num_examples=1000 * (d + 1),
            num_features=4 + d % 7,
            supply=None,
        )
        for d in range(n_datasets)
    ]
    buyers = []
    for i in range(n_buyers):
        wishlist = tuple(dict.fromkeys((i + k) % n_datasets for k in range(10)))
        valuations = {d: (5 + (d * 7 + i) % 21) * SCALE // 10 for d in wishlist}
        buyers.append(
            BuyerSpec(
                budget=40 * SCALE,
                predictor=PREDICTOR_CYCLE[i % len(PREDICTOR_CYCLE)],
                wishlist=wishlist,
                valuations=valuations,
            )
        )
    rules = (
        AdaptiveRule(1.05, 0.95),
        LinearRule(6.0, 0.05),
        NoisyAdaptiveRule(1.08, 0.92, 0.4),
        NoisyLinearRule(7.0, -0.02, 0.3),
        AdaptiveRule(1.1, 0.9),
    )
    sellers = []
    for j in range(n_sellers):
        offered = [d for d in range(n_datasets) if (d + j) % 3 != 0 or d % (j + 2) == 0]
        catalog = {d: CatalogSpec(ask=(3 + (d * 5 + j) % 8) * SCALE) for d in offered}
        sellers.append(SellerSpec(budget=0, rule=rules[j % len(rules)], catalog=catalog))
    return MarketConfig(
        horizon=horizon,
        seed=seed,
        datasets=datasets,
        buyers=buyers,
        sellers=sellers,
        price_floor=0,
        initial_estimate_range=(0, 15 * SCALE),
        accrual_to_budget=accrual,
    )


@pytest.fixture
def mixed_config():
    return mixed_market_config()
