"""Agent-based data-market simulator.

Buyers estimate next prices from observed history and solve a
budget-constrained 0/1 selection problem each timestamp; sellers reprice
by rule; a mediator matches planned purchases against randomly assigned
sellers, settling whenever the bid covers a frozen ask. An experiment
harness averages funds per turn over independent runs and writes CSVs.
"""

from .allocation import (
    KERNEL_BACKEND,
    AllocationItem,
    AllocationProblem,
    AllocationResult,
    solve,
    solve_bruteforce,
    win_filter,
)
from .config import (
    BuyerSpec,
    CatalogSpec,
    DatasetSpec,
    MarketConfig,
    SellerSpec,
    load_config,
    parse_config,
    write_config,
)
from .core import (
    Buyer,
    BuyerId,
    CatalogEntry,
    Dataset,
    DatasetId,
    MarketParams,
    MarketState,
    Seller,
    SellerId,
    SupplyMode,
    Transaction,
    remaining_value,
    replay_budgets,
    settle,
)
from .engine import StepReport, build_state, plan_purchases, run, run_timestamp
from .errors import (
    ConfigError,
    IoError,
    MarketError,
    NoFunds,
    NoHistory,
    NotOffered,
    NotWanted,
    OracleTooLarge,
    RunFinished,
    UnknownDataset,
)
from .experiment import (
    AggregateRow,
    ExperimentResult,
    RunRecord,
    RunRow,
    emit_csv,
    run_experiment,
    run_seed,
)
from .money import SCALE, Money, exact_mean, fmt, from_units, parse, to_units
from .rng import substream, substream_seed
from .strategies import (
    AdaptiveRule,
    LinearRule,
    NoisyAdaptiveRule,
    NoisyLinearRule,
    PredictorKind,
    PriceSeries,
    SellerRule,
    initial_estimate,
    ols_next,
    predict,
    seller_update,
)

__version__ = "0.1.0"
