"""The mediator: timestamp loop, auction-free matching, accrual, repricing.

One timestamp runs in five phases. Every buyer plans its purchases by
solving its allocation problem over predicted costs; the planned (buyer,
dataset) pairs are matched against randomly ordered sellers while asks
stay frozen for the step; owners accrue the per-step value of what they
hold; sellers reprice; the clock advances. A settlement happens exactly
when the buyer's bid (its cost estimate) covers the seller's ask and its
budget covers the price, which is the ask itself.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .allocation import AllocationItem, AllocationProblem, solve
from .config import MarketConfig
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
    settle,
)
from .errors import RunFinished
from .money import Money
from .rng import substream
from .strategies import PriceSeries, initial_estimate, predict, seller_update


@dataclass
class StepReport:
    """Observable outcome of one timestamp."""

    t: int
    transactions: List[Transaction]
    buyer_funds: Dict[BuyerId, Money]
    buyer_owned_counts: Dict[BuyerId, int]
    # asks as frozen at the top of the step
    seller_asks: Dict[Tuple[SellerId, DatasetId], Money]
    # per buyer, the bid attached to each planned dataset
    planned_bids: Dict[BuyerId, Dict[DatasetId, Money]] = field(default_factory=dict)


def build_state(config: MarketConfig) -> MarketState:
    """Materialize a config into a fresh market.

    Cold-start cost estimates are drawn here, one independent substream
    per (buyer, dataset), so they never move when unrelated players are
    added to the config.
    """
    config.validate()
    datasets = [
        Dataset(
            id=i,
            name=spec.name,
            domain_tag=spec.domain_tag,
            num_examples=spec.num_examples,
            num_features=spec.num_features,
            supply=SupplyMode(spec.supply),
        )
        for i, spec in enumerate(config.datasets)
    ]
    lo, hi = config.initial_estimate_range
    buyers = []
    for i, spec in enumerate(config.buyers):
        estimates = {
            d: initial_estimate(substream(config.seed, "estimate", i, d), lo, hi)
            for d in sorted(spec.wishlist)
        }
        buyers.append(
            Buyer(
                id=i,
                budget=spec.budget,
                wishlist=set(spec.wishlist),
                valuation_per_step=dict(spec.valuations),
                predictor=spec.predictor,
                initial_estimates=estimates,
            )
        )
    sellers = []
    for j, spec in enumerate(config.sellers):
        catalog = {}
        for d, offer in sorted(spec.catalog.items()):
            remaining = offer.remaining if offer.remaining is not None else config.datasets[d].supply
            catalog[d] = CatalogEntry(ask=offer.ask, supply=SupplyMode(remaining))
        sellers.append(Seller(id=j, budget=spec.budget, catalog=catalog, pricing_rule=spec.rule))
    return MarketState(
        t=0,
        horizon=config.horizon,
        buyers=buyers,
        sellers=sellers,
        datasets=datasets,
        ledger=[],
        rng_seed=config.seed,
        params=MarketParams(price_floor=config.price_floor, accrual_to_budget=config.accrual_to_budget),
    )


def _bid_schedule(buyer: Buyer, wishlist: Sequence[DatasetId]) -> Dict[DatasetId, Money]:
    """Current cost estimate for each wanted dataset: the predictor over
    observed history, or the stored cold-start estimate before any."""
    bids = {}
    for d in wishlist:
        observations = buyer.price_history.get(d)
        if observations:
            bids[d] = predict(buyer.predictor, PriceSeries.from_observations(observations))
        else:
            bids[d] = buyer.initial_estimates[d]
    return bids


def _plan(buyer: Buyer, t: int, horizon: int) -> Tuple[List[DatasetId], Dict[DatasetId, Money]]:
    wishlist = sorted(buyer.wishlist)
    bids = _bid_schedule(buyer, wishlist)
    items = tuple(
        AllocationItem(dataset=d, value=remaining_value(buyer, d, t, horizon), est_cost=bids[d])
        for d in wishlist
    )
    result = solve(AllocationProblem(items, buyer.budget))
    return sorted(result.chosen), bids


def plan_purchases(buyer: Buyer, t: int, horizon: int) -> set:
    """Datasets the buyer pursues at time t: the optimal affordable
    subset of its wishlist under current cost estimates."""
    plan, _ = _plan(buyer, t, horizon)
    return set(plan)


def _walk_sellers(
    state: MarketState,
    buyer: Buyer,
    dataset: DatasetId,
    bid: Money,
    seller_order: Sequence[SellerId],
) -> Optional[Transaction]:
    """Visit sellers in order until the bid clears an affordable ask.

    Every visited ask lands in the buyer's price history; on success the
    settled ask is the last and freshest observation of the timestamp.
    Each seller is tried at most once per pair.
    """
    for seller_id in seller_order:
        entry = state.sellers[seller_id].catalog.get(dataset)
        if entry is None or not entry.supply.available:
            # supply ran out earlier in this same step
            continue
        buyer.observe(dataset, state.t, entry.ask)
        if bid >= entry.ask and buyer.budget >= entry.ask:
            return settle(state, buyer.id, seller_id, dataset)
    return None


def run_timestamp(state: MarketState) -> StepReport:
    """Advance the market by one timestamp (see module docstring)."""
    if state.t >= state.horizon:
        raise RunFinished(f"horizon {state.horizon} reached")
    t = state.t
    frozen_asks = {
        (seller.id, d): seller.catalog[d].ask
        for seller in state.sellers
        for d in sorted(seller.catalog)
        if seller.catalog[d].supply.available
    }

    plans: Dict[BuyerId, List[DatasetId]] = {}
    bids: Dict[BuyerId, Dict[DatasetId, Money]] = {}
    planned_bids: Dict[BuyerId, Dict[DatasetId, Money]] = {}
    for buyer in state.buyers:
        plan, schedule = _plan(buyer, t, state.horizon)
        plans[buyer.id] = plan
        bids[buyer.id] = schedule
        planned_bids[buyer.id] = {d: schedule[d] for d in plan}

    # fair interleaving: shuffle one token per planned item, each buyer
    # still works through its own plan in dataset-id order
    tokens = [buyer.id for buyer in state.buyers for _ in plans[buyer.id]]
    substream(state.rng_seed, "order", t).shuffle(tokens)
    queues = {buyer_id: deque(plan) for buyer_id, plan in plans.items()}

    transactions: List[Transaction] = []
    for buyer_id in tokens:
        dataset = queues[buyer_id].popleft()
        candidates = [seller.id for seller in state.sellers if seller.offers(dataset)]
        substream(state.rng_seed, "assign", t, buyer_id, dataset).shuffle(candidates)
        tx = _walk_sellers(state, state.buyers[buyer_id], dataset, bids[buyer_id][dataset], candidates)
        if tx is not None:
            transactions.append(tx)

    for buyer in state.buyers:
        gain = sum(buyer.valuation_per_step[d] for d in buyer.owned)
        buyer.profit += gain
        if state.params.accrual_to_budget:
            buyer.budget += gain

    for seller in state.sellers:
        for dataset in sorted(seller.catalog):
            entry = seller.catalog[dataset]
            entry.ask = seller_update(
                seller.pricing_rule,
                entry.ask,
                seller.sold_this_step.get(dataset, 0),
                t + 1,
                substream(state.rng_seed, "price", t, seller.id, dataset),
                state.params.price_floor,
            )
        seller.sold_this_step.clear()

    report = StepReport(
        t=t,
        transactions=transactions,
        buyer_funds={b.id: b.budget for b in state.buyers},
        buyer_owned_counts={b.id: len(b.owned) for b in state.buyers},
        seller_asks=frozen_asks,
        planned_bids=planned_bids,
    )
    state.t += 1
    return report


def run(config: MarketConfig) -> Tuple[List[StepReport], MarketState]:
    """Simulate the whole horizon; deterministic given the config."""
    state = build_state(config)
    reports = [run_timestamp(state) for _ in range(state.horizon)]
    return reports, state
