"""Core domain state: products, players, transactions, settlement.

Ids are dense small ints assigned from 0 in declaration order, so a
player's id doubles as its index into the market's buyer/seller lists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

from .errors import NoFunds, NotOffered, NotWanted, UnknownDataset
from .money import Money, fmt
from .strategies import PredictorKind, SellerRule

DatasetId = int
BuyerId = int
SellerId = int


@dataclass
class SupplyMode:
    """Inventory of one offer; ``remaining is None`` means infinite."""

    remaining: Optional[int] = None

    def __post_init__(self):
        if self.remaining is not None and self.remaining < 0:
            raise ValueError("finite supply cannot be negative")

    @classmethod
    def infinite(cls) -> "SupplyMode":
        return cls(None)

    @classmethod
    def finite(cls, remaining: int) -> "SupplyMode":
        return cls(remaining)

    @property
    def is_infinite(self) -> bool:
        return self.remaining is None

    @property
    def available(self) -> bool:
        return self.remaining is None or self.remaining > 0

    def take_one(self) -> None:
        if self.remaining is not None:
            if self.remaining <= 0:
                raise NotOffered("supply exhausted")
            self.remaining -= 1


@dataclass(frozen=True)
class Dataset:
    """A tradable product. Metadata is carried but never interpreted."""

    id: DatasetId
    name: str
    domain_tag: str
    num_examples: int
    num_features: int
    supply: SupplyMode = field(default_factory=SupplyMode.infinite)

    def __post_init__(self):
        if self.num_examples < 0 or self.num_features < 0:
            raise ValueError("dataset sizes cannot be negative")


@dataclass(frozen=True)
class Transaction:
    """One settled purchase."""

    timestamp: int
    buyer: BuyerId
    seller: SellerId
    dataset: DatasetId
    price: Money


@dataclass
class Buyer:
    """A player acquiring datasets under a budget."""

    id: BuyerId
    budget: Money
    wishlist: Set[DatasetId]
    valuation_per_step: Dict[DatasetId, Money]
    predictor: PredictorKind
    initial_estimates: Dict[DatasetId, Money] = field(default_factory=dict)
    owned: Set[DatasetId] = field(default_factory=set)
    price_history: Dict[DatasetId, List[Tuple[int, Money]]] = field(default_factory=dict)
    transactions: List[Transaction] = field(default_factory=list)
    # accrued value minus purchase spend; may run negative mid-run
    profit: int = 0

    def observe(self, dataset: DatasetId, t: int, price: Money) -> None:
        """Record one encountered ask (several per timestamp are fine)."""
        self.price_history.setdefault(dataset, []).append((t, price))


@dataclass
class CatalogEntry:
    """One seller's live offer of one dataset."""

    ask: Money
    supply: SupplyMode


@dataclass
class Seller:
    """A player offering datasets at rule-driven asks."""

    id: SellerId
    budget: Money
    catalog: Dict[DatasetId, CatalogEntry]
    pricing_rule: SellerRule
    sold_this_step: Dict[DatasetId, int] = field(default_factory=dict)
    transactions: List[Transaction] = field(default_factory=list)

    def offers(self, dataset: DatasetId) -> bool:
        entry = self.catalog.get(dataset)
        return entry is not None and entry.supply.available


@dataclass(frozen=True)
class MarketParams:
    """Knobs that govern settlement and accrual during a run."""

    price_floor: Money = 0
    accrual_to_budget: bool = True


@dataclass
class MarketState:
    """Everything one simulation run mutates."""

    t: int
    horizon: int
    buyers: List[Buyer]
    sellers: List[Seller]
    datasets: List[Dataset]
    ledger: List[Transaction] = field(default_factory=list)
    rng_seed: int = 0
    params: MarketParams = field(default_factory=MarketParams)

    def __post_init__(self):
        for i, buyer in enumerate(self.buyers):
            if buyer.id != i:
                raise ValueError(f"buyer ids must be dense from 0, got {buyer.id} at {i}")
        for j, seller in enumerate(self.sellers):
            if seller.id != j:
                raise ValueError(f"seller ids must be dense from 0, got {seller.id} at {j}")

    def total_funds(self) -> Money:
        return sum(b.budget for b in self.buyers) + sum(s.budget for s in self.sellers)


def remaining_value(buyer: Buyer, dataset: DatasetId, t: int, horizon: int) -> Money:
    """Total value still obtainable from owning `dataset` from t onwards:
    its per-step valuation times the steps left."""
    if dataset not in buyer.valuation_per_step:
        raise UnknownDataset(f"buyer {buyer.id} has no valuation for dataset {dataset}")
    if not 0 <= t <= horizon:
        raise ValueError(f"timestamp {t} outside [0, {horizon}]")
    return (horizon - t) * buyer.valuation_per_step[dataset]


def settle(state: MarketState, buyer_id: BuyerId, seller_id: SellerId, dataset: DatasetId) -> Transaction:
    """Execute one purchase at the seller's current ask.

    Budgets move by exactly the ask, the dataset migrates from the
    buyer's wishlist to its owned set, finite supply is decremented (and
    a sold-out entry leaves the catalog), and the transaction lands on
    the market ledger and both players' histories. State is untouched
    when any check fails.
    """
    buyer = state.buyers[buyer_id]
    seller = state.sellers[seller_id]
    entry = seller.catalog.get(dataset)
    if entry is None or not entry.supply.available:
        raise NotOffered(f"seller {seller_id} does not offer dataset {dataset}")
    if dataset not in buyer.wishlist:
        raise NotWanted(f"buyer {buyer_id} does not want dataset {dataset}")
    if buyer.budget < entry.ask:
        raise NoFunds(f"buyer {buyer_id} cannot pay {fmt(entry.ask)} for dataset {dataset}")
    price = entry.ask
    buyer.budget -= price
    seller.budget += price
    buyer.profit -= price
    buyer.wishlist.remove(dataset)
    buyer.owned.add(dataset)
    entry.supply.take_one()
    if not entry.supply.available:
        del seller.catalog[dataset]
    seller.sold_this_step[dataset] = seller.sold_this_step.get(dataset, 0) + 1
    tx = Transaction(state.t, buyer_id, seller_id, dataset, price)
    state.ledger.append(tx)
    buyer.transactions.append(tx)
    seller.transactions.append(tx)
    return tx


def replay_budgets(
    buyer_budgets: List[Money],
    seller_budgets: List[Money],
    ledger: List[Transaction],
    accrual: Optional[Tuple[int, List[Dict[DatasetId, Money]]]] = None,
) -> Tuple[List[Money], List[Money]]:
    """Fold a ledger over initial budgets and return the final ones.

    With `accrual=(horizon, valuations)` each purchase also credits its
    full remaining value, which is what the engine's per-step accrual
    sums to by the end of a run; final budgets then match an accrual-on
    run. Without it they match an accrual-off run step for step.
    """
    buyers = list(buyer_budgets)
    sellers = list(seller_budgets)
    for tx in ledger:
        if buyers[tx.buyer] < tx.price:
            raise NoFunds(f"replay: buyer {tx.buyer} short at t={tx.timestamp}")
        buyers[tx.buyer] -= tx.price
        sellers[tx.seller] += tx.price
        if accrual is not None:
            horizon, valuations = accrual
            buyers[tx.buyer] += (horizon - tx.timestamp) * valuations[tx.buyer][tx.dataset]
    return buyers, sellers
