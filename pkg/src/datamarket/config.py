"""Market configuration: YAML schema, validation, round-trip writing.

Schema (one document; dataset ids are list positions, 0-based):

    market:
      horizon: 50                  # timestamps to simulate
      seed: 42                     # master seed, 0 <= seed < 2**64
      price_floor: 0               # lowest ask a pricing rule may set
      initial_estimate_range: [0, 10]   # cold-start estimate bounds
      accrual_to_budget: true      # owned value becomes spendable funds
    datasets:
      - name: clickstream
        domain: retail
        num_examples: 100000
        num_features: 20
        supply: infinite           # or an integer per-seller inventory
    buyers:
      - budget: 10
        predictor: last            # last | mean | max | min | regression
        wishlist: [0]
        valuations: {0: 3}         # per-step value of owning each dataset
    sellers:
      - budget: 0
        rule: {kind: adaptive, up: 1.05, down: 0.95}
        catalog:
          0: 8                     # dataset id -> initial ask, or
          # 0: {ask: 8, remaining: 3}   to cap this seller's inventory

Rule kinds: adaptive(up, down), linear(intercept, slope),
noisy_adaptive(up, down, sigma), noisy_linear(intercept, slope, sigma).
Money fields accept ints, decimals or strings and are stored in
fixed-point minor units. Unknown keys are rejected so typos surface as
errors with their field path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import yaml

from .errors import ConfigError
from .money import SCALE, Money, MoneyValueError, fmt, from_units
from .strategies import (
    PREDICTOR_NAMES,
    AdaptiveRule,
    LinearRule,
    NoisyAdaptiveRule,
    NoisyLinearRule,
    PredictorKind,
    SellerRule,
)

_REQUIRED = object()

_MAX_SEED = 2**64


@dataclass
class DatasetSpec:
    name: str
    domain_tag: str
    num_examples: int
    num_features: int
    supply: Optional[int] = None  # None means infinite


@dataclass
class CatalogSpec:
    ask: Money
    remaining: Optional[int] = None  # None inherits the dataset's supply


@dataclass
class BuyerSpec:
    budget: Money
    predictor: PredictorKind
    wishlist: Tuple[int, ...]
    valuations: Dict[int, Money]


@dataclass
class SellerSpec:
    budget: Money
    rule: SellerRule
    catalog: Dict[int, CatalogSpec]


@dataclass
class MarketConfig:
    """A complete, validated market description."""

    horizon: int
    seed: int
    datasets: List[DatasetSpec]
    buyers: List[BuyerSpec]
    sellers: List[SellerSpec]
    price_floor: Money = 0
    initial_estimate_range: Tuple[Money, Money] = (0, 10 * SCALE)
    accrual_to_budget: bool = True

    def validate(self) -> None:
        """Raise ConfigError (with a field path) on the first violation."""
        if not isinstance(self.horizon, int) or isinstance(self.horizon, bool) or self.horizon < 0:
            raise ConfigError("market.horizon", f"must be a non-negative integer, got {self.horizon!r}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or not 0 <= self.seed < _MAX_SEED:
            raise ConfigError("market.seed", f"must be an integer in [0, 2**64), got {self.seed!r}")
        if self.price_floor < 0:
            raise ConfigError("market.price_floor", f"cannot be negative, got {fmt(self.price_floor)}")
        lo, hi = self.initial_estimate_range
        if lo < 0 or lo > hi:
            raise ConfigError(
                "market.initial_estimate_range", f"need 0 <= lo <= hi, got [{fmt(lo)}, {fmt(hi)}]"
            )
        n = len(self.datasets)
        for i, spec in enumerate(self.datasets):
            path = f"datasets[{i}]"
            if not spec.name:
                raise ConfigError(f"{path}.name", "must be a non-empty string")
            if spec.num_examples < 0:
                raise ConfigError(f"{path}.num_examples", f"cannot be negative, got {spec.num_examples}")
            if spec.num_features < 0:
                raise ConfigError(f"{path}.num_features", f"cannot be negative, got {spec.num_features}")
            if spec.supply is not None and spec.supply < 0:
                raise ConfigError(f"{path}.supply", f"cannot be negative, got {spec.supply}")
        for i, spec in enumerate(self.buyers):
            path = f"buyers[{i}]"
            if spec.budget < 0:
                raise ConfigError(f"{path}.budget", f"cannot be negative, got {fmt(spec.budget)}")
            if not isinstance(spec.predictor, PredictorKind):
                raise ConfigError(f"{path}.predictor", f"unknown predictor {spec.predictor!r}")
            if len(set(spec.wishlist)) != len(spec.wishlist):
                raise ConfigError(f"{path}.wishlist", "contains duplicate dataset ids")
            for d in spec.wishlist:
                if not 0 <= d < n:
                    raise ConfigError(f"{path}.wishlist", f"dataset id {d} is not declared")
            for d, v in spec.valuations.items():
                if not 0 <= d < n:
                    raise ConfigError(f"{path}.valuations", f"dataset id {d} is not declared")
                if v < 0:
                    raise ConfigError(f"{path}.valuations[{d}]", f"cannot be negative, got {fmt(v)}")
            missing = [d for d in spec.wishlist if d not in spec.valuations]
            if missing:
                raise ConfigError(f"{path}.valuations", f"missing valuation for wished dataset {missing[0]}")
        for j, spec in enumerate(self.sellers):
            path = f"sellers[{j}]"
            if spec.budget < 0:
                raise ConfigError(f"{path}.budget", f"cannot be negative, got {fmt(spec.budget)}")
            if not isinstance(spec.rule, (AdaptiveRule, LinearRule)):
                raise ConfigError(f"{path}.rule", f"unknown rule {spec.rule!r}")
            for d, offer in spec.catalog.items():
                if not 0 <= d < n:
                    raise ConfigError(f"{path}.catalog", f"dataset id {d} is not declared")
                if offer.ask < self.price_floor:
                    raise ConfigError(
                        f"{path}.catalog[{d}].ask",
                        f"ask {fmt(offer.ask)} is below the price floor {fmt(self.price_floor)}",
                    )
                if offer.remaining is not None and offer.remaining < 0:
                    raise ConfigError(f"{path}.catalog[{d}].remaining", f"cannot be negative, got {offer.remaining}")


def _expect_mapping(value: Any, path: str) -> Dict[str, Any]:
    if not isinstance(value, dict):
        raise ConfigError(path, f"expected a mapping, got {type(value).__name__}")
    return value


def _expect_list(value: Any, path: str) -> List[Any]:
    if not isinstance(value, list):
        raise ConfigError(path, f"expected a list, got {type(value).__name__}")
    return value


def _take(mapping: Dict[str, Any], key: str, path: str, default: Any = _REQUIRED) -> Any:
    if key in mapping:
        return mapping.pop(key)
    if default is _REQUIRED:
        raise ConfigError(f"{path}.{key}", "is required")
    return default


def _no_leftovers(mapping: Dict[str, Any], path: str) -> None:
    if mapping:
        key = sorted(str(k) for k in mapping)[0]
        raise ConfigError(f"{path}.{key}", "is not a recognized field")


def _money(value: Any, path: str, minimum: Optional[Money] = 0) -> Money:
    try:
        amount = from_units(value)
    except MoneyValueError as exc:
        raise ConfigError(path, str(exc)) from exc
    if minimum is not None and amount < minimum:
        raise ConfigError(path, f"cannot be below {fmt(minimum)}, got {fmt(amount)}")
    return amount


def _count(value: Any, path: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise ConfigError(path, f"expected a non-negative integer, got {value!r}")
    return value


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, f"expected a number, got {value!r}")
    return float(value)


def _flag(value: Any, path: str) -> bool:
    if not isinstance(value, bool):
        raise ConfigError(path, f"expected true or false, got {value!r}")
    return value


def _text(value: Any, path: str) -> str:
    if not isinstance(value, str) or not value:
        raise ConfigError(path, f"expected a non-empty string, got {value!r}")
    return value


def _dataset_id(value: Any, path: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise ConfigError(path, f"expected a dataset id, got {value!r}")
    return value


def _parse_supply(value: Any, path: str) -> Optional[int]:
    if value is None or value == "infinite":
        return None
    return _count(value, path)


def _parse_predictor(value: Any, path: str) -> PredictorKind:
    if isinstance(value, str):
        try:
            return PredictorKind(value)
        except ValueError:
            pass
    raise ConfigError(path, f"unknown predictor {value!r}; valid: {', '.join(PREDICTOR_NAMES)}")


def _parse_rule(value: Any, path: str) -> SellerRule:
    mapping = dict(_expect_mapping(value, path))
    kind = _take(mapping, "kind", path)
    try:
        if kind == "adaptive":
            rule: SellerRule = AdaptiveRule(
                up=_number(_take(mapping, "up", path, 1.05), f"{path}.up"),
                down=_number(_take(mapping, "down", path, 0.95), f"{path}.down"),
            )
        elif kind == "linear":
            rule = LinearRule(
                intercept=_number(_take(mapping, "intercept", path), f"{path}.intercept"),
                slope=_number(_take(mapping, "slope", path), f"{path}.slope"),
            )
        elif kind == "noisy_adaptive":
            rule = NoisyAdaptiveRule(
                up=_number(_take(mapping, "up", path, 1.05), f"{path}.up"),
                down=_number(_take(mapping, "down", path, 0.95), f"{path}.down"),
                sigma=_number(_take(mapping, "sigma", path, 0.0), f"{path}.sigma"),
            )
        elif kind == "noisy_linear":
            rule = NoisyLinearRule(
                intercept=_number(_take(mapping, "intercept", path), f"{path}.intercept"),
                slope=_number(_take(mapping, "slope", path), f"{path}.slope"),
                sigma=_number(_take(mapping, "sigma", path, 0.0), f"{path}.sigma"),
            )
        else:
            raise ConfigError(
                f"{path}.kind",
                f"unknown rule {kind!r}; valid: adaptive, linear, noisy_adaptive, noisy_linear",
            )
    except ConfigError as exc:
        # rule constructors report bare field names; anchor them here
        if exc.path.startswith("rule."):
            raise ConfigError(f"{path}.{exc.path[len('rule.'):]}", exc.message) from exc
        raise
    _no_leftovers(mapping, path)
    return rule


def parse_config(data: Any, source: str = "config") -> MarketConfig:
    """Turn a parsed YAML document into a validated MarketConfig."""
    root = dict(_expect_mapping(data, source))

    market = dict(_expect_mapping(_take(root, "market", source), "market"))
    horizon = _count(_take(market, "horizon", "market"), "market.horizon")
    seed = _take(market, "seed", "market")
    price_floor = _money(_take(market, "price_floor", "market", 0), "market.price_floor")
    est_range = _take(market, "initial_estimate_range", "market", [0, 10])
    est_list = _expect_list(est_range, "market.initial_estimate_range")
    if len(est_list) != 2:
        raise ConfigError("market.initial_estimate_range", f"expected [lo, hi], got {est_range!r}")
    estimate_range = (
        _money(est_list[0], "market.initial_estimate_range[0]"),
        _money(est_list[1], "market.initial_estimate_range[1]"),
    )
    accrual = _flag(_take(market, "accrual_to_budget", "market", True), "market.accrual_to_budget")
    _no_leftovers(market, "market")

    datasets = []
    for i, raw in enumerate(_expect_list(_take(root, "datasets", source), "datasets")):
        path = f"datasets[{i}]"
        entry = dict(_expect_mapping(raw, path))
        datasets.append(
            DatasetSpec(
                name=_text(_take(entry, "name", path), f"{path}.name"),
                domain_tag=_text(_take(entry, "domain", path), f"{path}.domain"),
                num_examples=_count(_take(entry, "num_examples", path), f"{path}.num_examples"),
                num_features=_count(_take(entry, "num_features", path), f"{path}.num_features"),
                supply=_parse_supply(_take(entry, "supply", path, None), f"{path}.supply"),
            )
        )
        _no_leftovers(entry, path)

    buyers = []
    for i, raw in enumerate(_expect_list(_take(root, "buyers", source), "buyers")):
        path = f"buyers[{i}]"
        entry = dict(_expect_mapping(raw, path))
        wishlist = tuple(
            _dataset_id(d, f"{path}.wishlist[{k}]")
            for k, d in enumerate(_expect_list(_take(entry, "wishlist", path), f"{path}.wishlist"))
        )
        valuations_raw = _expect_mapping(_take(entry, "valuations", path), f"{path}.valuations")
        valuations = {
            _dataset_id(d, f"{path}.valuations"): _money(v, f"{path}.valuations[{d}]")
            for d, v in valuations_raw.items()
        }
        buyers.append(
            BuyerSpec(
                budget=_money(_take(entry, "budget", path), f"{path}.budget"),
                predictor=_parse_predictor(_take(entry, "predictor", path), f"{path}.predictor"),
                wishlist=wishlist,
                valuations=valuations,
            )
        )
        _no_leftovers(entry, path)

    sellers = []
    for j, raw in enumerate(_expect_list(_take(root, "sellers", source), "sellers")):
        path = f"sellers[{j}]"
        entry = dict(_expect_mapping(raw, path))
        catalog_raw = _expect_mapping(_take(entry, "catalog", path), f"{path}.catalog")
        catalog = {}
        for d, offer in catalog_raw.items():
            d = _dataset_id(d, f"{path}.catalog")
            offer_path = f"{path}.catalog[{d}]"
            if isinstance(offer, dict):
                offer = dict(offer)
                spec = CatalogSpec(
                    ask=_money(_take(offer, "ask", offer_path), f"{offer_path}.ask"),
                    remaining=(
                        None
                        if (rem := _take(offer, "remaining", offer_path, None)) is None
                        else _count(rem, f"{offer_path}.remaining")
                    ),
                )
                _no_leftovers(offer, offer_path)
            else:
                spec = CatalogSpec(ask=_money(offer, f"{offer_path}"))
            catalog[d] = spec
        sellers.append(
            SellerSpec(
                budget=_money(_take(entry, "budget", path, 0), f"{path}.budget"),
                rule=_parse_rule(_take(entry, "rule", path), f"{path}.rule"),
                catalog=catalog,
            )
        )
        _no_leftovers(entry, path)

    _no_leftovers(root, source)

    if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed < _MAX_SEED:
        raise ConfigError("market.seed", f"must be an integer in [0, 2**64), got {seed!r}")
    config = MarketConfig(
        horizon=horizon,
        seed=seed,
        datasets=datasets,
        buyers=buyers,
        sellers=sellers,
        price_floor=price_floor,
        initial_estimate_range=estimate_range,
        accrual_to_budget=accrual,
    )
    config.validate()
    return config


def load_config(path) -> MarketConfig:
    """Read and validate a YAML config file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read config: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(str(path), f"not valid YAML: {exc}") from exc
    return parse_config(data, source=str(path))


def _money_out(amount: Money) -> Any:
    if amount % SCALE == 0:
        return amount // SCALE
    return float(fmt(amount))


def _rule_out(rule: SellerRule) -> Dict[str, Any]:
    if isinstance(rule, NoisyAdaptiveRule):
        return {"kind": "noisy_adaptive", "up": rule.up, "down": rule.down, "sigma": rule.sigma}
    if isinstance(rule, AdaptiveRule):
        return {"kind": "adaptive", "up": rule.up, "down": rule.down}
    if isinstance(rule, NoisyLinearRule):
        return {"kind": "noisy_linear", "intercept": rule.intercept, "slope": rule.slope, "sigma": rule.sigma}
    return {"kind": "linear", "intercept": rule.intercept, "slope": rule.slope}


def config_to_dict(config: MarketConfig) -> Dict[str, Any]:
    """The YAML document form of a config (inverse of parse_config)."""
    lo, hi = config.initial_estimate_range
    doc: Dict[str, Any] = {
        "market": {
            "horizon": config.horizon,
            "seed": config.seed,
            "price_floor": _money_out(config.price_floor),
            "initial_estimate_range": [_money_out(lo), _money_out(hi)],
            "accrual_to_budget": config.accrual_to_budget,
        },
        "datasets": [
            {
                "name": spec.name,
                "domain": spec.domain_tag,
                "num_examples": spec.num_examples,
                "num_features": spec.num_features,
                "supply": "infinite" if spec.supply is None else spec.supply,
            }
            for spec in config.datasets
        ],
        "buyers": [
            {
                "budget": _money_out(spec.budget),
                "predictor": spec.predictor.value,
                "wishlist": list(spec.wishlist),
                "valuations": {d: _money_out(v) for d, v in sorted(spec.valuations.items())},
            }
            for spec in config.buyers
        ],
        "sellers": [
            {
                "budget": _money_out(spec.budget),
                "rule": _rule_out(spec.rule),
                "catalog": {
                    d: (
                        _money_out(offer.ask)
                        if offer.remaining is None
                        else {"ask": _money_out(offer.ask), "remaining": offer.remaining}
                    )
                    for d, offer in sorted(spec.catalog.items())
                },
            }
            for spec in config.sellers
        ],
    }
    return doc


def write_config(config: MarketConfig, path) -> None:
    """Write a config as YAML that parse_config reads back equal."""
    with open(path, "w", encoding="utf-8") as fh:
        yaml.safe_dump(config_to_dict(config), fh, sort_keys=False)
