"""Buyer-side price predictors and seller-side pricing rules.

Predictors turn the observed price series of one dataset into an estimate
of its next ask. Seller rules produce the next ask from the current ask,
the sales just made and the clock. Both families are pure functions of
their inputs plus, for noisy rules, the supplied PRNG.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Tuple, Union

from .errors import ConfigError, NoHistory
from .money import SCALE, Money, fmt, round_fraction, round_minor


class PredictorKind(str, enum.Enum):
    """Built-in cost estimation strategies."""

    LAST = "last"
    MEAN = "mean"
    MAX = "max"
    MIN = "min"
    REGRESSION = "regression"


PREDICTOR_NAMES = tuple(kind.value for kind in PredictorKind)


@dataclass(frozen=True)
class PriceSeries:
    """Observed prices of one dataset, one entry per timestamp."""

    times: Tuple[int, ...]
    prices: Tuple[Money, ...]

    def __post_init__(self):
        if len(self.times) != len(self.prices):
            raise ValueError("times and prices differ in length")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValueError("timestamps must be strictly increasing")
        if any(p < 0 for p in self.prices):
            raise ValueError("prices must be non-negative")

    def __len__(self) -> int:
        return len(self.times)

    @classmethod
    def from_observations(cls, observations: Iterable[Tuple[int, Money]]) -> "PriceSeries":
        """Build a series from raw (t, price) pairs in recording order.

        A buyer may observe several asks for one dataset within a single
        timestamp; the last recorded one wins (the settled price, when a
        purchase happened, since settling ends the seller walk).
        """
        collapsed: dict[int, Money] = {}
        for t, price in observations:
            collapsed[t] = price
        times = tuple(sorted(collapsed))
        return cls(times, tuple(collapsed[t] for t in times))


def ols_next(series: PriceSeries) -> Optional[float]:
    """Least-squares line through (t, price), evaluated one step past the
    last observation. Minor units. None when the line is underdetermined
    (fewer than two points)."""
    n = len(series)
    if n < 2:
        return None
    t_mean = sum(series.times) / n
    p_mean = sum(series.prices) / n
    sxx = 0.0
    sxy = 0.0
    for t, p in zip(series.times, series.prices):
        dt = t - t_mean
        sxx += dt * dt
        sxy += dt * (p - p_mean)
    slope = sxy / sxx
    return p_mean + slope * (series.times[-1] + 1 - t_mean)


def predict(kind: PredictorKind, series: PriceSeries) -> Money:
    """Estimate the next price of a dataset from its observed series."""
    if len(series) == 0:
        raise NoHistory("cannot predict from an empty price series")
    if kind is PredictorKind.LAST:
        return series.prices[-1]
    if kind is PredictorKind.MEAN:
        return round_fraction(Fraction(sum(series.prices), len(series)))
    if kind is PredictorKind.MAX:
        return max(series.prices)
    if kind is PredictorKind.MIN:
        return min(series.prices)
    if kind is PredictorKind.REGRESSION:
        fitted = ols_next(series)
        if fitted is None:
            # a single point cannot pin down a line
            return series.prices[-1]
        return max(0, round_minor(fitted))
    raise ValueError(f"unknown predictor: {kind!r}")


def initial_estimate(rng: random.Random, lo: Money, hi: Money) -> Money:
    """Uniform draw on the money grid of [lo, hi] for a cold start."""
    if lo < 0 or lo > hi:
        raise ConfigError(
            "initial_estimate_range",
            f"need 0 <= lo <= hi, got [{fmt(lo)}, {fmt(hi)}]",
        )
    return rng.randint(lo, hi)


@dataclass(frozen=True)
class AdaptiveRule:
    """Multiply the ask up after a sale, down otherwise."""

    up: float = 1.05
    down: float = 0.95

    def __post_init__(self):
        if not self.up > 1:
            raise ConfigError("rule.up", f"up factor must exceed 1, got {self.up}")
        if not 0 < self.down < 1:
            raise ConfigError("rule.down", f"down factor must be in (0, 1), got {self.down}")


@dataclass(frozen=True)
class LinearRule:
    """Ask follows intercept + slope * t (currency units), sales ignored."""

    intercept: float
    slope: float


@dataclass(frozen=True)
class NoisyAdaptiveRule(AdaptiveRule):
    """Adaptive rule with Gaussian noise added to the new ask."""

    sigma: float = 0.0

    def __post_init__(self):
        super().__post_init__()
        if self.sigma < 0:
            raise ConfigError("rule.sigma", f"noise scale cannot be negative, got {self.sigma}")


@dataclass(frozen=True)
class NoisyLinearRule(LinearRule):
    """Linear rule with Gaussian noise added to the new ask."""

    sigma: float = 0.0

    def __post_init__(self):
        if self.sigma < 0:
            raise ConfigError("rule.sigma", f"noise scale cannot be negative, got {self.sigma}")


SellerRule = Union[AdaptiveRule, LinearRule, NoisyAdaptiveRule, NoisyLinearRule]

SELLER_RULE_NAMES = ("adaptive", "linear", "noisy_adaptive", "noisy_linear")


def seller_update(
    rule: SellerRule,
    current_ask: Money,
    sold_count: int,
    t: int,
    rng: Optional[random.Random] = None,
    price_floor: Money = 0,
) -> Money:
    """Next ask for one dataset.

    `sold_count` is how many copies the seller moved during the timestamp
    that just ended; `t` is the timestamp whose price is being set. Noise
    applies to the raw result, then everything clamps to `price_floor`.
    """
    if current_ask < 0:
        raise ValueError("current_ask must be non-negative")
    if isinstance(rule, AdaptiveRule):
        factor = rule.up if sold_count > 0 else rule.down
        raw = current_ask * factor
    elif isinstance(rule, LinearRule):
        raw = (rule.intercept + rule.slope * t) * SCALE
    else:
        raise ValueError(f"unknown seller rule: {rule!r}")
    sigma = getattr(rule, "sigma", 0.0)
    if sigma > 0:
        if rng is None:
            raise ValueError("noisy rules need a PRNG")
        raw += rng.gauss(0.0, sigma) * SCALE
    return max(price_floor, round_minor(raw))
