"""Predictors and seller pricing rules."""

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from datamarket.errors import ConfigError, NoHistory
from datamarket.money import SCALE, round_fraction
from datamarket.rng import substream
from datamarket.strategies import (
    AdaptiveRule,
    LinearRule,
    NoisyAdaptiveRule,
    NoisyLinearRule,
    PredictorKind,
    PriceSeries,
    initial_estimate,
    ols_next,
    predict,
    seller_update,
)


def series(*pairs):
    return PriceSeries(tuple(t for t, _ in pairs), tuple(p for _, p in pairs))


price_series = st.lists(
    st.tuples(st.integers(0, 10_000), st.integers(0, 100 * SCALE)),
    min_size=1,
    max_size=40,
    unique_by=lambda pair: pair[0],
).map(lambda pairs: series(*sorted(pairs)))


class TestPriceSeries:
    def test_rejects_unsorted_times(self):
        with pytest.raises(ValueError):
            PriceSeries((3, 1), (5, 5))
        with pytest.raises(ValueError):
            PriceSeries((1, 1), (5, 5))

    def test_rejects_negative_prices(self):
        with pytest.raises(ValueError):
            PriceSeries((1,), (-1,))

    def test_rejects_length_mismatch(self):
        with pytest.raises(ValueError):
            PriceSeries((1, 2), (5,))

    def test_from_observations_keeps_last_per_timestamp(self):
        s = PriceSeries.from_observations([(0, 9), (0, 6), (2, 4), (1, 7)])
        assert s.times == (0, 1, 2)
        assert s.prices == (6, 7, 4)


class TestPredictors:
    def test_worked_example(self):
        s = series((0, 5 * SCALE), (1, 7 * SCALE), (2, 6 * SCALE))
        assert predict(PredictorKind.LAST, s) == 6 * SCALE
        assert predict(PredictorKind.MEAN, s) == 6 * SCALE
        assert predict(PredictorKind.MAX, s) == 7 * SCALE
        assert predict(PredictorKind.MIN, s) == 5 * SCALE

    def test_mean_quantizes_half_even(self):
        s = series((0, 1), (1, 2))
        assert predict(PredictorKind.MEAN, s) == 2

    def test_empty_series_raises(self):
        empty = PriceSeries((), ())
        for kind in PredictorKind:
            with pytest.raises(NoHistory):
                predict(kind, empty)

    def test_regression_on_exact_line(self):
        # p = 2 + 3t in currency units, grid-exact
        s = series(*((t, (2 + 3 * t) * SCALE) for t in range(5)))
        assert predict(PredictorKind.REGRESSION, s) == (2 + 3 * 5) * SCALE

    def test_regression_clamps_at_zero(self):
        s = series((0, 6 * SCALE), (1, 3 * SCALE), (2, 0))
        assert predict(PredictorKind.REGRESSION, s) == 0

    def test_regression_single_point_falls_back_to_last(self):
        s = series((4, 9 * SCALE))
        assert ols_next(s) is None
        assert predict(PredictorKind.REGRESSION, s) == 9 * SCALE

    def test_regression_with_gaps_in_time(self):
        # line p = 10 + 2t sampled at irregular times still extrapolates
        s = series((0, 10 * SCALE), (3, 16 * SCALE), (7, 24 * SCALE))
        assert predict(PredictorKind.REGRESSION, s) == 26 * SCALE

    @given(price_series)
    def test_min_mean_max_ordering(self, s):
        lo = predict(PredictorKind.MIN, s)
        mid = predict(PredictorKind.MEAN, s)
        hi = predict(PredictorKind.MAX, s)
        assert lo <= mid <= hi

    @given(price_series)
    def test_mean_matches_exact_fraction(self, s):
        expected = round_fraction(Fraction(sum(s.prices), len(s)))
        assert predict(PredictorKind.MEAN, s) == expected

    @given(price_series)
    def test_all_predictions_non_negative(self, s):
        for kind in PredictorKind:
            assert predict(kind, s) >= 0


class TestInitialEstimate:
    def test_bounds_inclusive(self):
        rng = substream(3, "estimate", 0, 0)
        draws = {initial_estimate(rng, 2, 5) for _ in range(200)}
        assert draws <= set(range(2, 6))
        assert len(draws) > 1

    def test_degenerate_range(self):
        rng = random.Random(0)
        assert initial_estimate(rng, 7, 7) == 7

    def test_bad_range_is_config_error(self):
        rng = random.Random(0)
        with pytest.raises(ConfigError):
            initial_estimate(rng, 5, 2)
        with pytest.raises(ConfigError):
            initial_estimate(rng, -1, 2)

    def test_mean_converges_to_midpoint(self):
        rng = substream(99, "estimate", 1, 4)
        lo, hi = 0, 10 * SCALE
        n = 100_000
        mean = sum(initial_estimate(rng, lo, hi) for _ in range(n)) / n / SCALE
        assert abs(mean - 5.0) < 0.1


class TestSellerRules:
    def test_adaptive_up_on_sale_down_otherwise(self):
        rule = AdaptiveRule(up=1.05, down=0.95)
        assert seller_update(rule, 10 * SCALE, 1, 3) == 105_000
        assert seller_update(rule, 10 * SCALE, 0, 3) == 95_000

    def test_adaptive_validates_factors(self):
        with pytest.raises(ConfigError):
            AdaptiveRule(up=1.0, down=0.95)
        with pytest.raises(ConfigError):
            AdaptiveRule(up=1.05, down=0.0)
        with pytest.raises(ConfigError):
            AdaptiveRule(up=1.05, down=1.0)

    def test_linear_follows_the_clock(self):
        rule = LinearRule(intercept=5.0, slope=0.5)
        assert seller_update(rule, 123, 9, 0) == 5 * SCALE
        assert seller_update(rule, 123, 0, 4) == 7 * SCALE

    def test_linear_clamps_at_floor(self):
        rule = LinearRule(intercept=1.0, slope=-1.0)
        assert seller_update(rule, 5 * SCALE, 0, 10) == 0
        assert seller_update(rule, 5 * SCALE, 0, 10, price_floor=2 * SCALE) == 2 * SCALE

    def test_noise_is_gaussian_around_base(self):
        rule = NoisyLinearRule(intercept=7.0, slope=0.0, sigma=1.0)
        rng = substream(5, "price", 0, 0, 0)
        n = 10_000
        draws = [seller_update(rule, 0, 0, 1, rng) / SCALE for _ in range(n)]
        mean = sum(draws) / n
        var = sum((x - mean) ** 2 for x in draws) / n
        assert abs(mean - 7.0) < 0.05
        assert abs(var - 1.0) < 0.1

    def test_sigma_zero_noisy_equals_base(self):
        rng = random.Random(1)
        noisy = NoisyAdaptiveRule(up=1.05, down=0.95, sigma=0.0)
        base = AdaptiveRule(up=1.05, down=0.95)
        for sold in (0, 3):
            assert seller_update(noisy, 9 * SCALE, sold, 2, rng) == seller_update(base, 9 * SCALE, sold, 2)

    def test_noisy_needs_rng(self):
        with pytest.raises(ValueError):
            seller_update(NoisyLinearRule(5.0, 0.0, sigma=1.0), 0, 0, 0, rng=None)

    def test_negative_sigma_rejected(self):
        with pytest.raises(ConfigError):
            NoisyAdaptiveRule(sigma=-0.5)
        with pytest.raises(ConfigError):
            NoisyLinearRule(1.0, 0.0, sigma=-0.1)

    def test_noise_clamps_at_floor(self):
        rule = NoisyLinearRule(intercept=0.1, slope=0.0, sigma=5.0)
        rng = substream(8, "price", 0, 1, 1)
        draws = [seller_update(rule, 0, 0, 1, rng) for _ in range(500)]
        assert min(draws) == 0  # some noise draws dive below the floor
        assert all(d >= 0 for d in draws)

    @given(
        st.integers(0, 100 * SCALE),
        st.integers(0, 5),
        st.integers(0, 1000),
        st.integers(0, 3 * SCALE),
    )
    def test_update_never_breaches_floor(self, ask, sold, t, floor):
        if ask < floor:
            ask = floor
        rng = random.Random(ask ^ t)
        for rule in (
            AdaptiveRule(1.07, 0.93),
            LinearRule(2.0, -0.5),
            NoisyAdaptiveRule(1.07, 0.93, 0.6),
            NoisyLinearRule(2.0, -0.5, 0.6),
        ):
            assert seller_update(rule, ask, sold, t, rng, floor) >= floor
