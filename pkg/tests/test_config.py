"""Config parsing, validation errors with field paths, round-tripping."""

import textwrap

import pytest

from datamarket.config import (
    CatalogSpec,
    MarketConfig,
    load_config,
    parse_config,
    write_config,
)
from datamarket.errors import ConfigError
from datamarket.money import SCALE
from datamarket.strategies import (
    AdaptiveRule,
    LinearRule,
    NoisyAdaptiveRule,
    NoisyLinearRule,
    PredictorKind,
)

from conftest import CONFIG_DIR, mixed_market_config

GOOD = textwrap.dedent(
    """
    market:
      horizon: 3
      seed: 42
      price_floor: 0.5
      initial_estimate_range: [1, 9.25]
      accrual_to_budget: false
    datasets:
      - {name: alpha, domain: retail, num_examples: 10, num_features: 2, supply: infinite}
      - {name: beta, domain: ads, num_examples: 20, num_features: 3, supply: 4}
    buyers:
      - budget: 12.5
        predictor: mean
        wishlist: [0, 1]
        valuations: {0: 3, 1: "2.75"}
    sellers:
      - budget: 0
        rule: {kind: noisy_linear, intercept: 6, slope: -0.1, sigma: 0.2}
        catalog:
          0: 8
          1: {ask: 4.5, remaining: 2}
    """
)


def parse_yaml(text, tmp_path, name="m.yaml"):
    path = tmp_path / name
    path.write_text(textwrap.dedent(text))
    return load_config(path)


class TestParsing:
    def test_good_document(self, tmp_path):
        cfg = parse_yaml(GOOD, tmp_path)
        assert cfg.horizon == 3
        assert cfg.seed == 42
        assert cfg.price_floor == SCALE // 2
        assert cfg.initial_estimate_range == (SCALE, 92_500)
        assert cfg.accrual_to_budget is False
        assert [d.name for d in cfg.datasets] == ["alpha", "beta"]
        assert cfg.datasets[0].supply is None
        assert cfg.datasets[1].supply == 4
        buyer = cfg.buyers[0]
        assert buyer.budget == 125_000
        assert buyer.predictor is PredictorKind.MEAN
        assert buyer.valuations == {0: 3 * SCALE, 1: 27_500}
        seller = cfg.sellers[0]
        assert seller.rule == NoisyLinearRule(6.0, -0.1, 0.2)
        assert seller.catalog[0] == CatalogSpec(8 * SCALE, None)
        assert seller.catalog[1] == CatalogSpec(45_000, 2)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError) as err:
            load_config(tmp_path / "nope.yaml")
        assert "nope.yaml" in str(err.value)

    def test_invalid_yaml(self, tmp_path):
        path = tmp_path / "broken.yaml"
        path.write_text("market: [unclosed")
        with pytest.raises(ConfigError):
            load_config(path)

    def test_bundled_configs_parse(self):
        for name in ("minimal.yaml", "five_predictors.yaml"):
            cfg = load_config(CONFIG_DIR / name)
            cfg.validate()

    def test_defaults_apply(self, tmp_path):
        cfg = parse_yaml(
            """
            market: {horizon: 1, seed: 0}
            datasets: [{name: a, domain: x, num_examples: 1, num_features: 1, supply: infinite}]
            buyers: []
            sellers: []
            """,
            tmp_path,
        )
        assert cfg.price_floor == 0
        assert cfg.accrual_to_budget is True
        assert cfg.initial_estimate_range == (0, 10 * SCALE)


def expect_error(tmp_path, text, path_fragment):
    with pytest.raises(ConfigError) as err:
        parse_yaml(text, tmp_path)
    assert path_fragment in err.value.path, err.value


BASE = """
market: {horizon: 2, seed: 1}
datasets: [{name: a, domain: x, num_examples: 1, num_features: 1, supply: infinite}]
buyers: [{budget: 5, predictor: last, wishlist: [0], valuations: {0: 1}}]
sellers: [{budget: 0, rule: {kind: adaptive}, catalog: {0: 3}}]
"""


class TestFieldPathErrors:
    def test_unknown_predictor(self, tmp_path):
        bad = BASE.replace("predictor: last", "predictor: lstm")
        expect_error(tmp_path, bad, "buyers[0].predictor")

    def test_unknown_rule_kind(self, tmp_path):
        bad = BASE.replace("kind: adaptive", "kind: surge")
        expect_error(tmp_path, bad, "sellers[0].rule.kind")

    def test_bad_rule_parameter(self, tmp_path):
        bad = BASE.replace("{kind: adaptive}", "{kind: adaptive, up: 0.5}")
        expect_error(tmp_path, bad, "sellers[0].rule.up")

    def test_dangling_wishlist_id(self, tmp_path):
        bad = BASE.replace("wishlist: [0]", "wishlist: [0, 7]").replace(
            "valuations: {0: 1}", "valuations: {0: 1, 7: 1}"
        )
        expect_error(tmp_path, bad, "buyers[0].wishlist")

    def test_dangling_catalog_id(self, tmp_path):
        bad = BASE.replace("catalog: {0: 3}", "catalog: {5: 3}")
        expect_error(tmp_path, bad, "sellers[0].catalog")

    def test_negative_money(self, tmp_path):
        bad = BASE.replace("budget: 5", "budget: -5")
        expect_error(tmp_path, bad, "buyers[0].budget")

    def test_negative_valuation(self, tmp_path):
        bad = BASE.replace("valuations: {0: 1}", "valuations: {0: -1}")
        expect_error(tmp_path, bad, "buyers[0].valuations[0]")

    def test_missing_valuation_for_wish(self, tmp_path):
        bad = BASE.replace("valuations: {0: 1}", "valuations: {}")
        expect_error(tmp_path, bad, "buyers[0].valuations")

    def test_duplicate_wishlist(self, tmp_path):
        bad = BASE.replace("wishlist: [0]", "wishlist: [0, 0]")
        expect_error(tmp_path, bad, "buyers[0].wishlist")

    def test_ask_below_floor(self, tmp_path):
        bad = BASE.replace("market: {horizon: 2, seed: 1}", "market: {horizon: 2, seed: 1, price_floor: 4}")
        expect_error(tmp_path, bad, "sellers[0].catalog[0].ask")

    def test_unknown_key_rejected(self, tmp_path):
        bad = BASE.replace("budget: 5,", "budget: 5, color: blue,")
        expect_error(tmp_path, bad, "buyers[0].color")

    def test_bad_estimate_range(self, tmp_path):
        bad = BASE.replace(
            "market: {horizon: 2, seed: 1}",
            "market: {horizon: 2, seed: 1, initial_estimate_range: [9, 1]}",
        )
        expect_error(tmp_path, bad, "initial_estimate_range")

    def test_bad_seed(self, tmp_path):
        bad = BASE.replace("seed: 1", "seed: -3")
        expect_error(tmp_path, bad, "market.seed")

    def test_bad_horizon(self, tmp_path):
        bad = BASE.replace("horizon: 2", "horizon: -2")
        expect_error(tmp_path, bad, "market.horizon")

    def test_money_not_a_number(self, tmp_path):
        bad = BASE.replace("budget: 5", "budget: lots")
        expect_error(tmp_path, bad, "buyers[0].budget")


class TestRoundTrip:
    def test_write_then_load_is_identity(self, tmp_path):
        cfg = mixed_market_config(n_buyers=4, n_sellers=3, n_datasets=6, horizon=7, seed=99)
        path = tmp_path / "round.yaml"
        write_config(cfg, path)
        assert load_config(path) == cfg

    def test_round_trip_keeps_rule_types(self, tmp_path):
        cfg = mixed_market_config(n_buyers=2, n_sellers=4, n_datasets=5)
        path = tmp_path / "rules.yaml"
        write_config(cfg, path)
        loaded = load_config(path)
        assert [type(s.rule) for s in loaded.sellers] == [
            AdaptiveRule,
            LinearRule,
            NoisyAdaptiveRule,
            NoisyLinearRule,
        ]

    def test_round_trip_keeps_fractional_money(self, tmp_path):
        cfg = mixed_market_config(n_buyers=1, n_sellers=1, n_datasets=2)
        cfg.buyers[0].budget = 123_456  # 12.3456 units
        cfg.initial_estimate_range = (1, 99_999)
        path = tmp_path / "frac.yaml"
        write_config(cfg, path)
        assert load_config(path) == cfg

    def test_finite_supply_round_trips(self, tmp_path):
        cfg = mixed_market_config(n_buyers=1, n_sellers=1, n_datasets=3)
        cfg.datasets[1].supply = 5
        next(iter(cfg.sellers[0].catalog.values())).remaining = 2
        path = tmp_path / "supply.yaml"
        write_config(cfg, path)
        assert load_config(path) == cfg


class TestValidateDirectly:
    def test_validate_accepts_built_config(self):
        mixed_market_config().validate()

    def test_validate_rejects_bad_predictor_type(self):
        cfg = mixed_market_config(n_buyers=1)
        cfg.buyers[0].predictor = "last"  # bare string, not the enum
        with pytest.raises(ConfigError):
            cfg.validate()

    def test_validate_rejects_non_rule(self):
        cfg = mixed_market_config(n_sellers=1)
        cfg.sellers[0].rule = object()
        with pytest.raises(ConfigError):
            cfg.validate()
