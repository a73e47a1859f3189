import numpy as np
import pytest

from omniprice import (
    OracleConfig,
    PricePair,
    Region,
    RegionMismatchError,
    Segment,
    classify_region,
    demand,
    integrate_demand,
    profit,
    purchase_choice,
    region_demand,
)
from omniprice.core import ModelParams

from conftest import random_params


class TestDemand:
    def test_beu_demand(self, case1):
        d = demand(case1, 0.8, PricePair(1.5, 2.0), Region.BEU)
        assert (d.d_e, d.d_b, d.d_s) == (0.0, 0.5, 0.0)

    def test_sel_substitution(self, case1):
        # theta*p_s = 0.6 -> d_e = (3-1.6) - 1 + 0.6 = 1, d_s = 0.6 - (-0.6) ... = 1
        d = demand(case1, 0.8, PricePair(1.0, 0.75), Region.SEL, bops_offered=False)
        assert d.d_e == pytest.approx(1.0)
        assert d.d_s == pytest.approx(1.0)
        assert d.d_b == 0.0

    def test_region_e_full_market(self, case1):
        for theta in (0.2, 0.8):
            d = demand(case1, theta, PricePair(1.0, 2.0), Region.E, bops_offered=False)
            assert (d.d_e, d.d_b, d.d_s) == (2.0, 0.0, 0.0)

    def test_mismatched_region_raises(self, case1):
        with pytest.raises(RegionMismatchError):
            demand(case1, 0.8, PricePair(1.0, 2.0), Region.SEU)

    def test_total_mass_bounded(self, case1):
        rng = np.random.default_rng(5)
        for _ in range(300):
            theta = float(rng.uniform(0, 1))
            prices = PricePair(float(rng.uniform(0, 2)), float(rng.uniform(0, 2)))
            for bops in (True, False):
                region = classify_region(case1, theta, prices, bops)
                d = region_demand(case1, theta, prices, region)
                assert -1e-12 <= d.total <= 2 * case1.c + 1e-12
                if bops:
                    assert region is not Region.E
                else:
                    assert d.d_b == 0.0


class TestProfit:
    def test_bel_profit(self, case1):
        assert profit(case1, 0.8, PricePair(1.0, 2.0)) == pytest.approx(1.1)

    def test_region_e_profit(self, case1):
        assert profit(case1, 0.8, PricePair(1.0, 2.0), bops_offered=False) == pytest.approx(1.0)

    def test_zero_margin_leg(self):
        # price equal to cost on the only active legs: zero profit
        params = ModelParams(1.0, 0.5, 0.4, 0.1)
        p = profit(params, 0.9, PricePair(2.0, (2 * 0.9 - 1) / 0.9))  # S corner, store leg only
        store_margin = (2 * 0.9 - 1) / 0.9 - 0.1
        assert p == pytest.approx(store_margin * 1.0)
        params2 = ModelParams(1.0, 0.5, 0.4, (2 * 0.9 - 1) / 0.9)
        # hold theta=0.9 with c_s equal to the corner price: the store leg nets zero
        assert profit(params2, 0.9, PricePair(2.0, (2 * 0.9 - 1) / 0.9)) == pytest.approx(0.0)

    def test_negative_profit_is_valid(self):
        params = ModelParams(1.0, 0.9, 0.9, 0.9)
        assert profit(params, 0.5, PricePair(0.0, 2.0)) < 0.0


class TestPurchaseFilter:
    def test_none_when_best_utility_negative(self, case1):
        assert purchase_choice(case1, 0.6, PricePair(1.2, 1.5), 1.5) is Segment.NONE

    def test_buyer_keeps_segment(self, case1):
        assert purchase_choice(case1, 0.6, PricePair(1.2, 1.5), 0.5) is Segment.BOPS

    def test_delivery_count_flips_at_online_cost(self, case1, small_oracle):
        """Below p_e = c all non-locals buy delivery; above, delivery demand dies."""
        below = integrate_demand(case1, 0.8, PricePair(1.0 - 0.05, 2.0), True, small_oracle)
        above = integrate_demand(case1, 0.8, PricePair(1.0 + 0.05, 2.0), True, small_oracle)
        h = 2 * case1.c / small_oracle.d_resolution
        assert below.d_e == pytest.approx(1.0, abs=2 * h)
        assert above.d_e == 0.0
        # BOPS demand is capped by the buy boundary 2c - p_e only above c
        assert below.d_b == pytest.approx(1.0, abs=2 * h)
        assert above.d_b == pytest.approx(2 * case1.c - 1.05, abs=2 * h)


class TestOracleEquivalence:
    def test_formulas_match_integration_on_random_prices(self, small_oracle):
        """Closed-form demand equals integrated demand up to discretization."""
        rng = np.random.default_rng(17)
        h = None
        for _ in range(120):
            params = random_params(rng)
            theta = float(rng.uniform(0, 1))
            prices = PricePair(
                float(rng.uniform(0, params.v)), float(rng.uniform(0, params.v))
            )
            h = params.v / small_oracle.d_resolution
            for bops in (True, False):
                region = classify_region(params, theta, prices, bops)
                formula = region_demand(params, theta, prices, region)
                numeric = integrate_demand(params, theta, prices, bops, small_oracle)
                for got, want in zip(
                    (numeric.d_e, numeric.d_b, numeric.d_s), (formula.d_e, formula.d_b, formula.d_s)
                ):
                    assert got == pytest.approx(want, abs=2 * h)

    def test_profit_matches_integration_on_a_grid(self, case1, small_oracle):
        """Analytic profit equals per-consumer integration on a price grid."""
        from omniprice import integrate_profit

        h = case1.v / small_oracle.d_resolution
        bound = 3 * case1.v * h  # three legs, one cell each, price-cap margins
        for theta in (0.0, 0.3, 0.5, 0.8, 1.0):
            for p_e in np.linspace(0.05, 1.95, 12):
                for p_s in np.linspace(0.05, 1.95, 12):
                    prices = PricePair(float(p_e), float(p_s))
                    for bops in (True, False):
                        exact = profit(case1, theta, prices, bops)
                        numeric = integrate_profit(case1, theta, prices, bops, small_oracle)
                        assert abs(exact - numeric) <= bound
