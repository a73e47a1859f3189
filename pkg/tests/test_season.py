import math

import numpy as np
import pytest

from omniprice import (
    Region,
    Scenario,
    SeasonConfig,
    monte_carlo,
    simulate_period,
    simulate_season,
    theta_path,
    thresholds,
)


def first_below(path, threshold):
    return next(t for t, th in enumerate(path, start=1) if th < threshold)


class TestThetaPath:
    def test_formula_values(self):
        path = theta_path(0.05, 12)
        assert path[0] == pytest.approx(1 / 1.05)
        assert path[11] == pytest.approx(0.625)

    def test_no_decay(self):
        assert theta_path(0.0, 5) == [1.0] * 5

    def test_noise_disabled_consumes_no_randomness(self):
        rng = np.random.default_rng(1)
        before = rng.bit_generator.state["state"]["state"]
        theta_path(0.05, 12, noise=1.0, rng=rng)
        assert rng.bit_generator.state["state"]["state"] == before

    def test_noise_repeats_or_advances(self):
        rng = np.random.default_rng(2)
        path = theta_path(0.05, 200, noise=0.5, rng=rng)
        det = theta_path(0.05, 200)
        assert path[0] in (1.0, det[0])
        steps = set()
        j_prev = 0
        for th in path:
            j = round((1 / th - 1) / 0.05)
            steps.add(j - j_prev)
            j_prev = j
        assert steps == {0, 1}

    def test_noise_requires_rng(self):
        with pytest.raises(ValueError):
            theta_path(0.05, 12, noise=0.95, rng=None)


class TestSimulatePeriod:
    def test_sel_period_case1(self, case1):
        rng = np.random.default_rng(5)
        row = simulate_period(case1, 0.9, 10.0, Scenario.OPTIMAL_SWITCH, rng, t=1)
        assert row.strategy is Region.SEL
        assert row.d_s == pytest.approx(1.0)  # Poisson mean: the store-channel demand
        assert row.p_s == pytest.approx((2 * 0.9 - 1) / 0.9)
        expected = (1.0 - 0.5) * 1.0 + (row.p_s - 0.1) * row.store_sales
        assert row.profit == pytest.approx(expected)
        assert row.inventory_end == 10.0 - row.store_sales

    def test_zero_inventory_forces_online_only(self, case1):
        for scenario in Scenario:
            row = simulate_period(case1, 0.9, 0.0, scenario, np.random.default_rng(5), t=3)
            assert row.strategy is Region.E
            assert row.profit == pytest.approx(1.0)  # 2 * (c - c_e) * c
            assert row.store_demand == 0 and row.store_sales == 0.0

    def test_zero_demand_draw_leaves_inventory(self, case1):
        seed = next(
            s for s in range(100) if int(np.random.default_rng(s).poisson(1.0)) == 0
        )
        row = simulate_period(case1, 0.9, 10.0, Scenario.OPTIMAL_SWITCH, np.random.default_rng(seed))
        assert row.store_demand == 0
        assert row.store_sales == 0.0
        assert row.inventory_end == 10.0
        assert row.profit == pytest.approx(0.5)  # delivery leg only

    def test_partial_stockout_caps_sales(self, case1):
        seed = next(
            s for s in range(100) if int(np.random.default_rng(s).poisson(1.0)) >= 2
        )
        row = simulate_period(case1, 0.9, 1.0, Scenario.OPTIMAL_SWITCH, np.random.default_rng(seed))
        assert row.store_demand >= 2
        assert row.store_sales == 1.0
        assert row.inventory_end == 0.0


class TestSimulateSeason:
    def test_deterministic_switch_matches_threshold_crossing(self, case1, case2, case3):
        for params, threshold_name in ((case1, "theta_bs_l"), (case2, "theta_s_e"), (case3, "theta_bs_u")):
            cfg = SeasonConfig(
                params=params, periods=12, alpha=0.07, store_inventory0=1e9,
                scenario=Scenario.OPTIMAL_SWITCH, seed=7, theta_noise=1.0,
            )
            record = simulate_season(cfg)
            path = theta_path(0.07, 12)
            expected_switch = first_below(path, getattr(thresholds(params), threshold_name))
            assert record.switching_periods[0] == expected_switch

    def test_case1_narrative_pattern(self, case1):
        """alpha = 0.07 crosses theta_bs_l between periods 4 and 5: SEL then BEL."""
        cfg = SeasonConfig(case1, 12, 0.07, 1e9, Scenario.OPTIMAL_SWITCH, seed=1, theta_noise=1.0)
        record = simulate_season(cfg)
        strategies = [r.strategy for r in record.rows]
        assert strategies[:4] == [Region.SEL] * 4
        assert strategies[4] is Region.BEL

    def test_zero_initial_inventory_means_online_only_season(self, case1):
        cfg = SeasonConfig(case1, 12, 0.05, 0.0, Scenario.OPTIMAL_SWITCH, seed=3, theta_noise=1.0)
        record = simulate_season(cfg)
        assert all(r.strategy is Region.E for r in record.rows)
        assert record.total_profit == pytest.approx(12 * 1.0)
        assert record.switching_periods == ()

    def test_forced_e_after_exhaustion(self, case1):
        cfg = SeasonConfig(case1, 12, 0.07, 3.0, Scenario.OPTIMAL_SWITCH, seed=11, theta_noise=1.0)
        record = simulate_season(cfg)
        exhausted = next((r.t for r in record.rows if r.inventory_end <= 0.0), None)
        assert exhausted is not None and exhausted < 12
        for r in record.rows:
            if r.t > exhausted:
                assert r.strategy is Region.E

    def test_inventory_conserved_and_monotone(self, case1):
        cfg = SeasonConfig(case1, 12, 0.05, 10.0, Scenario.OPTIMAL_SWITCH, seed=13, theta_noise=1.0)
        record = simulate_season(cfg)
        total_sales = sum(r.store_sales for r in record.rows)
        assert record.rows[-1].inventory_end == pytest.approx(10.0 - total_sales)
        inv = 10.0
        for r in record.rows:
            assert 0.0 <= r.inventory_end <= inv
            inv = r.inventory_end

    def test_bitwise_reproducible(self, case1):
        cfg = SeasonConfig(case1, 12, 0.05, 10.0, Scenario.OPTIMAL_SWITCH, seed=17, theta_noise=0.95)
        assert simulate_season(cfg) == simulate_season(cfg)

    def test_single_period(self, case1):
        cfg = SeasonConfig(case1, 1, 0.05, 10.0, Scenario.OPTIMAL_SWITCH, seed=19, theta_noise=1.0)
        record = simulate_season(cfg)
        assert len(record.rows) == 1
        assert record.switching_periods == ()


class TestMonteCarlo:
    def test_optimal_dominates_fixed_policies(self, case1):
        cfg = SeasonConfig(case1, 12, 0.05, 10.0, Scenario.OPTIMAL_SWITCH, seed=23, theta_noise=0.95)
        result = monte_carlo(cfg, replications=300)
        mean_opt = result.stats[Scenario.OPTIMAL_SWITCH].mean_profit
        assert mean_opt >= result.stats[Scenario.ALWAYS_BOPS].mean_profit
        assert mean_opt >= result.stats[Scenario.NEVER_BOPS].mean_profit
        assert result.gain_vs_never_pct > 0.0

    def test_common_random_numbers_pair_scenarios(self, case1):
        """With these costs the full menu never picks E pre-stockout, so the
        always-BOPS and switch scenarios follow identical paths."""
        cfg = SeasonConfig(case1, 12, 0.05, 10.0, Scenario.OPTIMAL_SWITCH, seed=29, theta_noise=0.95)
        result = monte_carlo(cfg, replications=50)
        assert result.stats[Scenario.OPTIMAL_SWITCH].mean_profit == pytest.approx(
            result.stats[Scenario.ALWAYS_BOPS].mean_profit
        )
        assert result.gain_vs_always_pct == pytest.approx(0.0)

    def test_histogram_buckets_cover_replications(self, case1):
        cfg = SeasonConfig(case1, 12, 0.05, 10.0, Scenario.OPTIMAL_SWITCH, seed=31, theta_noise=0.95)
        result = monte_carlo(cfg, replications=120)
        for scenario in Scenario:
            st = result.stats[scenario]
            assert sum(st.switch_histogram.values()) + st.none_count == 120
            assert sum(st.path_types.values()) == 120
            assert sum(st.none_to_e.values()) <= st.none_count

    def test_histogram_concentrates_with_noise(self, case1):
        """Noisy paths still switch in a narrow band around the crossing period."""
        cfg = SeasonConfig(case1, 12, 0.07, 1e9, Scenario.OPTIMAL_SWITCH, seed=37, theta_noise=0.95)
        result = monte_carlo(cfg, replications=200)
        hist = result.stats[Scenario.OPTIMAL_SWITCH].switch_histogram
        assert hist, "expected switches away from SEL"
        modal_period, modal_count = max(hist.items(), key=lambda kv: kv[1])
        assert modal_count >= 0.5 * 200
        assert abs(modal_period - 5) <= 1  # deterministic crossing sits at t = 5

    def test_moves_into_e_fill_the_none_bucket(self, case2):
        """A path whose only change is into E counts as NONE plus a move-to-E."""
        cfg = SeasonConfig(case2, 12, 0.07, 1e9, Scenario.OPTIMAL_SWITCH, seed=37, theta_noise=0.95)
        result = monte_carlo(cfg, replications=100)
        st = result.stats[Scenario.NEVER_BOPS]
        assert st.switch_histogram == {}  # SEL -> E only; never to another strategy
        assert st.none_count == 100
        assert sum(st.none_to_e.values()) == 100

    def test_single_replication_deterministic(self, case1):
        cfg = SeasonConfig(case1, 12, 0.05, 10.0, Scenario.OPTIMAL_SWITCH, seed=41, theta_noise=1.0)
        a = monte_carlo(cfg, replications=1)
        b = monte_carlo(cfg, replications=1)
        assert a == b

    def test_strict_gain_when_e_competes(self, case2):
        """Case-2 costs make E the pre-stockout winner at low theta, so the
        switching policy strictly beats always-BOPS."""
        cfg = SeasonConfig(case2, 12, 0.05, 10.0, Scenario.OPTIMAL_SWITCH, seed=43, theta_noise=0.95)
        result = monte_carlo(cfg, replications=200)
        assert result.gain_vs_always_pct > 0.0
