"""Selling-season simulations with a decaying stock belief.

A seasonal product sells over a fixed number of periods. At the start of
period t the retailer observes the shoppers' stock belief theta_t =
1/(1 + alpha*t), reprices, and picks a strategy from the menu its BOPS
policy allows:

    ALWAYS_BOPS     argmax over {BEL, BEU, SEL, SEU, S}
    NEVER_BOPS      argmax over {E, SEL, SEU, S}
    OPTIMAL_SWITCH  argmax over all six

The physical store starts the season with finite stock that is never
replenished; the fulfillment center is never constrained. Store-channel
demand (BOPS pickups plus walk-in purchases) is Poisson with mean equal to
the chosen strategy's analytical store-channel demand; sales are capped by
remaining stock, lost sales earn nothing, and once stock hits zero every
scenario is forced onto Strategy E (online only) for the rest of the season.
Delivery demand is deterministic.

Randomness is split per replication from one master seed: a theta stream
(shared by all scenarios, so belief paths are common random numbers) and a
demand stream (re-seeded identically per scenario, so scenarios that pick
the same strategies see the same Poisson draws). Runs are therefore
bitwise-reproducible for a given config and seed, independent of execution
order.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .core import EPS, ModelParams, Region
from .strategy import (
    ALL_STRATEGIES,
    BOPS_MENU,
    NO_BOPS_MENU,
    StrategyOutcome,
    best_in_menu,
    evaluate_menu,
    optimal_in_region,
)


class Scenario(Enum):
    ALWAYS_BOPS = "always_bops"
    NEVER_BOPS = "never_bops"
    OPTIMAL_SWITCH = "optimal_switch"


_MENUS = {
    Scenario.ALWAYS_BOPS: BOPS_MENU,
    Scenario.NEVER_BOPS: NO_BOPS_MENU,
    Scenario.OPTIMAL_SWITCH: ALL_STRATEGIES,
}


@dataclass(frozen=True)
class SeasonConfig:
    params: ModelParams
    periods: int = 12
    alpha: float = 0.05
    store_inventory0: float = 10.0
    scenario: Scenario = Scenario.OPTIMAL_SWITCH
    seed: int = 0
    theta_noise: float = 0.95  # advance probability per period; >= 1 disables noise

    def __post_init__(self) -> None:
        if self.periods < 1:
            raise ValueError("periods must be at least 1")
        if self.alpha < 0:
            raise ValueError("alpha must be non-negative")
        if self.store_inventory0 < 0:
            raise ValueError("store_inventory0 must be non-negative")
        if not 0.0 <= self.theta_noise:
            raise ValueError("theta_noise must be a probability (values >= 1 disable noise)")


def theta_path(
    alpha: float,
    periods: int,
    noise: float | None = None,
    rng: np.random.Generator | None = None,
) -> list[float]:
    """Belief path theta_t = 1/(1 + alpha*j_t) for t = 1..periods.

    Deterministic (j_t = t) when noise is None or >= 1; otherwise j advances
    by one step with probability ``noise`` each period and repeats the prior
    value otherwise. The deterministic path consumes no randomness.
    """
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    if noise is None or noise >= 1.0:
        return [1.0 / (1.0 + alpha * t) for t in range(1, periods + 1)]
    if rng is None:
        raise ValueError("a random generator is required when noise is active")
    path = []
    j = 0
    for _ in range(periods):
        if rng.random() < noise:
            j += 1
        path.append(1.0 / (1.0 + alpha * j))
    return path


@dataclass(frozen=True)
class PeriodRow:
    t: int
    theta: float
    strategy: Region
    offer_bops: bool
    p_e: float
    p_s: float
    d_e: float
    d_b: float
    d_s: float
    store_demand: int
    store_sales: float
    inventory_end: float
    profit: float


@dataclass(frozen=True)
class SeasonRecord:
    rows: tuple[PeriodRow, ...]
    total_profit: float
    switching_periods: tuple[int, ...]  # every period whose strategy differs from the prior one


def _choose_strategy(
    params: ModelParams, theta: float, scenario: Scenario, inventory: float
) -> StrategyOutcome:
    if inventory <= EPS:
        return optimal_in_region(params, theta, Region.E)
    return best_in_menu(evaluate_menu(params, theta), _MENUS[scenario])


def simulate_period(
    params: ModelParams,
    theta: float,
    inventory: float,
    scenario: Scenario,
    rng: np.random.Generator,
    t: int = 1,
) -> PeriodRow:
    """One period: pick a strategy, draw store-channel demand, settle profit.

    Realized profit is the deterministic delivery margin plus the store-leg
    unit margin (BOPS units sell at p_e and cost c_b; walk-in units at p_s
    and cost c_s) on min(demand draw, remaining stock).
    """
    outcome = _choose_strategy(params, theta, scenario, inventory)
    lam = outcome.demands.store_channel
    draw = int(rng.poisson(lam))
    sales = float(min(draw, inventory))
    if outcome.demands.d_b > 0.0:
        unit_margin = outcome.prices.p_e - params.c_b
    elif outcome.demands.d_s > 0.0:
        unit_margin = outcome.prices.p_s - params.c_s
    else:
        unit_margin = 0.0
    realized = (outcome.prices.p_e - params.c_e) * outcome.demands.d_e + unit_margin * sales
    return PeriodRow(
        t=t,
        theta=theta,
        strategy=outcome.strategy,
        offer_bops=outcome.strategy.offers_bops,
        p_e=outcome.prices.p_e,
        p_s=outcome.prices.p_s,
        d_e=outcome.demands.d_e,
        d_b=outcome.demands.d_b,
        d_s=outcome.demands.d_s,
        store_demand=draw,
        store_sales=sales,
        inventory_end=inventory - sales,
        profit=realized,
    )


def _run_path(
    params: ModelParams,
    inventory0: float,
    path: list[float],
    scenario: Scenario,
    rng: np.random.Generator,
) -> SeasonRecord:
    rows = []
    inventory = inventory0
    for t, theta in enumerate(path, start=1):
        row = simulate_period(params, theta, inventory, scenario, rng, t)
        rows.append(row)
        inventory = row.inventory_end
    switches = tuple(
        row.t for prev, row in zip(rows, rows[1:]) if row.strategy is not prev.strategy
    )
    return SeasonRecord(
        rows=tuple(rows),
        total_profit=math.fsum(r.profit for r in rows),
        switching_periods=switches,
    )


def _spawn_streams(seed: int, replications: int):
    """Per-replication (theta, demand) seed pairs derived from the master seed."""
    master = np.random.SeedSequence(seed)
    return [tuple(child.spawn(2)) for child in master.spawn(replications)]


def simulate_season(cfg: SeasonConfig) -> SeasonRecord:
    """One seeded season under the configured scenario."""
    theta_ss, demand_ss = _spawn_streams(cfg.seed, 1)[0]
    noise = cfg.theta_noise if cfg.theta_noise < 1.0 else None
    path = theta_path(cfg.alpha, cfg.periods, noise, np.random.default_rng(theta_ss))
    return _run_path(cfg.params, cfg.store_inventory0, path, cfg.scenario, np.random.default_rng(demand_ss))


@dataclass(frozen=True)
class ScenarioStats:
    scenario: Scenario
    mean_profit: float
    std_profit: float
    min_profit: float
    max_profit: float
    switch_histogram: dict[int, int] = field(default_factory=dict)
    none_count: int = 0
    none_to_e: dict[int, int] = field(default_factory=dict)
    path_types: dict[str, int] = field(default_factory=dict)


@dataclass(frozen=True)
class MonteCarloResult:
    replications: int
    seed: int
    stats: dict[Scenario, ScenarioStats]
    gain_vs_always_pct: float
    gain_vs_never_pct: float


def _classify_path(record: SeasonRecord):
    """(first switch period to a non-E strategy or None, first period entering E or None)."""
    strategies = [row.strategy for row in record.rows]
    switch = next(
        (
            t
            for t, (prev, cur) in enumerate(zip(strategies, strategies[1:]), start=2)
            if cur is not prev and cur is not Region.E
        ),
        None,
    )
    e_entry = next(
        (
            t
            for t, (prev, cur) in enumerate(zip(strategies, strategies[1:]), start=2)
            if cur is Region.E and prev is not Region.E
        ),
        None,
    )
    collapsed = [strategies[0]] + [cur for prev, cur in zip(strategies, strategies[1:]) if cur is not prev]
    return switch, e_entry, "->".join(s.value for s in collapsed)


def monte_carlo(cfg: SeasonConfig, replications: int = 1000) -> MonteCarloResult:
    """All three scenarios on common random numbers.

    Each replication shares one belief path across scenarios and re-seeds an
    identical demand stream per scenario, pairing the comparison. Reports
    per-scenario profit statistics, the histogram of the first switch to a
    non-E strategy (NONE bucket for paths that never make one, with their
    moves into E tallied separately), collapsed path-type counts, and the
    percentage gain of OPTIMAL_SWITCH over each fixed policy.
    """
    if replications < 1:
        raise ValueError("replications must be at least 1")
    noise = cfg.theta_noise if cfg.theta_noise < 1.0 else None
    totals: dict[Scenario, list[float]] = {s: [] for s in Scenario}
    switch_hist: dict[Scenario, Counter] = {s: Counter() for s in Scenario}
    none_count: dict[Scenario, int] = {s: 0 for s in Scenario}
    none_to_e: dict[Scenario, Counter] = {s: Counter() for s in Scenario}
    path_types: dict[Scenario, Counter] = {s: Counter() for s in Scenario}

    for theta_ss, demand_ss in _spawn_streams(cfg.seed, replications):
        path = theta_path(cfg.alpha, cfg.periods, noise, np.random.default_rng(theta_ss))
        for scenario in Scenario:
            record = _run_path(
                cfg.params, cfg.store_inventory0, path, scenario, np.random.default_rng(demand_ss)
            )
            totals[scenario].append(record.total_profit)
            switch, e_entry, path_type = _classify_path(record)
            if switch is None:
                none_count[scenario] += 1
                if e_entry is not None:
                    none_to_e[scenario][e_entry] += 1
            else:
                switch_hist[scenario][switch] += 1
            path_types[scenario][path_type] += 1

    stats = {}
    for scenario in Scenario:
        arr = np.asarray(totals[scenario])
        stats[scenario] = ScenarioStats(
            scenario=scenario,
            mean_profit=float(arr.mean()),
            std_profit=float(arr.std()),
            min_profit=float(arr.min()),
            max_profit=float(arr.max()),
            switch_histogram=dict(sorted(switch_hist[scenario].items())),
            none_count=none_count[scenario],
            none_to_e=dict(sorted(none_to_e[scenario].items())),
            path_types=dict(path_types[scenario].most_common()),
        )
    mean_opt = stats[Scenario.OPTIMAL_SWITCH].mean_profit
    mean_always = stats[Scenario.ALWAYS_BOPS].mean_profit
    mean_never = stats[Scenario.NEVER_BOPS].mean_profit
    return MonteCarloResult(
        replications=replications,
        seed=cfg.seed,
        stats=stats,
        gain_vs_always_pct=100.0 * (mean_opt - mean_always) / mean_always,
        gain_vs_never_pct=100.0 * (mean_opt - mean_never) / mean_never,
    )
