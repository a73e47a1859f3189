"""Pricing and fulfillment toolkit for a two-channel (online + one store) retailer.

Layers:

- :mod:`omniprice.core`     consumer utilities, segmentation, price regions
- :mod:`omniprice.demand`   closed-form demand and profit per region
- :mod:`omniprice.strategy` per-region optima, thresholds, strategy selection
- :mod:`omniprice.oracle`   brute-force integration / grid-search verification
- :mod:`omniprice.season`   seeded season and Monte Carlo simulations
- :mod:`omniprice.cli`      file-driven runner emitting CSV + run manifests
"""

from .core import (
    EPS,
    ModelParams,
    PricePair,
    Region,
    Segment,
    Stage,
    classify_consumer,
    classify_region,
    region_admissible,
    stage,
    utilities,
)
from .demand import DemandVector, RegionMismatchError, demand, profit, purchase_choice, region_demand
from .oracle import (
    EmptyRegionError,
    GridBest,
    GridSearchResult,
    OracleConfig,
    grid_best,
    grid_search,
    integrate_demand,
    integrate_profit,
)
from .presets import COST_CASES
from .season import (
    MonteCarloResult,
    PeriodRow,
    Scenario,
    SeasonConfig,
    SeasonRecord,
    monte_carlo,
    simulate_period,
    simulate_season,
    theta_path,
)
from .strategy import (
    Relation,
    Selection,
    StrategyOutcome,
    Thresholds,
    compare,
    cost_region_map,
    optimal_in_region,
    select_strategy,
    thresholds,
)

__version__ = "0.1.0"

__all__ = [
    "EPS",
    "COST_CASES",
    "DemandVector",
    "EmptyRegionError",
    "GridBest",
    "GridSearchResult",
    "ModelParams",
    "MonteCarloResult",
    "OracleConfig",
    "PeriodRow",
    "PricePair",
    "Region",
    "RegionMismatchError",
    "Relation",
    "Scenario",
    "SeasonConfig",
    "SeasonRecord",
    "Segment",
    "Selection",
    "Stage",
    "StrategyOutcome",
    "Thresholds",
    "classify_consumer",
    "classify_region",
    "compare",
    "cost_region_map",
    "demand",
    "grid_best",
    "grid_search",
    "integrate_demand",
    "integrate_profit",
    "monte_carlo",
    "optimal_in_region",
    "profit",
    "purchase_choice",
    "region_admissible",
    "region_demand",
    "select_strategy",
    "simulate_period",
    "simulate_season",
    "stage",
    "theta_path",
    "thresholds",
    "utilities",
]
