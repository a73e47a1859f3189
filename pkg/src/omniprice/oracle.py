"""Brute-force verification of the closed forms.

The oracle never touches the closed-form demand or profit expressions. It
rebuilds everything from the utility definitions: place consumers on a
midpoint grid over [0, 2c], let each grid consumer pick the option with the
highest utility (same weak/strict tie pattern as the classifier: BOPS wins
its weak comparisons, delivery beats store purchase on ties), drop consumers
whose best utility is negative, and integrate the surviving mass per option.
Midpoints keep measure-zero boundary consumers from biasing a whole cell.

``grid_best`` maximizes that integrated profit over a price grid. For speed
it counts grid consumers below/above the relevant utility breakpoints with
``np.searchsorted`` over the same midpoint grid, which returns exactly the
integer counts the per-consumer loop produces (unit tests assert bitwise
equality); the naive integrator stays the reference for single price pairs.

Certificates against the closed forms use two documented error terms:

    integration:  each demand leg is an interval count, off by at most half
                  a cell, so profit is off by at most margin * h_d per pair
                  of active legs (margin <= 2c);
    optimality:   |dprofit/dprice| <= 4c + max fulfillment cost on the
                  admissible box, so the best in-region grid point sits
                  within that Lipschitz constant times one grid step of the
                  region supremum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import EPS, ModelParams, PricePair, Region, _region_codes_arrays, check_prices, check_theta
from .demand import DemandVector


class EmptyRegionError(ValueError):
    """Raised when no grid point classifies into the requested region."""


@dataclass(frozen=True)
class OracleConfig:
    """Grid resolutions and the base tolerance for oracle certificates."""

    d_resolution: int = 4001
    p_resolution: int = 2001
    tolerance: float = 1e-6

    def __post_init__(self) -> None:
        if self.d_resolution < 101 or self.p_resolution < 101:
            raise ValueError("oracle resolutions must be at least 101")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")


def distance_grid(params: ModelParams, n: int) -> tuple[np.ndarray, float]:
    """Midpoint grid over [0, 2c]: n cells of width h, consumers at cell centers."""
    h = params.v / n
    return (np.arange(n) + 0.5) * h, h


def price_axis(params: ModelParams, n: int) -> np.ndarray:
    return np.linspace(0.0, params.v, n)


def price_lipschitz_bound(params: ModelParams) -> float:
    """Bound on |dprofit/dp| over the admissible price box (see module docstring)."""
    return 4.0 * params.c + params.max_cost


def integration_error_bound(params: ModelParams, d_resolution: int) -> float:
    """Profit error of the midpoint count: two active legs, half a cell each."""
    h = params.v / d_resolution
    return 2.0 * params.c * h


def integrate_demand(
    params: ModelParams,
    theta: float,
    prices: PricePair,
    bops_offered: bool = True,
    cfg: OracleConfig | None = None,
) -> DemandVector:
    """Reference demand: per-consumer utility argmax plus the purchase filter."""
    cfg = cfg or OracleConfig()
    check_theta(theta)
    check_prices(params, prices)
    d, h = distance_grid(params, cfg.d_resolution)

    u_e = params.c - prices.p_e  # scalar, shared by every consumer
    u_s = 2.0 * theta * params.c - theta * prices.p_s - d
    if bops_offered:
        u_b = 2.0 * params.c - prices.p_e - d
        pick_b = (u_b >= u_e - EPS) & (u_b >= u_s - EPS)
        pick_e = (u_b < u_e - EPS) & (u_e >= u_s - EPS)
        pick_s = ~pick_b & ~pick_e
        buy_b = int(np.count_nonzero(pick_b & (u_b >= -EPS)))
    else:
        pick_e = u_e >= u_s - EPS
        pick_s = ~pick_e
        buy_b = 0
    buy_e = int(np.count_nonzero(pick_e)) if u_e >= -EPS else 0
    buy_s = int(np.count_nonzero(pick_s & (u_s >= -EPS)))
    return DemandVector(h * buy_e, h * buy_b, h * buy_s)


def integrate_profit(
    params: ModelParams,
    theta: float,
    prices: PricePair,
    bops_offered: bool = True,
    cfg: OracleConfig | None = None,
) -> float:
    dem = integrate_demand(params, theta, prices, bops_offered, cfg)
    return (
        (prices.p_e - params.c_e) * dem.d_e
        + (prices.p_e - params.c_b) * dem.d_b
        + (prices.p_s - params.c_s) * dem.d_s
    )


def _count_demands(
    dgrid: np.ndarray,
    c: float,
    theta: float,
    p_e,
    p_s,
    delta,
    bops_offered: bool,
):
    """Consumer counts per option via breakpoint search on the midpoint grid.

    p_e/p_s/delta broadcast together. The breakpoints restate the same
    comparisons the reference integrator applies per consumer:

        local        d <= c + EPS
        BOPS buy     d <= 2c - p_e + EPS
        e over s     d >= delta - (1-2*theta)*c - EPS
        store buy    d <= 2*theta*c - theta*p_s + EPS

    and every chooser set is a prefix or suffix of the sorted grid, so
    searchsorted returns exactly the loop's counts.
    """
    n = dgrid.size
    p_e = np.asarray(p_e, dtype=float)
    p_s = np.asarray(p_s, dtype=float)
    delta = np.asarray(delta, dtype=float)

    n_local = int(np.searchsorted(dgrid, c + EPS, side="right"))
    n_bops_buy = np.searchsorted(dgrid, 2.0 * c - p_e + EPS, side="right")
    n_store_buy = np.searchsorted(dgrid, 2.0 * theta * c - theta * p_s + EPS, side="right")
    n_below_z = np.searchsorted(dgrid, delta - (1.0 - 2.0 * theta) * c - EPS, side="left")

    delivery_gate = p_e <= c + EPS
    if bops_offered:
        bops_ok = delta <= (2.0 - 2.0 * theta) * c + EPS
        count_b = np.where(bops_ok, np.minimum(n_local, n_bops_buy), 0)
        count_e = np.where(delivery_gate, n - np.maximum(n_local, n_below_z), 0)
        pick_s = np.where(bops_ok, 0, np.maximum(n_local, n_below_z))
        count_s = np.minimum(pick_s, n_store_buy)
    else:
        count_b = np.zeros_like(n_below_z)
        count_e = np.where(delivery_gate, n - n_below_z, 0)
        count_s = np.minimum(n_below_z, n_store_buy)
    return count_e, count_b, count_s


def _fast_demand(
    params: ModelParams,
    theta: float,
    prices: PricePair,
    bops_offered: bool,
    cfg: OracleConfig,
) -> DemandVector:
    """Counting-path demand for one price pair; must equal integrate_demand exactly."""
    dgrid, h = distance_grid(params, cfg.d_resolution)
    ce, cb, cs = _count_demands(
        dgrid, params.c, theta, prices.p_e, prices.p_s, prices.delta(theta), bops_offered
    )
    return DemandVector(h * int(ce), h * int(cb), h * int(cs))


@dataclass(frozen=True)
class GridBest:
    prices: PricePair
    profit: float


@dataclass(frozen=True)
class GridSearchResult:
    """Best integrated profit overall and per populated region."""

    overall: GridBest
    per_region: dict[Region, GridBest]


def grid_search(
    params: ModelParams,
    theta: float,
    bops_offered: bool = True,
    cfg: OracleConfig | None = None,
    chunk_rows: int = 256,
) -> GridSearchResult:
    """One sweep of the price grid, reducing argmax overall and per region.

    Deterministic regardless of chunking: chunks run in ascending p_e order,
    flattened row-major, and updates require strictly greater profit, so the
    winner is the lexicographically smallest maximizing (p_e, p_s) pair.
    """
    cfg = cfg or OracleConfig()
    check_theta(theta)
    c = params.c
    dgrid, h = distance_grid(params, cfg.d_resolution)
    n = dgrid.size
    axis = price_axis(params, cfg.p_resolution)

    n_store_buy_by_ps = np.searchsorted(dgrid, 2.0 * theta * c - theta * axis + EPS, side="right")
    n_bops_buy_by_pe = np.searchsorted(dgrid, 2.0 * c - axis + EPS, side="right")
    n_local = int(np.searchsorted(dgrid, c + EPS, side="right"))

    best_profit = -np.inf
    best_idx = (0, 0)
    region_best: dict[int, tuple[float, tuple[int, int]]] = {}

    margin_s = axis - params.c_s  # per p_s column

    for start in range(0, axis.size, chunk_rows):
        pe = axis[start : start + chunk_rows]
        delta = pe[:, None] - theta * axis[None, :]
        n_below_z = np.searchsorted(
            dgrid, (delta - (1.0 - 2.0 * theta) * c - EPS).ravel(), side="left"
        ).reshape(delta.shape)

        delivery_gate = (pe <= c + EPS)[:, None]
        if bops_offered:
            bops_ok = delta <= (2.0 - 2.0 * theta) * c + EPS
            count_b = np.where(bops_ok, np.minimum(n_local, n_bops_buy_by_pe[start : start + chunk_rows])[:, None], 0)
            count_e = np.where(delivery_gate, n - np.maximum(n_local, n_below_z), 0)
            count_s = np.minimum(np.where(bops_ok, 0, np.maximum(n_local, n_below_z)), n_store_buy_by_ps[None, :])
        else:
            count_b = 0
            count_e = np.where(delivery_gate, n - n_below_z, 0)
            count_s = np.minimum(n_below_z, n_store_buy_by_ps[None, :])

        profit = h * (
            (pe - params.c_e)[:, None] * count_e
            + (pe - params.c_b)[:, None] * count_b
            + margin_s[None, :] * count_s
        )

        flat = profit.ravel()
        top = int(np.argmax(flat))
        if flat[top] > best_profit:
            best_profit = float(flat[top])
            best_idx = (start + top // axis.size, top % axis.size)

        codes = _region_codes_arrays(c, theta, np.broadcast_to(pe[:, None], delta.shape), delta, bops_offered)
        for code in np.unique(codes):
            masked = np.where(codes == code, profit, -np.inf).ravel()
            top = int(np.argmax(masked))
            value = float(masked[top])
            idx = (start + top // axis.size, top % axis.size)
            prev = region_best.get(int(code))
            if prev is None or value > prev[0]:
                region_best[int(code)] = (value, idx)

    regions = tuple(Region)
    per_region = {
        regions[code]: GridBest(PricePair(axis[i], axis[j]), value)
        for code, (value, (i, j)) in region_best.items()
    }
    overall = GridBest(PricePair(axis[best_idx[0]], axis[best_idx[1]]), best_profit)
    return GridSearchResult(overall=overall, per_region=per_region)


def grid_best(
    params: ModelParams,
    theta: float,
    bops_offered: bool = True,
    region_filter: Region | None = None,
    cfg: OracleConfig | None = None,
) -> GridBest:
    """Best integrated profit on the price grid, optionally within one region."""
    result = grid_search(params, theta, bops_offered, cfg)
    if region_filter is None:
        return result.overall
    if region_filter not in result.per_region:
        raise EmptyRegionError(
            f"no grid price classifies as {region_filter.value} "
            f"(theta={theta}, bops_offered={bops_offered})"
        )
    return result.per_region[region_filter]
