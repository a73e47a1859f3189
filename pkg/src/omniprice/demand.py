"""Closed-form demand and profit per price region.

Demand is the mass of consumers who both prefer an option and clear the
purchase filter (utility >= 0). Per region:

    BE-L:  D_e = c,                    D_b = c
    BE-U:  D_e = 0,                    D_b = 2c - p_e
    SE-L:  D_e = (3-2*theta)*c - p_e + theta*p_s,
           D_s = p_e - theta*p_s - (1-2*theta)*c
    SE-U:  D_e = 0,                    D_s = 2*theta*c - theta*p_s
    S:     D_s = 2*theta*c - theta*p_s
    E:     D_e = 2c                    (no BOPS; the region forces p_e <= c)

The same SE/S formulas apply on the no-BOPS plane, where the SE region
reaches down to delta = (1-2*theta)*c. BOPS units sell at the online price
p_e (ordered online, collected in store), so the profit reads

    (p_e - c_e) * D_e + (p_e - c_b) * D_b + (p_s - c_s) * D_s.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    ModelParams,
    PricePair,
    Region,
    Segment,
    check_prices,
    check_theta,
    classify_consumer,
    classify_region,
    utilities,
)


class RegionMismatchError(ValueError):
    """Raised when prices do not classify into the region they were quoted for."""


@dataclass(frozen=True)
class DemandVector:
    """Per-option demand masses (delivery, BOPS, store purchase)."""

    d_e: float
    d_b: float
    d_s: float

    @property
    def total(self) -> float:
        return self.d_e + self.d_b + self.d_s

    @property
    def store_channel(self) -> float:
        """Mass fulfilled out of the physical store's stock (BOPS + store purchase)."""
        return self.d_b + self.d_s


def purchase_choice(
    params: ModelParams,
    theta: float,
    prices: PricePair,
    d: float,
    bops_offered: bool = True,
) -> Segment:
    """Option the consumer actually buys; NONE when the best utility is negative."""
    seg = classify_consumer(params, theta, prices, d, bops_offered)
    u_e, u_b, u_s = utilities(params, theta, prices, d, bops_offered)
    picked = {Segment.DELIVERY: u_e, Segment.BOPS: u_b, Segment.STORE: u_s}[seg]
    return seg if picked is not None and picked >= 0.0 else Segment.NONE


def region_demand(
    params: ModelParams, theta: float, prices: PricePair, region: Region
) -> DemandVector:
    """Closed-form demand for prices assumed to lie in ``region`` (no reclassification)."""
    c = params.c
    delta = prices.delta(theta)
    if region is Region.BEL:
        return DemandVector(c, c, 0.0)
    if region is Region.BEU:
        return DemandVector(0.0, 2.0 * c - prices.p_e, 0.0)
    if region is Region.SEL:
        return DemandVector((3.0 - 2.0 * theta) * c - delta, 0.0, delta - (1.0 - 2.0 * theta) * c)
    if region in (Region.SEU, Region.S):
        return DemandVector(0.0, 0.0, 2.0 * theta * c - theta * prices.p_s)
    # Region E: delta <= (1-2*theta)*c forces p_e <= c, so everyone buys
    # delivery; kept explicit for off-region sweeps per the purchase filter.
    d_e = 2.0 * c if prices.p_e <= c else 0.0
    return DemandVector(d_e, 0.0, 0.0)


def demand(
    params: ModelParams,
    theta: float,
    prices: PricePair,
    region: Region,
    bops_offered: bool = True,
) -> DemandVector:
    """Demand vector for admissible prices, cross-checked against ``region``."""
    check_theta(theta)
    check_prices(params, prices)
    actual = classify_region(params, theta, prices, bops_offered)
    if actual is not region:
        raise RegionMismatchError(
            f"prices {prices} classify as {actual.value}, not {region.value} "
            f"(theta={theta}, bops_offered={bops_offered})"
        )
    return region_demand(params, theta, prices, region)


def profit(
    params: ModelParams,
    theta: float,
    prices: PricePair,
    bops_offered: bool = True,
) -> float:
    """Retailer profit at arbitrary admissible prices; may be negative."""
    check_theta(theta)
    check_prices(params, prices)
    region = classify_region(params, theta, prices, bops_offered)
    dem = region_demand(params, theta, prices, region)
    return (
        (prices.p_e - params.c_e) * dem.d_e
        + (prices.p_e - params.c_b) * dem.d_b
        + (prices.p_s - params.c_s) * dem.d_s
    )
