"""Consumer-choice primitives for a two-channel retailer.

One retailer sells a single product online and through one physical store.
Consumers sit on the interval [0, 2c] with density 1; a consumer's position
``d`` is the travel cost of visiting the store, and ``c`` is the shipping
cost of home delivery (paid by the consumer). The product is worth ``v = 2c``
to everyone. Three purchase options give the utilities

    delivery:        u_e = c - p_e
    BOPS (pickup):   u_b = 2c - p_e - d
    store purchase:  u_s = 2*theta*c - theta*p_s - d

where ``p_e`` is the online price, ``p_s`` the store price, and ``theta``
the shoppers' common belief that the store has the item in stock. BOPS
(buy online, pick up in store) is only available when the retailer offers
it. Prices are capped at the product value 2c, so the price gap
``delta = p_e - theta * p_s`` always lies in [-2*theta*c, 2c].

Everything here is a pure function of immutable inputs and is safe to call
concurrently. Boundary comparisons use a fixed tolerance ``EPS`` so that
sweeps landing exactly on a closed-form boundary classify deterministically.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

# Tolerance for boundary comparisons. All classification boundaries are
# low-degree polynomials of the inputs, so a tight absolute tolerance is
# enough to absorb float noise without misclassifying interior points.
EPS = 1e-12


class Stage(Enum):
    """Belief band: I for 1/2 < theta <= 1, II for 0 < theta <= 1/2, III for theta = 0."""

    I = 1
    II = 2
    III = 3


class Segment(Enum):
    """A consumer's preferred option. NONE only appears after the purchase filter."""

    DELIVERY = "delivery"
    BOPS = "bops"
    STORE = "store"
    NONE = "none"


class Region(Enum):
    """Price-plane region, equivalently the retailer strategy that targets it.

    BEL/BEU exist on the with-BOPS plane, E on the no-BOPS plane, and
    SEL/SEU/S on both (the no-BOPS SE region extends down to delta =
    (1-2*theta)*c instead of (2-2*theta)*c).
    """

    BEL = "BEL"
    BEU = "BEU"
    SEL = "SEL"
    SEU = "SEU"
    S = "S"
    E = "E"

    @property
    def offers_bops(self) -> bool:
        """Whether pursuing this strategy means the BOPS option is switched on."""
        return self in (Region.BEL, Region.BEU)


# Integer codes used by the vectorized helpers; order matches Region above.
_REGION_CODES = {r: i for i, r in enumerate(Region)}
_REGIONS_BY_CODE = tuple(Region)

_SEG_DELIVERY, _SEG_BOPS, _SEG_STORE = 0, 1, 2
_SEGMENTS_BY_CODE = (Segment.DELIVERY, Segment.BOPS, Segment.STORE)


@dataclass(frozen=True)
class ModelParams:
    """Exogenous cost vector.

    c is the per-unit shipping cost (> 0); c_e, c_b, c_s are the retailer's
    fulfillment costs for delivery, BOPS, and store purchase. Every
    fulfillment cost must be strictly below c, which keeps the always-on
    strategies (BEL and E) profitable. The product value v = 2c is derived,
    never stored.
    """

    c: float
    c_e: float
    c_b: float
    c_s: float

    def __post_init__(self) -> None:
        if not self.c > 0:
            raise ValueError(f"shipping cost c must be positive, got {self.c}")
        for name in ("c_e", "c_b", "c_s"):
            value = getattr(self, name)
            if value < 0:
                raise ValueError(f"fulfillment cost {name} must be non-negative, got {value}")
            if not value < self.c:
                raise ValueError(
                    f"fulfillment cost {name}={value} must be strictly below the shipping cost c={self.c}"
                )

    @property
    def v(self) -> float:
        """Product value, pinned to twice the shipping cost."""
        return 2.0 * self.c

    @property
    def max_cost(self) -> float:
        return max(self.c_e, self.c_b, self.c_s)


@dataclass(frozen=True)
class PricePair:
    """Online price p_e and store price p_s."""

    p_e: float
    p_s: float

    def delta(self, theta: float) -> float:
        """Price gap p_e - theta * p_s that drives segmentation."""
        return self.p_e - theta * self.p_s


def check_theta(theta: float) -> float:
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta must lie in [0, 1], got {theta}")
    return float(theta)


def stage(theta: float) -> Stage:
    """Stage band of a stock belief. Boundaries are exact: stage(0.5) is II."""
    check_theta(theta)
    if theta > 0.5:
        return Stage.I
    if theta > 0.0:
        return Stage.II
    return Stage.III


def check_distance(params: ModelParams, d: float) -> float:
    if not -EPS <= d <= params.v + EPS:
        raise ValueError(f"travel cost d must lie in [0, {params.v}], got {d}")
    return float(d)


def check_prices(params: ModelParams, prices: PricePair) -> PricePair:
    cap = params.v
    for name, p in (("p_e", prices.p_e), ("p_s", prices.p_s)):
        if not -EPS <= p <= cap + EPS:
            raise ValueError(f"{name}={p} violates the price cap [0, {cap}]")
    return prices


def utilities(
    params: ModelParams,
    theta: float,
    prices: PricePair,
    d: float,
    bops_offered: bool = True,
) -> tuple[float, float | None, float]:
    """Per-consumer utilities (u_e, u_b, u_s); u_b is None when BOPS is off.

    Values may be negative; the purchase filter lives in the demand layer.
    """
    check_theta(theta)
    check_prices(params, prices)
    check_distance(params, d)
    c = params.c
    u_e = c - prices.p_e
    u_s = 2.0 * theta * c - theta * prices.p_s - d
    u_b = 2.0 * c - prices.p_e - d if bops_offered else None
    return u_e, u_b, u_s


def _segment_codes_arrays(c, theta, delta, d, bops_offered: bool):
    """Vectorized segment codes (0 delivery, 1 BOPS, 2 store).

    Implements the choice rule with the tie pattern that BOPS wins its weak
    comparisons and delivery wins ties against store purchase:

        BOPS:      d <= c  and  delta <= (2 - 2*theta)*c
        delivery:  d >  c  and  delta <= (1 - 2*theta)*c + d
        store:     otherwise

    Without BOPS the first condition drops and delivery takes all of
    delta <= (1 - 2*theta)*c + d. Total by construction: every (d, delta)
    gets exactly one code.
    """
    delta, d, theta = np.broadcast_arrays(
        np.asarray(delta, dtype=float), np.asarray(d, dtype=float), np.asarray(theta, dtype=float)
    )
    shape = delta.shape
    delta, d, theta = delta.ravel(), d.ravel(), theta.ravel()

    prefers_delivery_over_store = delta <= (1.0 - 2.0 * theta) * c + d + EPS
    out = np.where(prefers_delivery_over_store, _SEG_DELIVERY, _SEG_STORE).astype(np.int8)
    if bops_offered:
        local = d <= c + EPS
        prefers_bops_over_store = delta <= (2.0 - 2.0 * theta) * c + EPS
        out[local & prefers_bops_over_store] = _SEG_BOPS
        out[local & ~prefers_bops_over_store] = _SEG_STORE
    return out.reshape(shape)


def classify_consumer(
    params: ModelParams,
    theta: float,
    prices: PricePair,
    d: float,
    bops_offered: bool = True,
) -> Segment:
    """Raw segmentation: the option a consumer at travel cost d would pick.

    This is the pure argmax split; whether the consumer actually buys
    (utility >= 0) is decided by :func:`omniprice.demand.purchase_choice`.
    """
    check_theta(theta)
    check_prices(params, prices)
    check_distance(params, d)
    code = _segment_codes_arrays(params.c, theta, prices.delta(theta), d, bops_offered)
    return _SEGMENTS_BY_CODE[int(code)]


def _region_codes_arrays(c, theta, p_e, delta, bops_offered: bool):
    """Vectorized region codes; order matches the Region enum.

    With BOPS:  BE for delta <= (2-2*theta)*c, S for delta > (3-2*theta)*c,
    SE in between; BE and SE split into L (p_e <= c) and U (p_e > c).
    Without BOPS: E for delta <= (1-2*theta)*c, then the same SE/S split
    with the lower SE bound.
    """
    p_e, delta, theta = np.broadcast_arrays(
        np.asarray(p_e, dtype=float), np.asarray(delta, dtype=float), np.asarray(theta, dtype=float)
    )
    shape = p_e.shape
    p_e, delta, theta = p_e.ravel(), delta.ravel(), theta.ravel()

    low_online = p_e <= c + EPS
    in_s = delta > (3.0 - 2.0 * theta) * c + EPS
    if bops_offered:
        in_first = delta <= (2.0 - 2.0 * theta) * c + EPS
        first_l, first_u = _REGION_CODES[Region.BEL], _REGION_CODES[Region.BEU]
    else:
        in_first = delta <= (1.0 - 2.0 * theta) * c + EPS
        first_l = first_u = _REGION_CODES[Region.E]
    in_se = ~in_first & ~in_s

    out = np.empty(p_e.shape, dtype=np.int8)
    out[in_first & low_online] = first_l
    out[in_first & ~low_online] = first_u
    out[in_se & low_online] = _REGION_CODES[Region.SEL]
    out[in_se & ~low_online] = _REGION_CODES[Region.SEU]
    out[in_s] = _REGION_CODES[Region.S]
    return out.reshape(shape)


def classify_region(
    params: ModelParams,
    theta: float,
    prices: PricePair,
    bops_offered: bool = True,
) -> Region:
    """Price-plane region of an admissible price pair."""
    check_theta(theta)
    check_prices(params, prices)
    code = _region_codes_arrays(params.c, theta, prices.p_e, prices.delta(theta), bops_offered)
    return _REGIONS_BY_CODE[int(code)]


def region_admissible(region: Region, theta: float, bops_offered: bool) -> bool:
    """Whether a region can be non-empty for this stage and BOPS setting.

    SEL (with BOPS) and S need Stage I; SEU needs theta > 0; BEL/BEU need
    BOPS on; E needs BOPS off.
    """
    st = stage(theta)
    if region in (Region.BEL, Region.BEU):
        return bops_offered
    if region is Region.E:
        return not bops_offered
    if region is Region.S:
        return st is Stage.I
    if region is Region.SEL:
        # The no-BOPS plane keeps SE-L points in Stage II as well.
        return st is Stage.I or (not bops_offered and st is not Stage.III)
    return st is not Stage.III  # SEU
