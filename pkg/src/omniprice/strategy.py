"""Closed-form optimal prices, profits, thresholds, and strategy selection.

Per-region optima (prices pinned to the cap where the optimum leaves a
coordinate free, so results are deterministic and the unused channel is
maximally deterred):

    BEL: (p_e, p_s) = (c, 2c)                pi = (2c - c_e - c_b) * c
    BEU: (p_e, p_s) = ((2c+c_b)/2, 2c)       pi = (2c - c_b)^2 / 4
    SEL: (p_e, p_s) = (c, (2*theta-1)*c/theta)
                                             pi = [(3*theta-1)*c - theta*(c_e+c_s)] * c / theta
    SEU: (p_e, p_s) = (2c, (2c+c_s)/2)       pi = theta * (2c - c_s)^2 / 4
    S:   (p_e, p_s) = (2c, (2*theta-1)*c/theta)
                                             pi = [(2*theta-1)*c - theta*c_s] * c / theta
    E:   (p_e, p_s) = (c, 2c)                pi = 2 * (c - c_e) * c   (no BOPS)

SEL and S are corner solutions that exist only in Stage I and only while the
bracketed margin is non-negative; BEL and E are always feasible because every
fulfillment cost is below the shipping cost. Crossing points of the profit
curves give six thresholds in theta; the ordered comparison report evaluates
the eight resulting sign relations. Selection takes the feasible argmax over
the union of the with-BOPS menu {BEL, BEU, SEL, SEU, S} and the no-BOPS menu
{E, SEL, SEU, S}, breaking exact profit ties in the fixed order
SEL > BEL > SEU > BEU > E > S.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import ModelParams, PricePair, Region, Stage, check_theta, stage
from .demand import DemandVector

# Fixed order used to break exact profit ties (reproducibility).
TIE_ORDER = (Region.SEL, Region.BEL, Region.SEU, Region.BEU, Region.E, Region.S)
_TIE_RANK = {r: i for i, r in enumerate(TIE_ORDER)}

# Menus available at step 1 (offer BOPS or not). SEL/SEU/S price the BOPS
# segment out of existence, so they sit in both menus with the same optimum.
BOPS_MENU = (Region.BEL, Region.BEU, Region.SEL, Region.SEU, Region.S)
NO_BOPS_MENU = (Region.E, Region.SEL, Region.SEU, Region.S)
ALL_STRATEGIES = tuple(Region)


@dataclass(frozen=True)
class StrategyOutcome:
    """One strategy evaluated at one theta.

    ``profit`` always carries the closed-form value (the supremum over the
    region), even when ``feasible`` is False and the strategy is excluded
    from selection. ``binding_condition`` names the constraint that gates
    feasibility.
    """

    strategy: Region
    prices: PricePair
    demands: DemandVector
    profit: float
    feasible: bool
    binding_condition: str


@dataclass(frozen=True)
class Thresholds:
    """Crossing points of the closed-form profit curves in theta.

    Values above 1 mean the crossing never happens for an admissible belief.
    """

    theta_sel: float  # SEL margin turns non-negative:    c / (3c - c_e - c_s)
    theta_bs_l: float  # BEL and SEL cross:                c / (c + c_b - c_s)
    theta_bs_u: float  # BEU and SEU cross:                (2c-c_b)^2 / (2c-c_s)^2
    theta_s_e: float  # SEL and E cross:                   c / (c + c_e - c_s)
    theta_s_minus: float  # lower root of SEL = SEU
    theta_s_plus: float  # upper root of SEL = SEU

    def as_dict(self) -> dict[str, float]:
        return {
            "theta_sel": self.theta_sel,
            "theta_bs_l": self.theta_bs_l,
            "theta_bs_u": self.theta_bs_u,
            "theta_s_e": self.theta_s_e,
            "theta_s_minus": self.theta_s_minus,
            "theta_s_plus": self.theta_s_plus,
        }


def thresholds(params: ModelParams) -> Thresholds:
    """All six theta thresholds; denominators are positive under the cost cap."""
    c, c_e, c_b, c_s = params.c, params.c_e, params.c_b, params.c_s
    root = math.sqrt((c - c_e) * (5.0 * c - c_e - 2.0 * c_s))
    scale = 2.0 * c / (2.0 * c - c_s) ** 2
    return Thresholds(
        theta_sel=c / (3.0 * c - c_e - c_s),
        theta_bs_l=c / (c + c_b - c_s),
        theta_bs_u=(2.0 * c - c_b) ** 2 / (2.0 * c - c_s) ** 2,
        theta_s_e=c / (c + c_e - c_s),
        theta_s_minus=scale * (3.0 * c - c_e - c_s - root),
        theta_s_plus=scale * (3.0 * c - c_e - c_s + root),
    )


def _clamp_price(p: float, cap: float) -> float:
    return min(max(p, 0.0), cap)


def optimal_in_region(
    params: ModelParams,
    theta: float,
    region: Region,
    bops_offered: bool | None = None,
) -> StrategyOutcome:
    """Closed-form optimum of one region at one theta.

    ``bops_offered`` defaults to whatever the region requires (BOPS on for
    BE regions, off for E; SEL/SEU/S work either way) and is validated when
    given. Stage-inadmissible regions and theta = 0 divisions come back
    infeasible rather than raising.
    """
    check_theta(theta)
    if bops_offered is True and region is Region.E:
        raise ValueError("Region E is only priceable with the BOPS option withheld")
    if bops_offered is False and region in (Region.BEL, Region.BEU):
        raise ValueError(f"Region {region.value} requires the BOPS option")

    c, c_e, c_b, c_s = params.c, params.c_e, params.c_b, params.c_s
    cap = params.v
    st = stage(theta)

    if region is Region.BEL:
        margin = 2.0 * c - c_e - c_b
        return StrategyOutcome(
            region,
            PricePair(c, cap),
            DemandVector(c, c, 0.0),
            margin * c,
            margin >= 0.0,
            "2c - c_e - c_b >= 0",
        )
    if region is Region.BEU:
        p_e = 0.5 * (2.0 * c + c_b)
        return StrategyOutcome(
            region,
            PricePair(p_e, cap),
            DemandVector(0.0, 2.0 * c - p_e, 0.0),
            0.25 * (2.0 * c - c_b) ** 2,
            True,
            "none",
        )
    if region is Region.SEU:
        p_s = 0.5 * (2.0 * c + c_s)
        d_s = theta * (2.0 * c - p_s)
        return StrategyOutcome(
            region,
            PricePair(cap, p_s),
            DemandVector(0.0, 0.0, d_s),
            0.25 * theta * (2.0 * c - c_s) ** 2,
            theta > 0.0,
            "theta > 0",
        )
    if region is Region.E:
        return StrategyOutcome(
            region,
            PricePair(c, cap),
            DemandVector(2.0 * c, 0.0, 0.0),
            2.0 * (c - c_e) * c,
            c > c_e,
            "c > c_e",
        )

    # SEL and S share the corner store price (2*theta - 1) * c / theta.
    if theta == 0.0:
        corner_ps = cap  # placeholder; the 1/theta profit diverges below
        value = -math.inf
    else:
        corner_ps = _clamp_price((2.0 * theta - 1.0) * c / theta, cap)
        if region is Region.SEL:
            value = ((3.0 * theta - 1.0) * c - theta * (c_e + c_s)) * c / theta
        else:
            value = ((2.0 * theta - 1.0) * c - theta * c_s) * c / theta
    if region is Region.SEL:
        return StrategyOutcome(
            region,
            PricePair(c, corner_ps),
            DemandVector(c, 0.0, c),
            value,
            st is Stage.I and value >= 0.0,
            "stage I and (3*theta - 1)*c - theta*(c_e + c_s) >= 0",
        )
    return StrategyOutcome(
        region,
        PricePair(cap, corner_ps),
        DemandVector(0.0, 0.0, c),
        value,
        st is Stage.I and value >= 0.0,
        "stage I and (2*theta - 1)*c - theta*c_s >= 0",
    )


@dataclass(frozen=True)
class Relation:
    """One row of the ordered comparison report.

    ``holds`` is None when the relation is vacuous at this theta (a profit
    involved is undefined, i.e. theta = 0 for the 1/theta corner formulas).
    """

    key: str
    description: str
    holds: bool | None
    lhs: float
    rhs: float


def _sign(x: float, tol: float) -> int:
    if x > tol:
        return 1
    if x < -tol:
        return -1
    return 0


def _directional(lhs: float, rhs: float, pivot: float, level: float, tol: float) -> bool:
    """lhs >< rhs must match pivot >< level (boundary counts as holding)."""
    s_profit = _sign(lhs - rhs, tol)
    s_pivot = _sign(pivot - level, 1e-12)
    return s_profit == s_pivot or s_profit == 0 or s_pivot == 0


def compare(params: ModelParams, theta: float) -> list[Relation]:
    """Evaluate the eight profit-ordering relations at one theta.

    Relations: (1) SEL beats S and SEU weakly beats S; (2) the SEL corner
    exists exactly from theta_sel on; (3)-(5) BEL/SEL, BEU/SEU, SEL/E order
    flips at theta_bs_l, theta_bs_u, theta_s_e; (6) BEL/E order follows
    c_e vs c_b; (7) BEL/BEU order follows the sign of 4c^2 - 4*c_e*c - c_b^2;
    (8) SEL >= SEU exactly on [theta_s_minus, theta_s_plus].
    """
    check_theta(theta)
    th = thresholds(params)
    tol = 1e-9 * params.c**2
    out = {
        r: optimal_in_region(params, theta, r).profit
        for r in (Region.BEL, Region.BEU, Region.SEL, Region.SEU, Region.S, Region.E)
    }
    corner_defined = theta > 0.0

    report = [
        Relation(
            "1a_sel_gt_s",
            "SEL strictly beats S",
            out[Region.SEL] > out[Region.S] if corner_defined else None,
            out[Region.SEL],
            out[Region.S],
        ),
        Relation(
            "1b_seu_ge_s",
            "SEU weakly beats S",
            out[Region.SEU] >= out[Region.S] if corner_defined else None,
            out[Region.SEU],
            out[Region.S],
        ),
        Relation(
            "2_sel_exists",
            "SEL margin is non-negative exactly from theta_sel on",
            (
                abs(out[Region.SEL]) <= tol
                or (theta >= th.theta_sel) == (out[Region.SEL] > 0.0)
                if corner_defined
                else None
            ),
            out[Region.SEL],
            0.0,
        ),
        Relation(
            "3_bel_vs_sel",
            "BEL >< SEL flips at theta_bs_l",
            _directional(out[Region.BEL], out[Region.SEL], th.theta_bs_l, theta, tol)
            if corner_defined
            else None,
            out[Region.BEL],
            out[Region.SEL],
        ),
        Relation(
            "4_beu_vs_seu",
            "BEU >< SEU flips at theta_bs_u",
            _directional(out[Region.BEU], out[Region.SEU], th.theta_bs_u, theta, tol),
            out[Region.BEU],
            out[Region.SEU],
        ),
        Relation(
            "5_sel_vs_e",
            "SEL >< E flips at theta_s_e",
            _directional(out[Region.SEL], out[Region.E], theta, th.theta_s_e, tol)
            if corner_defined
            else None,
            out[Region.SEL],
            out[Region.E],
        ),
        Relation(
            "6_bel_vs_e",
            "BEL >< E follows c_e >< c_b",
            _directional(out[Region.BEL], out[Region.E], params.c_e, params.c_b, tol),
            out[Region.BEL],
            out[Region.E],
        ),
        Relation(
            "7_bel_vs_beu",
            "BEL >< BEU follows the sign of 4c^2 - 4*c_e*c - c_b^2",
            _directional(
                out[Region.BEL],
                out[Region.BEU],
                4.0 * params.c**2 - 4.0 * params.c_e * params.c - params.c_b**2,
                0.0,
                tol,
            ),
            out[Region.BEL],
            out[Region.BEU],
        ),
        Relation(
            "8_sel_vs_seu",
            "SEL >= SEU exactly on [theta_s_minus, theta_s_plus]",
            (
                abs(out[Region.SEL] - out[Region.SEU]) <= tol
                or (th.theta_s_minus <= theta <= th.theta_s_plus)
                == (out[Region.SEL] > out[Region.SEU])
                if corner_defined
                else None
            ),
            out[Region.SEL],
            out[Region.SEU],
        ),
    ]
    return report


@dataclass(frozen=True)
class Selection:
    """Result of the full step 0-3 decision at one theta."""

    best: StrategyOutcome
    menu: tuple[StrategyOutcome, ...]
    offer_bops: bool


def best_in_menu(
    outcomes: dict[Region, StrategyOutcome], menu: tuple[Region, ...]
) -> StrategyOutcome:
    """Feasible argmax over a menu, exact ties broken by the fixed order."""
    candidates = [outcomes[r] for r in menu if outcomes[r].feasible]
    if not candidates:
        raise ValueError("menu contains no feasible strategy")
    return max(candidates, key=lambda o: (o.profit, -_TIE_RANK[o.strategy]))


def evaluate_menu(params: ModelParams, theta: float) -> dict[Region, StrategyOutcome]:
    """All six strategy outcomes at one theta."""
    return {r: optimal_in_region(params, theta, r) for r in ALL_STRATEGIES}


def select_strategy(params: ModelParams, theta: float) -> Selection:
    """Global profit argmax over both menus; BEL and E guarantee non-emptiness."""
    outcomes = evaluate_menu(params, theta)
    best = best_in_menu(outcomes, ALL_STRATEGIES)
    return Selection(
        best=best,
        menu=tuple(outcomes[r] for r in ALL_STRATEGIES),
        offer_bops=best.strategy.offers_bops,
    )


def cost_region_map(
    params_base: ModelParams,
    theta: float,
    c_b_values,
    c_s_values,
) -> list[tuple[float, float, Region, bool]]:
    """Winning strategy over a (c_b, c_s) grid with c and c_e held fixed.

    Rows come back in row-major (c_b outer, c_s inner) order, ready for CSV
    emission or contour plotting.
    """
    rows = []
    for c_b in c_b_values:
        for c_s in c_s_values:
            params = ModelParams(params_base.c, params_base.c_e, float(c_b), float(c_s))
            sel = select_strategy(params, theta)
            rows.append((float(c_b), float(c_s), sel.best.strategy, sel.offer_bops))
    return rows
