"""One circular trajectory covering a whole disc.

The trajectory radius is chosen so that the worst beam corner and the disc
center see the same loss; the angular velocity is then the largest one for
which the worst corner still receives ``R_th`` bits during its dwell of
``phi_a / v`` seconds.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional

from .config import DEFAULT_CONFIG, SolverConfig
from .exceptions import InfeasibleThreshold, NoSignChange, OutOfRange
from .geometry import TWO_PI, Circle, Point2D
from .linkbudget import (
    CENTER,
    WORST_CORNER,
    LinkParams,
    corner_distance,
    se_from_distance,
    worst_corner,
    worst_point_loss_metric,
)

log = logging.getLogger(__name__)

MPH_TO_M_S = 0.44704

ZERO = "zero"
RAMP = "ramp"
CONSTANT = "constant"
INVERTED = "inverted"
_REGIME_RANK = {ZERO: 0, RAMP: 1, CONSTANT: 2}


@dataclass(frozen=True)
class VelocityLimit:
    """Maximum linear UAV speed.

    The angular cap for a disc of radius ``R`` is ``linear_max / R``: every
    admissible trajectory radius is at most ``R``, so the linear speed never
    exceeds ``linear_max`` and all candidate radii share one angular cap.
    """

    linear_max: float

    def __post_init__(self):
        if not (self.linear_max > 0):
            raise ValueError(f"linear_max must be positive, got {self.linear_max!r}")

    def angular_cap(self, region_radius: float) -> float:
        return self.linear_max / region_radius

    @classmethod
    def from_mph(cls, mph: float) -> "VelocityLimit":
        return cls(mph * MPH_TO_M_S)

    @classmethod
    def unlimited(cls) -> "VelocityLimit":
        return cls(math.inf)


@dataclass(frozen=True)
class SingleCirclePlan:
    region: Circle
    r_u: float
    angular_velocity: float
    completion_time: float
    worst_corner: Point2D
    data_at_worst: float
    clamped: bool
    r_th: float
    indoor: bool = False
    balanced: bool = True

    @property
    def linear_speed(self) -> float:
        return self.angular_velocity * self.r_u


def metric_gap(r_u: float, region: Circle, params: LinkParams) -> float:
    """Corner loss metric minus center loss metric; strictly decreasing in ``r_u``."""
    return worst_point_loss_metric(r_u, WORST_CORNER, region, params) - worst_point_loss_metric(
        r_u, CENTER, region, params
    )


def _worst_metric(r_u: float, region: Circle, params: LinkParams) -> float:
    return max(
        worst_point_loss_metric(r_u, WORST_CORNER, region, params),
        worst_point_loss_metric(r_u, CENTER, region, params),
    )


def solve_balanced_radius(region: Circle, params: LinkParams, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    """Bisection for the radius in ``[R/2, R]`` where corner and center losses match.

    Raises :class:`NoSignChange` (carrying the better endpoint) when the
    balance point falls outside the interval, which happens for beams wider
    than ``pi/3``.
    """
    lo, hi = region.radius / 2.0, region.radius
    g_lo, g_hi = metric_gap(lo, region, params), metric_gap(hi, region, params)
    center_hi = worst_point_loss_metric(hi, CENTER, region, params)
    if abs(g_hi) <= cfg.metric_tol * center_hi:
        return hi
    if g_lo <= 0.0 or g_hi > 0.0:
        best = min((lo, hi), key=lambda r: _worst_metric(r, region, params))
        raise NoSignChange(
            f"corner/center loss balance has no root on [{lo}, {hi}] (gaps {g_lo:.3e}, {g_hi:.3e})",
            radius=best,
        )
    for _ in range(cfg.max_iter):
        mid = 0.5 * (lo + hi)
        g = metric_gap(mid, region, params)
        if abs(g) <= cfg.metric_tol * worst_point_loss_metric(mid, CENTER, region, params):
            return mid
        if g > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def worst_spectral_efficiency(r_u: float, region: Circle, params: LinkParams, indoor: bool = False) -> float:
    """Spectral efficiency at the worse of the beam corner and the disc center."""
    R = region.radius
    if not (R / 2.0 * (1 - 1e-12) <= r_u <= R * (1 + 1e-12)):
        raise OutOfRange(f"trajectory radius {r_u} outside [{R / 2}, {R}]")
    d = max(corner_distance(r_u, R, params.phi_a), r_u)
    return se_from_distance(d, params, params.loss_factor(indoor))


def delivered_bound(v: float, r_u: float, region: Circle, params: LinkParams, indoor: bool = False) -> float:
    """Guaranteed bits at the worst point for angular velocity ``v``."""
    return params.phi_a / v * params.bandwidth * worst_spectral_efficiency(r_u, region, params, indoor)


def closed_form_velocity(r_u: float, region: Circle, r_th: float, params: LinkParams, indoor: bool = False) -> float:
    return params.phi_a * params.bandwidth * worst_spectral_efficiency(r_u, region, params, indoor) / r_th


def solve_velocity(
    r_u: float,
    region: Circle,
    r_th: float,
    params: LinkParams,
    vlim: VelocityLimit,
    cfg: SolverConfig = DEFAULT_CONFIG,
    indoor: bool = False,
    method: str = "bisection",
) -> float:
    """Largest angular velocity meeting the data threshold, capped by ``vlim``.

    ``method="bisection"`` brackets the root geometrically and returns the
    feasible end of the final bracket; ``"closed_form"`` inverts the bound
    directly.
    """
    if not r_th > 0:
        raise ValueError(f"data threshold must be positive, got {r_th!r}")
    se = worst_spectral_efficiency(r_u, region, params, indoor)
    if se <= 0.0:
        raise InfeasibleThreshold("worst point receives no data; no velocity meets the threshold")
    cap = vlim.angular_cap(region.radius)
    if method == "closed_form":
        return min(params.phi_a * params.bandwidth * se / r_th, cap)
    if method != "bisection":
        raise ValueError(f"unknown method {method!r}")

    def slack(v: float) -> float:
        return params.phi_a / v * params.bandwidth * se - r_th

    hi = cap if math.isfinite(cap) else 1.0
    if math.isfinite(cap) and slack(cap) >= 0.0:
        return cap
    while not math.isfinite(cap) and slack(hi) > 0.0:
        hi *= 2.0
    lo = min(1e-9, hi / 2.0)
    while slack(lo) < 0.0:
        lo /= 2.0
        if lo < 1e-300:
            raise InfeasibleThreshold("threshold too large for any positive velocity")
    for _ in range(cfg.max_iter):
        if hi <= lo * (1.0 + cfg.v_tol):
            break
        mid = math.sqrt(lo * hi)
        if slack(mid) >= 0.0:
            lo = mid
        else:
            hi = mid
    return lo


def plan_single(
    region: Circle,
    r_th: float,
    params: LinkParams,
    vlim: VelocityLimit,
    cfg: SolverConfig = DEFAULT_CONFIG,
    indoor: bool = False,
    radius: Optional[float] = None,
) -> SingleCirclePlan:
    """Balanced radius then velocity; pass ``radius`` to pin the trajectory radius."""
    balanced = True
    if radius is None:
        try:
            radius = solve_balanced_radius(region, params, cfg)
        except NoSignChange as exc:
            log.warning("%s; falling back to r_u=%.6g", exc, exc.radius)
            radius, balanced = exc.radius, False
    v = solve_velocity(radius, region, r_th, params, vlim, cfg, indoor=indoor)
    cap = vlim.angular_cap(region.radius)
    return SingleCirclePlan(
        region=region,
        r_u=radius,
        angular_velocity=v,
        completion_time=TWO_PI / v,
        worst_corner=worst_corner(region, params.phi_a),
        data_at_worst=delivered_bound(v, radius, region, params, indoor),
        clamped=v >= cap,
        r_th=r_th,
        indoor=indoor,
        balanced=balanced,
    )


@dataclass(frozen=True)
class SavingsRow:
    r_th: float
    v_half: float
    v_opt: float
    t_half: float
    t_opt: float
    regime: str

    @property
    def t_sav(self) -> float:
        return self.t_half - self.t_opt

    @property
    def savings_pct(self) -> float:
        return 100.0 * self.t_sav / self.t_half


def classify_regime(half: SingleCirclePlan, opt: SingleCirclePlan) -> str:
    if half.clamped and opt.clamped:
        return ZERO
    if opt.clamped:
        return RAMP
    if not half.clamped:
        return CONSTANT
    return INVERTED


def savings_profile(
    region: Circle,
    r_th_grid: Iterable[float],
    params: LinkParams,
    vlim: VelocityLimit,
    cfg: SolverConfig = DEFAULT_CONFIG,
    indoor: bool = False,
) -> List[SavingsRow]:
    """Half-radius versus balanced-radius plans for each threshold."""
    grid = [float(x) for x in r_th_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("r_th_grid must be strictly increasing")
    try:
        r_opt = solve_balanced_radius(region, params, cfg)
    except NoSignChange as exc:
        r_opt = exc.radius
    rows = []
    for r_th in grid:
        half = plan_single(region, r_th, params, vlim, cfg, indoor=indoor, radius=region.radius / 2.0)
        opt = plan_single(region, r_th, params, vlim, cfg, indoor=indoor, radius=r_opt)
        rows.append(
            SavingsRow(
                r_th=r_th,
                v_half=half.angular_velocity,
                v_opt=opt.angular_velocity,
                t_half=half.completion_time,
                t_opt=opt.completion_time,
                regime=classify_regime(half, opt),
            )
        )
    return rows


def regimes_in_order(rows: List[SavingsRow]) -> bool:
    """True when labels never step back in the zero -> ramp -> constant order."""
    ranks = [_REGIME_RANK.get(r.regime) for r in rows]
    if any(r is None for r in ranks):
        return False
    return all(a <= b for a, b in zip(ranks, ranks[1:]))
