"""Two-phase missions: one sweep of the whole area, then a tour of building circles.

Phase 2 visits each building circle once, flying one full revolution of a
trajectory circle inside it. Consecutive revolutions are joined by straight
connectors, and each revolution starts and ends at the same exit point.
Exit points and trajectory radii are improved one region at a time while
the others stay fixed, so the phase-2 time never increases.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .config import DEFAULT_CONFIG, SolverConfig
from .exceptions import DegenerateInput, MonotonicityViolation, NoSignChange
from .geometry import (
    TWO_PI,
    Arc,
    Circle,
    Line,
    Point2D,
    as_point,
    distance,
    nearest_point_on_circle,
    normalize_angle,
    segment_circle_intersections,
    smaller_arc_between,
    tour_length,
)
from .linkbudget import LinkParams
from .single_circle import SingleCirclePlan, VelocityLimit, plan_single, solve_balanced_radius, solve_velocity

log = logging.getLogger(__name__)

AREA_ID = -1


# --------------------------------------------------------------------------- #
# Visit order
# --------------------------------------------------------------------------- #
def _distance_matrix(centers: Sequence) -> np.ndarray:
    pts = np.asarray([[c[0], c[1]] for c in centers], dtype=float)
    return np.hypot(pts[:, None, 0] - pts[None, :, 0], pts[:, None, 1] - pts[None, :, 1])


def open_path_length(order: Sequence[int], D: np.ndarray) -> float:
    return float(sum(D[a, b] for a, b in zip(order, order[1:])))


def _held_karp_open(D: np.ndarray) -> List[int]:
    """Exact shortest Hamiltonian path with free endpoints."""
    n = len(D)
    full = (1 << n) - 1
    cost = {}
    parent = {}
    for j in range(n):
        cost[(1 << j, j)] = 0.0
    for mask in range(1, full + 1):
        for j in range(n):
            if not mask & (1 << j) or (mask, j) not in cost:
                continue
            base = cost[(mask, j)]
            for k in range(n):
                if mask & (1 << k):
                    continue
                key = (mask | (1 << k), k)
                c = base + D[j, k]
                if c < cost.get(key, math.inf):
                    cost[key] = c
                    parent[key] = j
    end = min(range(n), key=lambda j: (cost[(full, j)], j))
    path = [end]
    mask = full
    while (mask, path[-1]) in parent:
        prev = parent[(mask, path[-1])]
        mask ^= 1 << path[-1]
        path.append(prev)
    return path[::-1]


def _nearest_neighbor(start: int, D: np.ndarray) -> List[int]:
    n = len(D)
    path = [start]
    left = set(range(n)) - {start}
    while left:
        here = path[-1]
        nxt = min(left, key=lambda k: (D[here, k], k))
        path.append(nxt)
        left.remove(nxt)
    return path


def _two_opt_open(path: List[int], D: np.ndarray) -> List[int]:
    """Reverse sub-paths (including ones touching an end) until none shortens."""
    path = list(path)
    n = len(path)
    improved = True
    while improved:
        improved = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                before = (D[path[i - 1], path[i]] if i > 0 else 0.0) + (D[path[j], path[j + 1]] if j < n - 1 else 0.0)
                after = (D[path[i - 1], path[j]] if i > 0 else 0.0) + (D[path[i], path[j + 1]] if j < n - 1 else 0.0)
                if after < before - 1e-12:
                    path[i : j + 1] = path[i : j + 1][::-1]
                    improved = True
    return path


def order_regions(centers: Sequence, cfg: SolverConfig = DEFAULT_CONFIG) -> List[int]:
    """Open-path visiting order over ``centers`` (no return leg).

    Up to ``cfg.exact_order_max`` centers are solved exactly by dynamic
    programming; larger sets use nearest-neighbor starts from every center
    followed by 2-opt.
    """
    n = len(centers)
    if n == 0:
        raise ValueError("need at least one center")
    if n == 1:
        return [0]
    D = _distance_matrix(centers)
    if n <= cfg.exact_order_max:
        return _held_karp_open(D)
    best, best_len = None, math.inf
    for s in range(n):
        path = _two_opt_open(_nearest_neighbor(s, D), D)
        length = open_path_length(path, D)
        if length < best_len - 1e-12:
            best, best_len = path, length
    return best


# --------------------------------------------------------------------------- #
# Connecting points
# --------------------------------------------------------------------------- #
@dataclass(frozen=True)
class RegionSpec:
    circle: Circle
    r_opt: float
    r_th: float
    indoor: bool = True
    region_id: int = 0

    def __post_init__(self):
        R = self.circle.radius
        if not (R / 2.0 * (1 - 1e-12) <= self.r_opt <= R * (1 + 1e-12)):
            raise ValueError(f"r_opt={self.r_opt} outside [{R / 2}, {R}]")

    @property
    def r_min(self) -> float:
        return self.circle.radius / 2.0


@dataclass(frozen=True)
class ConnectState:
    exit_points: Tuple[Point2D, ...]
    radii: Tuple[float, ...]
    connector_sum: float
    trace: Tuple[float, ...] = ()
    sweeps: int = 0


def _connectors(q, prev, nxt) -> float:
    return sum(distance(q, p) for p in (prev, nxt) if p is not None)


def optimize_angle(center, radius: float, prev, nxt, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    """Angle on the circle minimizing ``|prev - q| + |nxt - q|``.

    When the segment prev->nxt crosses the circle, the first crossing is
    optimal (the objective equals ``|prev - nxt|``). Otherwise the optimum
    lies on the smaller arc between the projections of ``prev`` and ``nxt``,
    where the derivative changes sign once; it is found by bisection.
    """
    c = Circle(as_point(center), radius)
    prev, nxt = as_point(prev), as_point(nxt)
    for p in (prev, nxt):
        if distance(p, c.center) <= radius * (1.0 + cfg.boundary_tol):
            raise DegenerateInput(f"neighbor point {tuple(p)} is not outside the circle")
    hits = segment_circle_intersections(prev, nxt, c)
    if hits:
        t = hits[0]
        return c.angle_of((prev.x + t * (nxt.x - prev.x), prev.y + t * (nxt.y - prev.y)))

    arc = smaller_arc_between(c, nearest_point_on_circle(c, prev, cfg), nearest_point_on_circle(c, nxt, cfg), cfg)
    sweep = arc.sweep
    if sweep <= cfg.angle_tol:
        return arc.start_angle

    def slope(s: float) -> float:
        phi = arc.start_angle + arc.sign * s
        qx, qy = c.center.x + radius * math.cos(phi), c.center.y + radius * math.sin(phi)
        tx, ty = -radius * math.sin(phi), radius * math.cos(phi)
        g = 0.0
        for p in (prev, nxt):
            dx, dy = qx - p.x, qy - p.y
            g += (dx * tx + dy * ty) / math.hypot(dx, dy)
        return arc.sign * g

    lo, hi = 0.0, sweep
    if slope(lo) >= 0.0:
        return arc.start_angle
    if slope(hi) <= 0.0:
        return arc.end_angle
    for _ in range(cfg.max_iter):
        if hi - lo <= cfg.angle_tol:
            break
        mid = 0.5 * (lo + hi)
        if slope(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return arc.angle_at(0.5 * (lo + hi))


def optimize_radius(
    center,
    phi: float,
    prev,
    nxt,
    zeta: float,
    r_lo: float,
    r_hi: float,
    cfg: SolverConfig = DEFAULT_CONFIG,
) -> float:
    """Largest radius in ``[r_lo, r_hi]`` whose connector sum stays within ``zeta``.

    The connector sum is convex in the radius along a fixed direction, so
    the feasible set is an interval starting at ``r_lo``.
    """
    center = as_point(center)
    ux, uy = math.cos(phi), math.sin(phi)

    def f(r: float) -> float:
        q = (center.x + r * ux, center.y + r * uy)
        return _connectors(q, prev, nxt)

    limit = zeta * (1.0 + cfg.feas_tol)
    if r_hi <= r_lo or f(r_hi) <= limit:
        return max(r_lo, r_hi)
    lo, hi = r_lo, r_hi
    for _ in range(cfg.max_iter):
        if hi - lo <= cfg.feas_tol * r_hi:
            break
        mid = 0.5 * (lo + hi)
        if f(mid) <= limit:
            lo = mid
        else:
            hi = mid
    return lo


CircleTime = Callable[[float], float]


def refine_exit_point(
    region: RegionSpec,
    point: Point2D,
    radius: float,
    prev: Optional[Point2D],
    nxt: Optional[Point2D],
    circle_time: CircleTime,
    connector_speed: float,
    cfg: SolverConfig = DEFAULT_CONFIG,
) -> Tuple[Point2D, float, List[float]]:
    """Alternate angle and radius updates for one region's exit point.

    Returns the new point, radius and the local time after each update
    (connector travel plus this region's revolution). Raises
    :class:`MonotonicityViolation` if that time ever grows.
    """
    c = region.circle.center

    def local_time(q, r):
        return _connectors(q, prev, nxt) / connector_speed + circle_time(r)

    history = [local_time(point, radius)]
    if cfg.max_inner_iters == 0:
        return point, radius, history
    if prev is None and nxt is None:
        # no connectors to trade against
        return point, radius, history

    a = prev if prev is not None else nxt
    b = nxt if nxt is not None else prev
    for _ in range(cfg.max_inner_iters):
        phi = optimize_angle(c, radius, a, b, cfg)
        q_phi = Point2D(c.x + radius * math.cos(phi), c.y + radius * math.sin(phi))
        zeta = _connectors(q_phi, prev, nxt)
        r_new = optimize_radius(c, phi, prev, nxt, zeta, radius, region.r_opt, cfg)
        # wide beams make the revolution slower at larger radii; keep the old radius then
        if circle_time(r_new) > circle_time(radius):
            r_new = radius
        q = Point2D(c.x + r_new * math.cos(phi), c.y + r_new * math.sin(phi))
        t = local_time(q, r_new)
        if t > history[-1] * (1.0 + cfg.monotonic_tol):
            raise MonotonicityViolation(
                f"region {region.region_id}: local time rose from {history[-1]!r} to {t!r}"
            )
        history.append(t)
        moved = distance(q, point)
        point, radius = q, r_new
        if moved <= cfg.point_tol:
            break
    return point, radius, history


def region_circle_time(
    region: RegionSpec, params: LinkParams, vlim: VelocityLimit, cfg: SolverConfig = DEFAULT_CONFIG
) -> CircleTime:
    def circle_time(r: float) -> float:
        v = solve_velocity(r, region.circle, region.r_th, params, vlim, cfg, indoor=region.indoor, method="closed_form")
        return TWO_PI / v

    return circle_time


def initial_exit_points(regions: Sequence[RegionSpec], start=None, cfg: SolverConfig = DEFAULT_CONFIG):
    """Half-radius trajectories, each entered at the point nearest the previous exit."""
    points, radii = [], []
    for i, reg in enumerate(regions):
        traj = reg.circle.with_radius(reg.r_min)
        if i == 0:
            anchor = regions[1].circle.center if len(regions) > 1 else start
        else:
            anchor = points[-1]
        if anchor is None or distance(anchor, traj.center) <= cfg.degenerate_tol:
            q = traj.point_at(0.0)
        else:
            q = nearest_point_on_circle(traj, anchor, cfg)
        points.append(q)
        radii.append(reg.r_min)
    return points, radii


def sweep_exit_points(
    regions: Sequence[RegionSpec],
    order: Sequence[int],
    params: LinkParams,
    vlim: VelocityLimit,
    cfg: SolverConfig = DEFAULT_CONFIG,
    start=None,
) -> ConnectState:
    """Coordinate descent over exit points, one region per step, ``cfg.max_sweeps`` passes.

    The returned state lists points and radii in visiting order. ``trace``
    holds the phase-2 time (revolutions plus connectors) before the first
    update and after every single-region update.
    """
    ordered = [regions[k] for k in order]
    times = [region_circle_time(reg, params, vlim, cfg) for reg in ordered]
    points, radii = initial_exit_points(ordered, start, cfg)
    speed = vlim.linear_max

    def total() -> float:
        conn = sum(distance(a, b) for a, b in zip(points, points[1:]))
        return conn / speed + sum(t(r) for t, r in zip(times, radii))

    trace = [total()]
    sweeps = 0
    if len(ordered) == 1:
        return ConnectState(tuple(points), tuple(radii), 0.0, tuple(trace), 0)
    for _ in range(cfg.max_sweeps):
        sweeps += 1
        moved = 0.0
        for i, reg in enumerate(ordered):
            prev = points[i - 1] if i > 0 else None
            nxt = points[i + 1] if i + 1 < len(points) else None
            q, r, _ = refine_exit_point(reg, points[i], radii[i], prev, nxt, times[i], speed, cfg)
            moved = max(moved, distance(q, points[i]), abs(r - radii[i]))
            points[i], radii[i] = q, r
            t = total()
            if t > trace[-1] * (1.0 + cfg.monotonic_tol):
                raise MonotonicityViolation(f"phase-2 time rose from {trace[-1]!r} to {t!r}")
            trace.append(t)
        if moved <= cfg.point_tol:
            break
    conn = sum(distance(a, b) for a, b in zip(points, points[1:]))
    return ConnectState(tuple(points), tuple(radii), conn, tuple(trace), sweeps)


# --------------------------------------------------------------------------- #
# Mission assembly
# --------------------------------------------------------------------------- #
@dataclass(frozen=True)
class ArcSegment:
    arc: Arc
    angular_velocity: float
    region: Circle
    region_id: int = AREA_ID
    indoor: bool = False

    @property
    def start(self) -> Point2D:
        return self.arc.start

    @property
    def end(self) -> Point2D:
        return self.arc.end

    @property
    def length(self) -> float:
        return self.arc.length

    @property
    def time(self) -> float:
        if self.angular_velocity <= 0:
            return math.inf
        return self.arc.sweep / self.angular_velocity

    @property
    def speed(self) -> float:
        return self.angular_velocity * self.arc.circle.radius

    def with_velocity(self, v: float) -> "ArcSegment":
        return ArcSegment(self.arc, v, self.region, self.region_id, self.indoor)


@dataclass(frozen=True)
class LineSegment:
    line: Line
    speed: float

    @property
    def start(self) -> Point2D:
        return self.line.start

    @property
    def end(self) -> Point2D:
        return self.line.end

    @property
    def length(self) -> float:
        return self.line.length

    @property
    def time(self) -> float:
        if self.speed <= 0:
            return math.inf
        return self.line.length / self.speed


MissionSegment = Union[ArcSegment, LineSegment]


@dataclass(frozen=True)
class RegionVisit:
    region_id: int
    radius: float
    angular_velocity: float
    traversal_time: float


@dataclass(frozen=True)
class MissionPlan:
    segments: Tuple[MissionSegment, ...]
    per_region: Tuple[RegionVisit, ...] = ()
    kind: str = "multi"

    @property
    def total_time(self) -> float:
        return sum(s.time for s in self.segments)

    @property
    def arcs(self) -> List[ArcSegment]:
        return [s for s in self.segments if isinstance(s, ArcSegment)]

    @property
    def lines(self) -> List[LineSegment]:
        return [s for s in self.segments if isinstance(s, LineSegment)]

    def geometry(self) -> List[Union[Arc, Line]]:
        return [s.arc if isinstance(s, ArcSegment) else s.line for s in self.segments]

    def path_length(self, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
        return tour_length(self.geometry(), cfg)

    def scaled_arc(self, index: int, factor: float) -> "MissionPlan":
        """Copy with the ``index``-th arc flown ``factor`` times faster."""
        segs = list(self.segments)
        k = [i for i, s in enumerate(segs) if isinstance(s, ArcSegment)][index]
        segs[k] = segs[k].with_velocity(segs[k].angular_velocity * factor)
        return MissionPlan(tuple(segs), self.per_region, self.kind)


def single_mission(plan: SingleCirclePlan, start_angle: float = 0.0, region_id: int = AREA_ID) -> MissionPlan:
    traj = plan.region.with_radius(plan.r_u)
    seg = ArcSegment(Arc.full_circle(traj, start_angle), plan.angular_velocity, plan.region, region_id, plan.indoor)
    visit = RegionVisit(region_id, plan.r_u, plan.angular_velocity, plan.completion_time)
    return MissionPlan((seg,), (visit,), kind="single")


def assemble_mission(
    big: SingleCirclePlan,
    regions: Sequence[RegionSpec],
    state: ConnectState,
    params: LinkParams,
    vlim: VelocityLimit,
    cfg: SolverConfig = DEFAULT_CONFIG,
) -> MissionPlan:
    """Chain the area revolution, the connectors and the region revolutions.

    ``regions`` must be in visiting order, matching ``state``. The area
    revolution starts and ends at its point nearest the first exit point.
    """
    big_traj = big.region.with_radius(big.r_u)
    segs: List[MissionSegment] = []
    visits = [RegionVisit(AREA_ID, big.r_u, big.angular_velocity, big.completion_time)]
    if state.exit_points:
        first = state.exit_points[0]
        if distance(first, big_traj.center) <= cfg.degenerate_tol:
            start_angle = 0.0
        else:
            start_angle = big_traj.angle_of(first)
    else:
        start_angle = 0.0
    big_arc = Arc.full_circle(big_traj, start_angle)
    segs.append(ArcSegment(big_arc, big.angular_velocity, big.region, AREA_ID, False))
    here = big_arc.end
    for reg, q, r in zip(regions, state.exit_points, state.radii):
        segs.append(LineSegment(Line(here, q), vlim.linear_max))
        v = solve_velocity(r, reg.circle, reg.r_th, params, vlim, cfg, indoor=reg.indoor)
        traj = reg.circle.with_radius(r)
        arc = Arc.full_circle(traj, traj.angle_of(q))
        segs.append(ArcSegment(arc, v, reg.circle, reg.region_id, reg.indoor))
        visits.append(RegionVisit(reg.region_id, r, v, TWO_PI / v))
        here = arc.end
    plan = MissionPlan(tuple(segs), tuple(visits), kind="multi")
    plan.path_length(cfg)
    return plan


@dataclass(frozen=True)
class MultiRegionResult:
    mission: MissionPlan
    order: Tuple[int, ...]
    state: ConnectState
    area_plan: SingleCirclePlan
    regions: Tuple[RegionSpec, ...]

    @property
    def total_time(self) -> float:
        return self.mission.total_time


def region_specs(buildings: Sequence[Circle], r_th: float, params: LinkParams, cfg: SolverConfig = DEFAULT_CONFIG):
    specs = []
    for k, b in enumerate(buildings):
        try:
            r_opt = solve_balanced_radius(b, params, cfg)
        except NoSignChange as exc:
            r_opt = exc.radius
        specs.append(RegionSpec(b, r_opt, r_th, indoor=True, region_id=k))
    return specs


def plan_multi(
    area: Circle,
    buildings: Sequence[Circle],
    r_th: float,
    params: LinkParams,
    vlim: VelocityLimit,
    cfg: SolverConfig = DEFAULT_CONFIG,
) -> MultiRegionResult:
    """Full two-phase plan. ``params.outdoor_loss`` applies to the area sweep."""
    area_plan = plan_single(area, r_th, params, vlim, cfg, indoor=False)
    specs = region_specs(buildings, r_th, params, cfg)
    if not specs:
        state = ConnectState((), (), 0.0, (0.0,), 0)
        return MultiRegionResult(single_mission(area_plan), (), state, area_plan, ())
    order = order_regions([s.circle.center for s in specs], cfg)
    state = sweep_exit_points(specs, order, params, vlim, cfg, start=area.center)
    ordered = tuple(specs[k] for k in order)
    mission = assemble_mission(area_plan, ordered, state, params, vlim, cfg)
    return MultiRegionResult(mission, tuple(order), state, area_plan, ordered)
