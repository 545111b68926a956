"""Brute-force check that every ground point receives enough data.

The UAV is moved along each arc in small time steps. A ground point is in
the beam when it lies inside the circle the arc serves and its polar angle
about that circle's center is within ``phi_a`` of the UAV's polar angle.
Delivered bits accumulate as ``bandwidth * SE * dt`` using the midpoint of
every step. Straight connectors deliver nothing.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .config import DEFAULT_CONFIG, SolverConfig
from .exceptions import ResolutionTooCoarse
from .geometry import Circle, Point2D, as_point
from .linkbudget import LinkParams, se_from_distance
from .multi_region import ArcSegment, MissionPlan

log = logging.getLogger(__name__)

CHUNK = 4096
REFINE_POINTS = 64


@dataclass(frozen=True)
class ConnectionWindows:
    """In-beam intervals ``[t_s, t_e]`` of one ground point over a mission of length ``horizon``."""

    point: Point2D
    intervals: Tuple[Tuple[float, float], ...]
    horizon: float

    @property
    def count(self) -> int:
        return len(self.intervals)

    @property
    def total(self) -> float:
        return sum(e - s for s, e in self.intervals)

    def valid(self) -> bool:
        last = -math.inf
        for s, e in self.intervals:
            if not (0.0 <= s <= e <= self.horizon * (1.0 + 1e-12)) or s < last:
                return False
            last = e
        return True


@dataclass(frozen=True)
class CoverageReport:
    grid_step: float
    dt: float
    min_delivered: float
    min_location: Point2D
    violations: Tuple[Tuple[Point2D, float], ...]
    passed: bool
    r_th: float
    rel_slack: float
    n_points: int
    windows_ok: bool = True
    speeds_ok: bool = True
    resolution_change: Optional[float] = None

    @property
    def margin(self) -> float:
        """Worst delivered data over the threshold."""
        return self.min_delivered / self.r_th

    def to_dict(self) -> dict:
        return {
            "grid_step_m": self.grid_step,
            "dt_s": self.dt,
            "min_delivered_bits": self.min_delivered,
            "min_location_m": [self.min_location.x, self.min_location.y],
            "r_th_bits": self.r_th,
            "rel_slack": self.rel_slack,
            "n_points": self.n_points,
            "windows_ok": self.windows_ok,
            "speeds_ok": self.speeds_ok,
            "resolution_change": self.resolution_change,
            "pass": self.passed,
            "violations": [{"point_m": [p.x, p.y], "delivered_bits": d} for p, d in self.violations],
        }


def ground_grid(area: Circle, step: float) -> np.ndarray:
    """Square lattice through the area center, clipped to the disc."""
    if not step > 0:
        raise ValueError("grid_step must be positive")
    n = int(math.floor(area.radius / step))
    ax = np.arange(-n, n + 1) * step
    X, Y = np.meshgrid(ax, ax, indexing="ij")
    keep = X * X + Y * Y <= area.radius * area.radius * (1.0 + 1e-12)
    return np.column_stack([X[keep] + area.center.x, Y[keep] + area.center.y])


def arc_dt(arc: ArcSegment, phi_a: float) -> float:
    """Step over which ``arc`` sweeps ``phi_a / 50``."""
    return phi_a / 50.0 / abs(arc.angular_velocity)


def default_dt(plan: MissionPlan, phi_a: float) -> float:
    """Finest per-arc step of the plan, reported as the oracle's resolution."""
    return min(arc_dt(a, phi_a) for a in plan.arcs)


def _indoor_mask(pts: np.ndarray, buildings: Sequence[Circle]) -> np.ndarray:
    mask = np.zeros(len(pts), dtype=bool)
    for b in buildings:
        mask |= np.hypot(pts[:, 0] - b.center.x, pts[:, 1] - b.center.y) <= b.radius
    return mask


def _arc_samples(arc: ArcSegment, t0: float, dt: Optional[float], phi_a: float, refine: float = 1.0):
    """Midpoint sample times (absolute), UAV polar angles and the step length.

    ``dt=None`` uses the arc's own step from :func:`arc_dt`.
    """
    dt = (dt or arc_dt(arc, phi_a)) / refine
    n = max(1, int(math.ceil(arc.time / dt - 1e-9)))
    h = arc.time / n
    k = np.arange(n) + 0.5
    angles = arc.arc.start_angle + arc.arc.sign * arc.angular_velocity * h * k
    return t0 + h * k, angles, h


def _in_beam(pts: np.ndarray, arc: ArcSegment, angles: np.ndarray, phi_a: float) -> np.ndarray:
    c = arc.region.center
    dx, dy = pts[:, 0] - c.x, pts[:, 1] - c.y
    rho = np.hypot(dx, dy)
    theta = np.arctan2(dy, dx)
    diff = np.abs(np.mod(theta[:, None] - angles[None, :] + math.pi, 2.0 * math.pi) - math.pi)
    # polar angle is undefined at the exact center; treat it as always covered
    at_center = rho <= 1e-9 * arc.region.radius
    inside = rho <= arc.region.radius * (1.0 + 1e-12)
    return inside[:, None] & ((diff <= phi_a) | at_center[:, None])


def _delivered(pts, indoor, plan: MissionPlan, params: LinkParams, dt: Optional[float], refine: float = 1.0) -> np.ndarray:
    out = np.zeros(len(pts))
    loss = np.where(indoor, params.loss_factor(True), params.loss_factor(False))
    t = 0.0
    for seg in plan.segments:
        if isinstance(seg, ArcSegment):
            _, angles, h = _arc_samples(seg, t, dt, params.phi_a, refine)
            traj = seg.arc.circle
            ux = traj.center.x + traj.radius * np.cos(angles)
            uy = traj.center.y + traj.radius * np.sin(angles)
            c = seg.region.center
            rows = np.flatnonzero(np.hypot(pts[:, 0] - c.x, pts[:, 1] - c.y) <= seg.region.radius * (1.0 + 1e-12))
            sub = pts[rows]
            beam = _in_beam(sub, seg, angles, params.phi_a)
            d = np.hypot(sub[:, 0, None] - ux[None, :], sub[:, 1, None] - uy[None, :])
            se = se_from_distance(d, params, loss[rows, None])
            out[rows] += params.bandwidth * h * np.sum(np.where(beam, se, 0.0), axis=1)
        t += seg.time
    return out


def connection_windows(point, plan: MissionPlan, params: LinkParams, dt: Optional[float] = None) -> ConnectionWindows:
    """Merged in-beam intervals of one point across the whole mission."""
    p = as_point(point)
    pts = np.array([[p.x, p.y]])
    runs: List[List[float]] = []
    t = 0.0
    for seg in plan.segments:
        if isinstance(seg, ArcSegment):
            times, angles, h = _arc_samples(seg, t, dt, params.phi_a)
            beam = _in_beam(pts, seg, angles, params.phi_a)[0]
            for k in np.flatnonzero(beam):
                s, e = times[k] - 0.5 * h, times[k] + 0.5 * h
                if runs and s - runs[-1][1] <= 1e-9 * max(1.0, e):
                    runs[-1][1] = e
                else:
                    runs.append([s, e])
        t += seg.time
    horizon = plan.total_time
    return ConnectionWindows(p, tuple((s, e) for s, e in runs), horizon)


def dwell_time(point, plan: MissionPlan, params: LinkParams, dt: Optional[float] = None) -> Tuple[float, int]:
    """Total in-beam time of ``point`` and its number of connection windows."""
    w = connection_windows(point, plan, params, dt)
    return w.total, w.count


def delivered_at(points, plan: MissionPlan, params: LinkParams, buildings: Sequence[Circle] = (), dt=None):
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    return _delivered(pts, _indoor_mask(pts, buildings), plan, params, dt)


def verify(
    plan: MissionPlan,
    area: Circle,
    params: LinkParams,
    r_th: float,
    buildings: Sequence[Circle] = (),
    cfg: SolverConfig = DEFAULT_CONFIG,
    grid_step: Optional[float] = None,
    dt: Optional[float] = None,
    rel_slack: Optional[float] = None,
    check_resolution: bool = True,
) -> CoverageReport:
    """Simulate ``plan`` over a ground grid of ``area`` and compare with ``r_th``.

    Without an explicit ``dt`` every arc is stepped so that it sweeps
    ``phi_a / 50`` per step.

    A plan with any stationary segment fails immediately with
    ``speeds_ok=False``. Raises :class:`ResolutionTooCoarse` when halving ``dt`` moves the minimum
    delivered data (re-evaluated on the worst points) by more than 1%.
    """
    grid_step = grid_step or cfg.grid_step or area.radius / 100.0
    dt = dt or cfg.dt
    rel_slack = cfg.rel_slack if rel_slack is None else rel_slack
    if not grid_step > 0 or (dt is not None and not dt > 0):
        raise ValueError("grid_step and dt must be positive")
    speeds_ok = all(seg.speed > 0 for seg in plan.segments)
    if not speeds_ok:
        # a hovering UAV breaks mobility outright; no simulation needed
        return CoverageReport(grid_step, dt or math.nan, 0.0, area.center, (), False, r_th, rel_slack, 0, True, False)

    pts = ground_grid(area, grid_step)
    indoor = _indoor_mask(pts, buildings)
    delivered = np.empty(len(pts))
    for k in range(0, len(pts), CHUNK):
        sl = slice(k, k + CHUNK)
        delivered[sl] = _delivered(pts[sl], indoor[sl], plan, params, dt)

    worst = np.argsort(delivered, kind="stable")[:REFINE_POINTS]
    windows_ok = all(connection_windows(q, plan, params, dt).valid() for q in pts[worst[:8]])
    i_min = int(worst[0])
    min_delivered = float(delivered[i_min])

    change = None
    if check_resolution:
        fine = _delivered(pts[worst], indoor[worst], plan, params, dt, refine=2.0)
        change = abs(float(fine.min()) - min_delivered) / max(min_delivered, 1e-300)
        if change > 0.01:
            raise ResolutionTooCoarse(f"halving dt moved the minimum delivered data by {100 * change:.2f}%")

    floor = r_th * (1.0 - rel_slack)
    bad = np.flatnonzero(delivered < floor)
    order = np.lexsort((pts[bad, 1], pts[bad, 0]))
    violations = tuple((Point2D(*pts[bad[j]]), float(delivered[bad[j]])) for j in order)
    log.info("verify: %d points, min %.6g bits at %s, %d violations", len(pts), min_delivered, pts[i_min], len(bad))
    return CoverageReport(
        grid_step=grid_step,
        dt=dt or default_dt(plan, params.phi_a),
        min_delivered=min_delivered,
        min_location=Point2D(*pts[i_min]),
        violations=violations,
        passed=not violations and windows_ok and speeds_ok,
        r_th=r_th,
        rel_slack=rel_slack,
        n_points=len(pts),
        windows_ok=windows_ok,
        speeds_ok=speeds_ok,
        resolution_change=change,
    )
