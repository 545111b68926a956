"""Planar circles, arcs and straight connectors.

Angles are radians in ``[0, 2*pi)``, measured at the circle center from the
+x axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence, Union

from .config import DEFAULT_CONFIG, SolverConfig
from .exceptions import DegenerateInput, Discontinuous, NotOnBoundary

TWO_PI = 2.0 * math.pi

CCW = "ccw"
CW = "cw"


class Point2D(NamedTuple):
    x: float
    y: float

    def __sub__(self, other):  # type: ignore[override]
        return Point2D(self.x - other[0], self.y - other[1])

    def __add__(self, other):  # type: ignore[override]
        return Point2D(self.x + other[0], self.y + other[1])

    def scale(self, k: float) -> "Point2D":
        return Point2D(self.x * k, self.y * k)

    def norm(self) -> float:
        return math.hypot(self.x, self.y)


def as_point(p) -> Point2D:
    x, y = float(p[0]), float(p[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise DegenerateInput(f"non-finite point {p!r}")
    return Point2D(x, y)


def distance(a, b) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def normalize_angle(theta: float) -> float:
    t = math.fmod(theta, TWO_PI)
    if t < 0.0:
        t += TWO_PI
    # fmod can return exactly 2*pi after the shift for tiny negative inputs
    return 0.0 if t >= TWO_PI else t


@dataclass(frozen=True)
class Circle:
    center: Point2D
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        r = float(self.radius)
        if not (math.isfinite(r) and r > 0.0):
            raise DegenerateInput(f"circle radius must be positive and finite, got {self.radius!r}")
        object.__setattr__(self, "radius", r)

    def point_at(self, angle: float) -> Point2D:
        return Point2D(
            self.center.x + self.radius * math.cos(angle),
            self.center.y + self.radius * math.sin(angle),
        )

    def angle_of(self, p) -> float:
        return normalize_angle(math.atan2(p[1] - self.center.y, p[0] - self.center.x))

    def contains(self, p, strict: bool = False) -> bool:
        d = distance(p, self.center)
        return d < self.radius if strict else d <= self.radius

    def with_radius(self, radius: float) -> "Circle":
        return Circle(self.center, radius)


@dataclass(frozen=True)
class Arc:
    """A portion of ``circle`` swept from ``start_angle`` in ``direction``.

    ``full=True`` marks a complete revolution that starts and ends at
    ``start_angle``; ``end_angle`` is then equal to ``start_angle``.
    """

    circle: Circle
    start_angle: float
    end_angle: float
    direction: str = CCW
    full: bool = False

    def __post_init__(self):
        if self.direction not in (CCW, CW):
            raise ValueError(f"direction must be 'ccw' or 'cw', got {self.direction!r}")
        object.__setattr__(self, "start_angle", normalize_angle(self.start_angle))
        object.__setattr__(self, "end_angle", normalize_angle(self.end_angle))
        if self.full:
            object.__setattr__(self, "end_angle", self.start_angle)

    @property
    def sweep(self) -> float:
        if self.full:
            return TWO_PI
        if self.direction == CCW:
            return normalize_angle(self.end_angle - self.start_angle)
        return normalize_angle(self.start_angle - self.end_angle)

    @property
    def length(self) -> float:
        return self.circle.radius * self.sweep

    @property
    def start(self) -> Point2D:
        return self.circle.point_at(self.start_angle)

    @property
    def end(self) -> Point2D:
        return self.circle.point_at(self.end_angle)

    @property
    def sign(self) -> float:
        return 1.0 if self.direction == CCW else -1.0

    def angle_at(self, s: float) -> float:
        """Angle after sweeping ``s`` radians from the start."""
        return normalize_angle(self.start_angle + self.sign * s)

    @classmethod
    def full_circle(cls, circle: Circle, start_angle: float = 0.0, direction: str = CCW) -> "Arc":
        return cls(circle, start_angle, start_angle, direction, full=True)


@dataclass(frozen=True)
class Line:
    start: Point2D
    end: Point2D

    def __post_init__(self):
        object.__setattr__(self, "start", as_point(self.start))
        object.__setattr__(self, "end", as_point(self.end))

    @property
    def length(self) -> float:
        return distance(self.start, self.end)

    def point_at(self, frac: float) -> Point2D:
        return Point2D(
            self.start.x + frac * (self.end.x - self.start.x),
            self.start.y + frac * (self.end.y - self.start.y),
        )


Segment = Union[Arc, Line]


def nearest_point_on_circle(c: Circle, p, cfg: SolverConfig = DEFAULT_CONFIG) -> Point2D:
    """Boundary point of ``c`` closest to ``p``."""
    p = as_point(p)
    dx, dy = p.x - c.center.x, p.y - c.center.y
    d = math.hypot(dx, dy)
    if d <= cfg.degenerate_tol:
        raise DegenerateInput("point coincides with the circle center; nearest point is not unique")
    return Point2D(c.center.x + c.radius * dx / d, c.center.y + c.radius * dy / d)


def _check_on_boundary(c: Circle, p, cfg: SolverConfig) -> None:
    if abs(distance(p, c.center) - c.radius) > cfg.boundary_tol * c.radius:
        raise NotOnBoundary(f"point {tuple(p)} is not on circle {c}")


def smaller_arc_between(c: Circle, a, b, cfg: SolverConfig = DEFAULT_CONFIG) -> Arc:
    """Arc of swept angle <= pi joining boundary points ``a`` and ``b``.

    An antipodal pair resolves to the counter-clockwise arc from ``a``.
    """
    _check_on_boundary(c, a, cfg)
    _check_on_boundary(c, b, cfg)
    ta, tb = c.angle_of(a), c.angle_of(b)
    ccw_sweep = normalize_angle(tb - ta)
    if ccw_sweep <= math.pi:
        return Arc(c, ta, tb, CCW)
    return Arc(c, ta, tb, CW)


def segment_endpoints(seg: Segment) -> tuple[Point2D, Point2D]:
    return seg.start, seg.end


def tour_length(segments: Iterable[Segment], cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    """Total length of a contiguous chain of arcs and lines."""
    total = 0.0
    prev_end: Optional[Point2D] = None
    for k, seg in enumerate(segments):
        start, end = segment_endpoints(seg)
        if prev_end is not None and distance(prev_end, start) > cfg.contiguity_tol:
            raise Discontinuous(
                f"segment {k} starts at {tuple(start)} but previous segment ends at {tuple(prev_end)}"
            )
        total += seg.length
        prev_end = end
    return total


def segment_circle_intersections(p, q, c: Circle) -> list[float]:
    """Parameters ``t`` in [0, 1] where segment p->q meets the circle boundary."""
    px, py = p[0] - c.center.x, p[1] - c.center.y
    dx, dy = q[0] - p[0], q[1] - p[1]
    a = dx * dx + dy * dy
    if a == 0.0:
        return []
    b = 2.0 * (px * dx + py * dy)
    cc = px * px + py * py - c.radius * c.radius
    disc = b * b - 4.0 * a * cc
    if disc < 0.0:
        return []
    s = math.sqrt(disc)
    roots = sorted({(-b - s) / (2.0 * a), (-b + s) / (2.0 * a)})
    return [t for t in roots if 0.0 <= t <= 1.0]


def path_length(points: Sequence) -> float:
    return sum(distance(points[k], points[k + 1]) for k in range(len(points) - 1))
