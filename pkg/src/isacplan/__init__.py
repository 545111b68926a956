"""Minimum-time circular trajectories for UAV coverage with a directional beam."""

from .config import DEFAULT_CONFIG, SolverConfig
from .coverage import ConnectionWindows, CoverageReport, connection_windows, dwell_time, verify
from .estimators import MultiRegionPlanner, SingleCirclePlanner
from .exceptions import (
    DegenerateInput,
    Discontinuous,
    InfeasibleThreshold,
    IsacError,
    MonotonicityViolation,
    NoSignChange,
    NotOnBoundary,
    OutOfRange,
    ParseError,
    ResolutionTooCoarse,
    SingularElevation,
    ValidationError,
)
from .geometry import Arc, Circle, Line, Point2D, nearest_point_on_circle, smaller_arc_between, tour_length
from .linkbudget import GroundPoint, LinkParams, antenna_gain, path_gain, penetration_loss, spectral_efficiency
from .multi_region import (
    ConnectState,
    MissionPlan,
    RegionSpec,
    assemble_mission,
    optimize_angle,
    optimize_radius,
    order_regions,
    plan_multi,
    refine_exit_point,
    sweep_exit_points,
)
from .scenario import Scenario, load_scenario, save_scenario
from .single_circle import (
    SingleCirclePlan,
    VelocityLimit,
    plan_single,
    savings_profile,
    solve_balanced_radius,
    solve_velocity,
)

__version__ = "0.1.0"
