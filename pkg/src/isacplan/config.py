"""Solver tolerances and iteration caps shared by every planner stage."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from typing import Optional


@dataclass(frozen=True)
class SolverConfig:
    """Numerical knobs for the planners and the coverage oracle.

    Tolerances are relative unless the name says otherwise. ``grid_step`` and
    ``dt`` default to ``None``, meaning the oracle derives them from the
    region size and beam width.
    """

    metric_tol: float = 1e-9
    v_tol: float = 1e-9
    angle_tol: float = 1e-10
    feas_tol: float = 1e-9
    point_tol: float = 1e-6
    max_iter: int = 200
    max_inner_iters: int = 20
    max_sweeps: int = 50
    exact_order_max: int = 9
    boundary_tol: float = 1e-9
    degenerate_tol: float = 1e-12
    contiguity_tol: float = 1e-6
    monotonic_tol: float = 1e-9
    grid_step: Optional[float] = None
    dt: Optional[float] = None
    rel_slack: float = 0.01
    seed: int = 0

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None or f.name in ("seed", "max_inner_iters"):
                continue
            if value <= 0:
                raise ValueError(f"SolverConfig.{f.name} must be positive, got {value!r}")
        if self.max_inner_iters < 0:
            raise ValueError("SolverConfig.max_inner_iters must be >= 0")

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULT_CONFIG = SolverConfig()
