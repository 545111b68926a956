"""Estimator-style wrappers around the planners.

``fit`` computes a plan for one area (and optional buildings) at one data
threshold; ``predict`` returns completion times for an array of thresholds
using the fitted geometry.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_circle, check_circles, check_positive, check_thresholds
from .config import DEFAULT_CONFIG, SolverConfig
from .linkbudget import LinkParams
from .multi_region import plan_multi
from .single_circle import VelocityLimit, plan_single, solve_velocity


class _PlannerBase(BaseEstimator):
    def __init__(
        self,
        f_c: float = 3.0,
        tx_power: float = 20.0,
        noise_density: float = -174.0,
        bandwidth: float = 20e6,
        phi_a: float = math.pi / 6.0,
        altitude: float = 100.0,
        v_max_m_s: float = 72.0 * 0.44704,
        outdoor_loss_delta_db: Optional[float] = None,
        config: Optional[SolverConfig] = None,
    ):
        self.f_c = f_c
        self.tx_power = tx_power
        self.noise_density = noise_density
        self.bandwidth = bandwidth
        self.phi_a = phi_a
        self.altitude = altitude
        self.v_max_m_s = v_max_m_s
        self.outdoor_loss_delta_db = outdoor_loss_delta_db
        self.config = config

    def _link(self) -> LinkParams:
        link = LinkParams(
            f_c=self.f_c,
            tx_power=self.tx_power,
            noise_density=self.noise_density,
            bandwidth=self.bandwidth,
            phi_a=self.phi_a,
            altitude=self.altitude,
        )
        if self.outdoor_loss_delta_db is not None:
            link = link.with_outdoor_delta_db(self.outdoor_loss_delta_db)
        return link

    def _vlim(self) -> VelocityLimit:
        return VelocityLimit(check_positive("v_max_m_s", self.v_max_m_s))

    def _cfg(self) -> SolverConfig:
        return self.config or DEFAULT_CONFIG


class SingleCirclePlanner(_PlannerBase):
    """One circular trajectory over a disc.

    Fitted attributes: ``plan_``, ``r_u_``, ``angular_velocity_``,
    ``completion_time_``.
    """

    def fit(self, area, r_th: float, indoor: bool = False):
        self.area_ = check_circle(area, "area")
        self.indoor_ = bool(indoor)
        self.link_ = self._link()
        self.vlim_ = self._vlim()
        self.plan_ = plan_single(self.area_, check_positive("r_th", r_th), self.link_, self.vlim_, self._cfg(), indoor=self.indoor_)
        self.r_u_ = self.plan_.r_u
        self.angular_velocity_ = self.plan_.angular_velocity
        self.completion_time_ = self.plan_.completion_time
        return self

    def predict(self, X) -> np.ndarray:
        """Completion time (s) at the fitted radius for each threshold in ``X``."""
        check_is_fitted(self, "plan_")
        th = check_thresholds(X)
        cfg = self._cfg()
        v = [solve_velocity(self.r_u_, self.area_, t, self.link_, self.vlim_, cfg, indoor=self.indoor_) for t in th]
        return 2.0 * math.pi / np.asarray(v)


class MultiRegionPlanner(_PlannerBase):
    """Area sweep plus a tour of building circles.

    Fitted attributes: ``result_``, ``mission_``, ``order_``, ``total_time_``.
    """

    def __init__(
        self,
        f_c: float = 3.0,
        tx_power: float = 20.0,
        noise_density: float = -174.0,
        bandwidth: float = 20e6,
        phi_a: float = math.pi / 6.0,
        altitude: float = 100.0,
        v_max_m_s: float = 72.0 * 0.44704,
        outdoor_loss_delta_db: Optional[float] = 30.0,
        config: Optional[SolverConfig] = None,
    ):
        super().__init__(f_c, tx_power, noise_density, bandwidth, phi_a, altitude, v_max_m_s, outdoor_loss_delta_db, config)

    def fit(self, area, buildings: Sequence, r_th: float):
        self.area_ = check_circle(area, "area")
        self.buildings_ = check_circles(buildings)
        self.link_ = self._link()
        self.vlim_ = self._vlim()
        self.result_ = plan_multi(self.area_, self.buildings_, check_positive("r_th", r_th), self.link_, self.vlim_, self._cfg())
        self.mission_ = self.result_.mission
        self.order_ = self.result_.order
        self.total_time_ = self.result_.total_time
        return self

    def predict(self, X) -> np.ndarray:
        """Total mission time (s) for each threshold in ``X``, replanned per threshold."""
        check_is_fitted(self, "result_")
        th = check_thresholds(X)
        cfg = self._cfg()
        return np.asarray(
            [plan_multi(self.area_, self.buildings_, t, self.link_, self.vlim_, cfg).total_time for t in th]
        )
