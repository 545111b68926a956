"""Directional-antenna link model: gain, path gain, penetration loss, SNR.

The elevation angle of a ground point is ``atan(d / H)`` measured from
nadir, with ``d`` the horizontal distance to the UAV. Because the gain
``G0 / (phi_a * |phi_e|)`` diverges at nadir, SNR evaluation clamps the
elevation to at least ``atan(1 / H)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .exceptions import OutOfRange, SingularElevation
from .geometry import Circle, Point2D, distance

SPEED_OF_LIGHT = 299_792_458.0
G0_DEFAULT = 7500.0 * (math.pi / 180.0) ** 2

WORST_CORNER = "worst_corner"
CENTER = "center"


def db_to_linear(db):
    return np.power(10.0, np.divide(db, 10.0))


def linear_to_db(x):
    return 10.0 * np.log10(x)


@dataclass(frozen=True)
class LinkParams:
    """Radio and geometry constants of one mission.

    ``outdoor_loss`` is the linear attenuation applied to points outside any
    building; indoor points get :func:`penetration_loss` instead.
    """

    f_c: float = 3.0  # GHz
    tx_power: float = 20.0  # dBm
    noise_density: float = -174.0  # dBm/Hz
    bandwidth: float = 20e6  # Hz
    phi_a: float = math.pi / 6.0  # azimuth half-beamwidth, rad
    altitude: float = 100.0  # m
    g0: float = G0_DEFAULT
    outdoor_loss: float = 1.0

    def __post_init__(self):
        checks = {
            "f_c": self.f_c > 0,
            "bandwidth": self.bandwidth > 0,
            "phi_a": 0.0 < self.phi_a < math.pi / 2.0,
            "altitude": self.altitude > 0,
            "g0": self.g0 > 0,
            "outdoor_loss": self.outdoor_loss > 0,
        }
        for name, ok in checks.items():
            if not ok or not math.isfinite(getattr(self, name)):
                raise ValueError(f"LinkParams.{name} out of range: {getattr(self, name)!r}")
        if not (math.isfinite(self.tx_power) and math.isfinite(self.noise_density)):
            raise ValueError("LinkParams power levels must be finite")

    @property
    def f_c_hz(self) -> float:
        return self.f_c * 1e9

    @property
    def noise_power_dbm(self) -> float:
        return self.noise_density + 10.0 * math.log10(self.bandwidth)

    @property
    def gamma(self) -> float:
        """Transmit power over receiver noise power, linear."""
        return 10.0 ** ((self.tx_power - self.noise_power_dbm) / 10.0)

    @property
    def min_elevation(self) -> float:
        return math.atan(1.0 / self.altitude)

    @property
    def indoor_loss(self) -> float:
        return penetration_loss(self.f_c)

    def with_outdoor_delta_db(self, delta_db: float) -> "LinkParams":
        """Outdoor points see ``delta_db`` less loss than indoor points."""
        return replace(self, outdoor_loss=self.indoor_loss / 10.0 ** (delta_db / 10.0))

    def replace(self, **changes) -> "LinkParams":
        return replace(self, **changes)

    def loss_factor(self, indoor: bool) -> float:
        return self.indoor_loss if indoor else self.outdoor_loss


class GroundPoint(NamedTuple):
    position: Point2D
    indoor: bool = False


def antenna_gain(phi_e: float, phi_az: float, params: LinkParams) -> float:
    """Beam gain; zero outside the azimuth half-beamwidth."""
    if abs(phi_e) > math.pi / 2.0 or abs(phi_az) > params.phi_a:
        return 0.0
    if abs(phi_e) < 1e-9:
        raise SingularElevation("gain diverges at zero elevation; clamp the elevation first")
    return params.g0 / (params.phi_a * abs(phi_e))


def penetration_loss(f_c: float) -> float:
    """Building penetration loss (linear, >= 1) at ``f_c`` GHz."""
    if f_c <= 0:
        raise ValueError("carrier frequency must be positive")
    return 10.0 ** (0.5 + 0.4 * f_c)


def path_gain(d, params: LinkParams):
    """Free-space gain c^2 / (4 pi f sqrt(d^2 + H^2))^2 for horizontal distance d."""
    d = np.asarray(d, dtype=float)
    if np.any(d < 0):
        raise ValueError("horizontal distance must be >= 0")
    out = SPEED_OF_LIGHT**2 / (4.0 * math.pi * params.f_c_hz) ** 2 / (d * d + params.altitude**2)
    return float(out) if out.ndim == 0 else out


def loss_metric(d, params: LinkParams, clamp: bool = True):
    """|phi_e| * phi_a * (4 pi f sqrt(d^2+H^2) / c)^2, the SNR denominator.

    Vectorized over ``d``.
    """
    d = np.asarray(d, dtype=float)
    phi_e = np.arctan(d / params.altitude)
    if clamp:
        phi_e = np.maximum(phi_e, params.min_elevation)
    k = 4.0 * math.pi * params.f_c_hz / SPEED_OF_LIGHT
    out = phi_e * params.phi_a * k * k * (d * d + params.altitude**2)
    return float(out) if out.ndim == 0 else out


def snr(d, params: LinkParams, loss=1.0):
    """In-beam SNR at horizontal distance ``d`` with linear extra attenuation ``loss``."""
    return params.gamma * params.g0 / (loss_metric(d, params) * loss)


def se_from_distance(d, params: LinkParams, loss=1.0):
    """Spectral efficiency (bits/s/Hz) of an in-beam point."""
    out = np.log2(1.0 + snr(d, params, loss))
    return float(out) if np.ndim(out) == 0 else out


def spectral_efficiency(x: GroundPoint, uav_xy, azimuth_ok: bool, params: LinkParams) -> float:
    """Shannon spectral efficiency delivered to ground point ``x``."""
    if not azimuth_ok:
        return 0.0
    d = distance(x.position, uav_xy)
    phi_e = max(math.atan(d / params.altitude), params.min_elevation)
    gain = antenna_gain(phi_e, 0.0, params)
    loss = params.loss_factor(x.indoor)
    rx = params.gamma * gain * path_gain(d, params) / loss
    return math.log2(1.0 + rx)


def worst_corner(region: Circle, phi_a: float) -> Point2D:
    """Far corner of the beam footprint for a UAV on the +x axis of ``region``."""
    return Point2D(
        region.center.x + region.radius * math.cos(phi_a),
        region.center.y + region.radius * math.sin(phi_a),
    )


def corner_distance(r_u: float, region_radius: float, phi_a: float) -> float:
    """Horizontal distance from a UAV at radius ``r_u`` to the worst corner."""
    R = region_radius
    return math.sqrt(max(R * R - 2.0 * R * r_u * math.cos(phi_a) + r_u * r_u, 0.0))


def worst_point_loss_metric(r_u: float, target: str, region: Circle, params: LinkParams) -> float:
    """Loss metric at the worst corner or at the center for trajectory radius ``r_u``."""
    R = region.radius
    if not (R / 2.0 * (1 - 1e-12) <= r_u <= R * (1 + 1e-12)):
        raise OutOfRange(f"trajectory radius {r_u} outside [{R / 2}, {R}]")
    if target == WORST_CORNER:
        uav = Point2D(region.center.x + r_u, region.center.y)
        d = distance(worst_corner(region, params.phi_a), uav)
    elif target == CENTER:
        d = r_u
    else:
        raise ValueError(f"unknown target {target!r}")
    return loss_metric(d, params)
