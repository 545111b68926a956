"""Scenario files: JSON with units spelled out in every key.

Accepted alternatives on input are normalized on load (``v_max_mph`` to
``v_max_m_s``, ``r_th_mb`` to ``r_th_bits``, ``phi_a_deg`` to
``phi_a_rad``). :func:`save_scenario` always writes the canonical keys,
sorted, so a canonical file survives a load/save round trip byte for byte.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from .config import DEFAULT_CONFIG, SolverConfig
from .exceptions import DegenerateInput, ParseError, ValidationError
from .geometry import Circle, distance
from .linkbudget import LinkParams
from .single_circle import MPH_TO_M_S, VelocityLimit

PathLike = Union[str, Path]

_LINK_KEYS = {
    "f_c_ghz": "f_c",
    "tx_power_dbm": "tx_power",
    "noise_density_dbm_hz": "noise_density",
    "bandwidth_hz": "bandwidth",
    "altitude_m": "altitude",
}


@dataclass(frozen=True)
class Scenario:
    link: LinkParams
    scanning_area: Circle
    buildings: Tuple[Circle, ...] = ()
    outdoor_loss_delta_db: Optional[float] = None
    r_th: float = 50e6
    vlim: VelocityLimit = field(default_factory=lambda: VelocityLimit.from_mph(72.0))
    solver: SolverConfig = DEFAULT_CONFIG
    name: str = ""

    def __post_init__(self):
        validate_scenario(self)

    @property
    def effective_link(self) -> LinkParams:
        """Link parameters with the outdoor loss factor applied, if one is configured."""
        if self.outdoor_loss_delta_db is None:
            return self.link
        return self.link.with_outdoor_delta_db(self.outdoor_loss_delta_db)

    @property
    def has_buildings(self) -> bool:
        return bool(self.buildings)


def validate_scenario(s: Scenario) -> None:
    if not (s.r_th > 0 and math.isfinite(s.r_th)):
        raise ValidationError(f"r_th_bits must be positive and finite, got {s.r_th!r}")
    area = s.scanning_area
    for k, b in enumerate(s.buildings):
        if distance(b.center, area.center) + b.radius > area.radius * (1.0 + 1e-12):
            raise ValidationError(f"building {k} is not inside the scanning area")
    for i in range(len(s.buildings)):
        for j in range(i + 1, len(s.buildings)):
            a, b = s.buildings[i], s.buildings[j]
            if distance(a.center, b.center) < a.radius + b.radius:
                raise ValidationError(f"buildings {i} and {j} overlap")


def _require(obj: Dict[str, Any], key: str, where: str):
    if key not in obj:
        raise ParseError(f"missing field '{where}{key}'", field=where + key)
    return obj[key]


def _number(value, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"field '{name}' must be a number, got {value!r}", field=name)
    return float(value)


def _circle(obj, name: str) -> Circle:
    if not isinstance(obj, dict):
        raise ParseError(f"field '{name}' must be an object", field=name)
    c = _require(obj, "center_m", name + ".")
    if not (isinstance(c, list) and len(c) == 2):
        raise ParseError(f"field '{name}.center_m' must be [x, y]", field=name + ".center_m")
    r = _number(_require(obj, "radius_m", name + "."), name + ".radius_m")
    try:
        return Circle((_number(c[0], name + ".center_m"), _number(c[1], name + ".center_m")), r)
    except DegenerateInput as exc:
        raise ValidationError(f"{name}: {exc}") from exc


def _one_of(obj: Dict[str, Any], keys: Dict[str, float], where: str) -> float:
    """Value of whichever unit variant is present, converted to the first key's unit."""
    found = [k for k in keys if k in obj]
    if not found:
        raise ParseError(f"missing field '{where}{next(iter(keys))}'", field=where + next(iter(keys)))
    if len(found) > 1:
        raise ParseError(f"fields {found} are alternatives; give only one", field=where + found[0])
    k = found[0]
    return _number(obj[k], where + k) * keys[k]


def scenario_from_dict(data: Dict[str, Any], name: str = "") -> Scenario:
    if not isinstance(data, dict):
        raise ParseError("scenario must be a JSON object")
    link_obj = _require(data, "link", "")
    if not isinstance(link_obj, dict):
        raise ParseError("field 'link' must be an object", field="link")
    kwargs = {}
    for key, attr in _LINK_KEYS.items():
        if key in link_obj:
            kwargs[attr] = _number(link_obj[key], "link." + key)
    kwargs["phi_a"] = _one_of(link_obj, {"phi_a_rad": 1.0, "phi_a_deg": math.pi / 180.0}, "link.")
    try:
        link = LinkParams(**kwargs)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc

    area = _circle(_require(data, "scanning_area", ""), "scanning_area")
    raw_b = data.get("buildings", [])
    if not isinstance(raw_b, list):
        raise ParseError("field 'buildings' must be a list", field="buildings")
    buildings = tuple(_circle(b, f"buildings[{k}]") for k, b in enumerate(raw_b))
    delta = data.get("outdoor_loss_delta_db")
    if delta is not None:
        delta = _number(delta, "outdoor_loss_delta_db")
    r_th = _one_of(data, {"r_th_bits": 1.0, "r_th_mb": 1e6}, "")
    v_max = _one_of(data, {"v_max_m_s": 1.0, "v_max_mph": MPH_TO_M_S}, "")
    solver_obj = data.get("solver", {})
    try:
        solver = SolverConfig(**solver_obj)
    except TypeError as exc:
        raise ParseError(f"solver: {exc}", field="solver") from exc
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    try:
        vlim = VelocityLimit(v_max)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    return Scenario(link, area, buildings, delta, r_th, vlim, solver, name=data.get("name", name))


def scenario_to_dict(s: Scenario) -> Dict[str, Any]:
    link = {key: getattr(s.link, attr) for key, attr in _LINK_KEYS.items()}
    link["phi_a_rad"] = s.link.phi_a
    out: Dict[str, Any] = {
        "link": link,
        "scanning_area": _circle_dict(s.scanning_area),
        "buildings": [_circle_dict(b) for b in s.buildings],
        "outdoor_loss_delta_db": s.outdoor_loss_delta_db,
        "r_th_bits": s.r_th,
        "v_max_m_s": s.vlim.linear_max,
        "solver": {k: v for k, v in s.solver.to_dict().items() if v != getattr(DEFAULT_CONFIG, k)},
    }
    if s.name:
        out["name"] = s.name
    return out


def _circle_dict(c: Circle) -> Dict[str, Any]:
    return {"center_m": [c.center.x, c.center.y], "radius_m": c.radius}


def dumps_canonical(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def load_scenario(path: PathLike) -> Scenario:
    path = Path(path)
    text = path.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}", line=exc.lineno) from exc
    return scenario_from_dict(data, name=path.stem)


def save_scenario(s: Scenario, path: PathLike) -> None:
    Path(path).write_text(dumps_canonical(scenario_to_dict(s)))
