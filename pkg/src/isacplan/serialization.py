"""Plan and report files (JSON, unit-suffixed keys)."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, Optional

from .coverage import CoverageReport
from .exceptions import ParseError
from .geometry import Arc, Circle, Line
from .multi_region import ArcSegment, LineSegment, MissionPlan, RegionVisit
from .scenario import PathLike, dumps_canonical

FORMAT_VERSION = 1


def _xy(p):
    return [p[0], p[1]]


def segment_to_dict(seg) -> Dict[str, Any]:
    if isinstance(seg, ArcSegment):
        a = seg.arc
        return {
            "type": "arc",
            "center_m": _xy(a.circle.center),
            "radius_m": a.circle.radius,
            "start_angle_rad": a.start_angle,
            "end_angle_rad": a.end_angle,
            "direction": a.direction,
            "full": a.full,
            "sweep_rad": a.sweep,
            "v_rad_s": seg.angular_velocity,
            "speed_m_s": seg.speed,
            "length_m": seg.length,
            "time_s": seg.time,
            "region_center_m": _xy(seg.region.center),
            "region_radius_m": seg.region.radius,
            "region_id": seg.region_id,
            "indoor": seg.indoor,
        }
    return {
        "type": "line",
        "start_m": _xy(seg.start),
        "end_m": _xy(seg.end),
        "speed_m_s": seg.speed,
        "length_m": seg.length,
        "time_s": seg.time,
    }


def plan_to_dict(plan: MissionPlan, extra: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    out = {
        "format_version": FORMAT_VERSION,
        "kind": plan.kind,
        "total_time_s": plan.total_time,
        "segments": [segment_to_dict(s) for s in plan.segments],
        "per_region": [
            {
                "region_id": v.region_id,
                "radius_m": v.radius,
                "v_rad_s": v.angular_velocity,
                "traversal_time_s": v.traversal_time,
            }
            for v in plan.per_region
        ],
    }
    if extra:
        out["diagnostics"] = extra
    return out


def _get(obj, key, where):
    try:
        return obj[key]
    except (KeyError, TypeError):
        raise ParseError(f"missing field '{where}{key}'", field=where + key) from None


def segment_from_dict(d: Dict[str, Any], where: str = ""):
    kind = _get(d, "type", where)
    if kind == "arc":
        circle = Circle(tuple(_get(d, "center_m", where)), _get(d, "radius_m", where))
        arc = Arc(
            circle,
            _get(d, "start_angle_rad", where),
            _get(d, "end_angle_rad", where),
            d.get("direction", "ccw"),
            full=bool(d.get("full", False)),
        )
        region = Circle(tuple(_get(d, "region_center_m", where)), _get(d, "region_radius_m", where))
        return ArcSegment(arc, float(_get(d, "v_rad_s", where)), region, int(d.get("region_id", -1)), bool(d.get("indoor", False)))
    if kind == "line":
        line = Line(tuple(_get(d, "start_m", where)), tuple(_get(d, "end_m", where)))
        return LineSegment(line, float(_get(d, "speed_m_s", where)))
    raise ParseError(f"{where}type: unknown segment type {kind!r}", field=where + "type")


def plan_from_dict(data: Dict[str, Any]) -> MissionPlan:
    segs = tuple(segment_from_dict(s, f"segments[{k}].") for k, s in enumerate(_get(data, "segments", "")))
    visits = tuple(
        RegionVisit(int(v["region_id"]), float(v["radius_m"]), float(v["v_rad_s"]), float(v["traversal_time_s"]))
        for v in data.get("per_region", [])
    )
    return MissionPlan(segs, visits, data.get("kind", "multi"))


def save_plan(plan: MissionPlan, path: PathLike, extra: Optional[Dict[str, Any]] = None) -> None:
    Path(path).write_text(dumps_canonical(plan_to_dict(plan, extra)))


def load_plan(path: PathLike) -> MissionPlan:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}", line=exc.lineno) from exc
    return plan_from_dict(data)


def save_report(report: CoverageReport, path: PathLike) -> None:
    Path(path).write_text(dumps_canonical(report.to_dict()))
