"""Command-line entry point: ``isacplan {plan-single,plan-multi,verify,sweep}``.

Exit codes: 0 success, 1 invalid input, 2 coverage verification failed.
The log level comes from the ``ISAC_LOG`` environment variable.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from typing import List, Optional

import numpy as np

from .coverage import verify
from .exceptions import IsacError, ResolutionTooCoarse, ValidationError
from .multi_region import plan_multi, single_mission
from .scenario import Scenario, load_scenario
from .serialization import load_plan, save_plan, save_report
from .single_circle import plan_single, savings_profile

log = logging.getLogger("isacplan")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_VERIFY = 2

SWEEP_COLUMNS = ["r_th_bits", "v_half_rad_s", "v_opt_rad_s", "t_half_s", "t_opt_s", "savings_pct", "regime"]


def _configure_logging() -> None:
    level = os.environ.get("ISAC_LOG", "WARNING").upper()
    if not isinstance(logging.getLevelName(level), int):
        level = "WARNING"
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def _single_indoor(sc: Scenario) -> bool:
    # a single circle must also serve building interiors when there are any
    return sc.has_buildings


def cmd_plan_single(args) -> int:
    sc = load_scenario(args.scenario)
    link = sc.effective_link
    plan = plan_single(sc.scanning_area, sc.r_th, link, sc.vlim, sc.solver, indoor=_single_indoor(sc))
    mission = single_mission(plan)
    extra = {
        "r_u_m": plan.r_u,
        "balanced": plan.balanced,
        "clamped": plan.clamped,
        "data_at_worst_bits": plan.data_at_worst,
        "worst_corner_m": [plan.worst_corner.x, plan.worst_corner.y],
    }
    save_plan(mission, args.out, extra)
    print(f"single circle: r_u={plan.r_u:.6g} m  v={plan.angular_velocity:.6g} rad/s  T={plan.completion_time:.6g} s")
    return EXIT_OK


def cmd_plan_multi(args) -> int:
    sc = load_scenario(args.scenario)
    res = plan_multi(sc.scanning_area, sc.buildings, sc.r_th, sc.effective_link, sc.vlim, sc.solver)
    extra = {
        "order": list(res.order),
        "objective_trace_s": list(res.state.trace),
        "connector_sum_m": res.state.connector_sum,
        "sweeps": res.state.sweeps,
    }
    save_plan(res.mission, args.out, extra)
    print(f"multi-region: {len(res.regions)} regions  order={list(res.order)}  T={res.total_time:.6g} s")
    return EXIT_OK


def cmd_verify(args) -> int:
    sc = load_scenario(args.scenario)
    plan = load_plan(args.plan)
    try:
        report = verify(plan, sc.scanning_area, sc.effective_link, sc.r_th, sc.buildings, sc.solver)
    except ResolutionTooCoarse as exc:
        log.error("%s", exc)
        return EXIT_VERIFY
    save_report(report, args.out)
    status = "PASS" if report.passed else "FAIL"
    print(
        f"verify {status}: min delivered {report.min_delivered:.6g} bits "
        f"({report.margin:.4f} x threshold), {len(report.violations)} violations"
    )
    return EXIT_OK if report.passed else EXIT_VERIFY


def sweep_rows(sc: Scenario, r_th_grid) -> List[dict]:
    rows = savings_profile(sc.scanning_area, r_th_grid, sc.effective_link, sc.vlim, sc.solver, indoor=_single_indoor(sc))
    return [
        {
            "r_th_bits": r.r_th,
            "v_half_rad_s": r.v_half,
            "v_opt_rad_s": r.v_opt,
            "t_half_s": r.t_half,
            "t_opt_s": r.t_opt,
            "savings_pct": r.savings_pct,
            "regime": r.regime,
        }
        for r in rows
    ]


def cmd_sweep(args) -> int:
    sc = load_scenario(args.scenario)
    if not (0 < args.rth_min < args.rth_max) or args.steps < 2:
        raise ValidationError("need 0 < --rth-min < --rth-max and --steps >= 2")
    grid = np.linspace(args.rth_min, args.rth_max, args.steps)
    rows = sweep_rows(sc, grid)
    with open(args.out, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    print(f"sweep: {len(rows)} rows written to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="isacplan", description="Coverage trajectory planner for ISAC UAV missions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan-single", help="one circular trajectory over the whole area")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plan_single)

    p = sub.add_parser("plan-multi", help="area sweep followed by a tour of building circles")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plan_multi)

    p = sub.add_parser("verify", help="simulate a plan and check delivered data on a ground grid")
    p.add_argument("--scenario", required=True)
    p.add_argument("--plan", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="half-radius vs balanced-radius completion times over thresholds")
    p.add_argument("--scenario", required=True)
    p.add_argument("--rth-min", type=float, required=True, help="bits")
    p.add_argument("--rth-max", type=float, required=True, help="bits")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    _configure_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (IsacError, ValueError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
