import csv
import json
import subprocess
import sys

import pytest

from isacplan.cli import main


def _run(*args):
    return main([str(a) for a in args])


def test_plan_single_and_verify(scenario_dir, tmp_path):
    plan, rep = tmp_path / "p.json", tmp_path / "r.json"
    assert _run("plan-single", "--scenario", scenario_dir / "uniform_area.json", "--out", plan) == 0
    data = json.loads(plan.read_text())
    assert data["kind"] == "single" and len(data["segments"]) == 1
    seg = data["segments"][0]
    assert {"type", "radius_m", "v_rad_s", "speed_m_s", "time_s"} <= set(seg)
    assert data["total_time_s"] == pytest.approx(seg["time_s"])
    assert _run("verify", "--scenario", scenario_dir / "uniform_area.json", "--plan", plan, "--out", rep) == 0
    assert json.loads(rep.read_text())["pass"] is True


def test_tampered_plan_exit_code(scenario_dir, tmp_path):
    plan, rep = tmp_path / "p.json", tmp_path / "r.json"
    _run("plan-single", "--scenario", scenario_dir / "uniform_area.json", "--out", plan)
    data = json.loads(plan.read_text())
    for seg in data["segments"]:
        seg["v_rad_s"] *= 1.5
    plan.write_text(json.dumps(data))
    assert _run("verify", "--scenario", scenario_dir / "uniform_area.json", "--plan", plan, "--out", rep) == 2


def test_plan_multi_topology(scenario_dir, tmp_path):
    plan = tmp_path / "m.json"
    assert _run("plan-multi", "--scenario", scenario_dir / "three_buildings.json", "--out", plan) == 0
    data = json.loads(plan.read_text())
    kinds = [s["type"] for s in data["segments"]]
    assert kinds.count("arc") == 4 and kinds.count("line") == 3
    assert kinds == ["arc", "line", "arc", "line", "arc", "line", "arc"]
    trace = data["diagnostics"]["objective_trace_s"]
    assert all(b <= a * (1 + 1e-9) for a, b in zip(trace, trace[1:]))


def test_plan_files_deterministic(scenario_dir, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    _run("plan-multi", "--scenario", scenario_dir / "three_buildings.json", "--out", a)
    _run("plan-multi", "--scenario", scenario_dir / "three_buildings.json", "--out", b)
    assert a.read_bytes() == b.read_bytes()


def test_sweep_constant_savings(scenario_dir, tmp_path):
    out = tmp_path / "s.csv"
    assert _run("sweep", "--scenario", scenario_dir / "uniform_area.json", "--rth-min", 10e6, "--rth-max", 100e6,
                "--steps", 10, "--out", out) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 10
    assert list(rows[0]) == ["r_th_bits", "v_half_rad_s", "v_opt_rad_s", "t_half_s", "t_opt_s", "savings_pct", "regime"]
    pct = [round(float(r["savings_pct"]), 6) for r in rows]
    assert len(set(pct)) == 1
    th = [float(r["r_th_bits"]) for r in rows]
    assert th == sorted(th)


def test_invalid_scenario_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert _run("plan-single", "--scenario", bad, "--out", tmp_path / "p.json") == 1
    assert _run("plan-single", "--scenario", tmp_path / "missing.json", "--out", tmp_path / "p.json") == 1


def test_invalid_sweep_range(scenario_dir, tmp_path):
    assert _run("sweep", "--scenario", scenario_dir / "uniform_area.json", "--rth-min", 5, "--rth-max", 1,
                "--steps", 3, "--out", tmp_path / "s.csv") == 1


def test_console_entry_point_and_log_env(scenario_dir, tmp_path):
    env = {"ISAC_LOG": "debug", "PATH": ""}
    proc = subprocess.run(
        [sys.executable, "-m", "isacplan.cli", "plan-single", "--scenario", str(scenario_dir / "small_area.json"),
         "--out", str(tmp_path / "p.json")],
        capture_output=True, text=True, env={**env, **_pythonpath()},
    )
    assert proc.returncode == 0, proc.stderr
    assert "single circle" in proc.stdout


def _pythonpath():
    import os

    return {k: v for k, v in os.environ.items() if k in ("PYTHONPATH", "HOME", "VIRTUAL_ENV")}
