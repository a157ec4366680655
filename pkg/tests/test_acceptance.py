"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``; the lines are also
collected into the terminal summary.
"""
import math
import subprocess
import sys

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from porousfloat.film_dynamics import (
    build_preset,
    edge_arrival_times,
    glide_stopping,
    simulate,
    total_angular_momentum,
    total_momentum,
    trajectory_csv,
)
from porousfloat.platform_design import (
    GlassPuck,
    RobotSpec,
    count_holes_under_glass,
    design_platform,
    load_capacity,
    min_max_covered_holes,
    supply_unit_layout,
)
from porousfloat.porous_flow import (
    InletState,
    PorousPlate,
    contact_force,
    envelope_velocity,
    flow_curve,
    inlet_force_reduction,
    surface_velocity_ratio,
)
from porousfloat.verify import mirror_error, mirror_probe

G = 9.81


def report(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} :: {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    assert ok, line


def test_01_flow_model_exactness():
    rng = np.random.default_rng(1)
    xs, hs = rng.uniform(-1, 1, 10_000), rng.uniform(1e-3, 0.2, 10_000)
    worst = max(abs(surface_velocity_ratio(x, h) - envelope_velocity(math.hypot(h, x), h, 1.0))
                / surface_velocity_ratio(x, h) for x, h in zip(xs, hs))
    half = surface_velocity_ratio(0.015, 0.015)
    ratios = [r for _, r in flow_curve(0.015, 0.06, 0.001)]
    shape = ratios[0] == 1.0 and all(a > b for a, b in zip(ratios, ratios[1:]))
    report(1, "flow-model exactness", half == 0.5 and worst <= 1e-12 and shape,
           f"ratio(H,H)={half}, max composition rel err={worst:.2e}, monotone with axis max={shape}")


def test_02_naive_contact_force():
    naive = contact_force(0.4e6, 1.0)
    plate = PorousPlate(thickness=0.03, plan_width=2.0, plan_depth=2.0, hole_spacing=0.01, hole_diameter=0.002)
    _, through, ratio = inlet_force_reduction(plate, InletState(0.4e6))
    # grid-count oracle: 201 holes per side, each pi (1 mm)^2
    oracle = 0.4e6 * 201 ** 2 * math.pi * 0.001 ** 2
    ok = naive == 4.0e5 and ratio > 10 and math.isclose(through, oracle, rel_tol=1e-12)
    report(2, "naive contact force", ok, f"force={naive:.1f} N, generic-preset reduction ratio={ratio:.2f}")


def test_03_load_capacity():
    cap = load_capacity(GlassPuck("circle", 0.080), 0.02e6)
    report(3, "load capacity", abs(cap - 100.0) <= 5.0 and math.isclose(cap, 100.53, abs_tol=0.01),
           f"capacity={cap:.2f} N (target 100 +/- 5 N)")


def test_04_hole_covering():
    lo, hi = min_max_covered_holes(GlassPuck("circle", 0.080), 0.030)
    flag = "matches" if hi == 7 else "DIFFERS from"
    report(4, "hole covering", lo == 4, f"sweep min={lo} (asserted), sweep max={hi} {flag} reported 7 (not asserted)")


def test_05_ubot_design(tmp_path):
    d = design_platform(RobotSpec(0.092, 1.0, workspace_width=1.0, workspace_depth=1.0), "targeted")
    proc = subprocess.run(
        [sys.executable, "-m", "porousfloat", "design", "--robot-size", "0.092", "--workspace", "1.0",
         "--output-dir", str(tmp_path)], capture_output=True, text=True)
    ok = (d.glass.size == 0.080 and d.plate.hole_spacing >= 0.030 and d.max_spacing >= 0.030
          and d.plate.thickness == 0.030 and proc.returncode == 0)
    report(5, "Ubot design reproduction", ok,
           f"glass={d.glass.size} m, spacing={d.plate.hole_spacing} m (max {d.max_spacing} m), "
           f"thickness={d.plate.thickness} m, cli exit={proc.returncode}")


def test_06_glide():
    v0, mu = 0.1, 0.2
    scenario = build_preset("film_boundary_glide", v0=v0, mu=mu)
    expected = v0 * v0 / (2 * mu * G)
    _, m = glide_stopping(scenario, dt=1e-4)
    _, m_half = glide_stopping(scenario, dt=5e-5)
    err, err_half = m["stop_distance"] - expected, m_half["stop_distance"] - expected
    ratio = err / err_half
    ok = (m["max_dv_pressurized"] <= 1e-9 and m["stopped"]
          and abs(m["stop_distance"] - expected) <= 0.01 * expected
          and abs(ratio - 2.0) <= 0.02)
    report(6, "film-boundary glide", ok,
           f"|dv| on film={m['max_dv_pressurized']:.1e}, stop={m['stop_distance']:.5e} m vs {expected:.5e} m "
           f"({abs(err) / expected:.2%}), error ratio dt->dt/2={ratio:.4f} (first order, target 2 +/- 1%)")


def test_07_self_rotation():
    scenario = build_preset("self_rotation_floating", sweep=math.pi / 2)
    max_l = [0.0]

    def watch(_, after):
        max_l[0] = max(max_l[0], abs(total_angular_momentum(after)))

    final = simulate(scenario, on_step=watch).final
    d_up, d_lo = final.body("upper").theta, final.body("lower").theta
    pinned = simulate(build_preset("self_rotation_friction", sweep=math.pi / 2)).final
    d_lo_pinned = pinned.body("lower").theta
    ok = (abs(d_up - math.pi / 4) <= 1e-6 and abs(d_lo + math.pi / 4) <= 1e-6
          and max_l[0] <= 1e-9 and abs(d_lo_pinned) <= 1e-9)
    report(7, "self-rotation", ok,
           f"upper={d_up:.9f}, lower={d_lo:.9f} (pi/4={math.pi / 4:.9f}), max|L|={max_l[0]:.1e}, "
           f"pinned lower change={d_lo_pinned:.1e}")


def test_08_external_couple():
    scenario = build_preset("external_couple")
    end = scenario.couples[0].profile.start + scenario.couples[0].profile.duration
    stats = {"steps": 0, "worst": 0.0}

    def watch(before, after):
        if before.time >= end:
            stats["steps"] += 1
            stats["worst"] = max(stats["worst"], abs(after.bodies[0].omega - before.bodies[0].omega))

    final = simulate(scenario, on_step=watch).final
    ok = stats["steps"] >= 100_000 and stats["worst"] <= 1e-12
    report(8, "external couple", ok,
           f"coasting steps={stats['steps']}, max per-step |d omega|={stats['worst']:.1e}, "
           f"omega={final.bodies[0].omega:.6f} rad/s")


def test_09_separation():
    scenario = build_preset("magnet_separation")
    max_p = [0.0]

    def watch(_, after):
        max_p[0] = max(max_p[0], math.hypot(*total_momentum(after)))

    traj = simulate(scenario, on_step=watch)
    left, right = traj.final.body("left"), traj.final.body("right")
    arrive = edge_arrival_times(traj, scenario.platform)
    gap = abs(arrive["left"] - arrive["right"])
    ok = abs(left.vx + right.vx) <= 1e-12 and gap <= traj.output_interval and max_p[0] <= 1e-9
    report(9, "magnet separation", ok,
           f"v=({left.vx}, {right.vx}) m/s, arrivals {arrive['left']:.3f}/{arrive['right']:.3f} s, "
           f"max|P|={max_p[0]:.1e}")


def test_10_determinism_and_symmetry():
    probe = mirror_probe()
    same = trajectory_csv(simulate(probe)) == trajectory_csv(simulate(probe))
    err = max(mirror_error(probe), mirror_error(build_preset("film_boundary_glide")),
              mirror_error(build_preset("magnet_separation", t_end=5.0)))
    report(10, "determinism and mirror symmetry", same and err <= 1e-12,
           f"bit-identical reruns={same}, max mirror deviation={err:.1e}")


def brute_count(center, glass, spacing):
    half = glass.size / 2
    idx = np.arange(math.floor((min(center) - half) / spacing) - 2, math.ceil((max(center) + half) / spacing) + 3)
    gx, gy = np.meshgrid(idx * spacing, idx * spacing)
    dx, dy = gx - center[0], gy - center[1]
    if glass.shape == "circle":
        return int((dx ** 2 + dy ** 2 <= half * half).sum())
    return int(((np.abs(dx) <= half) & (np.abs(dy) <= half)).sum())


def test_11_oracle_equivalence():
    rng = np.random.default_rng(11)
    mismatches = 0
    for k in range(1000):
        glass = GlassPuck("square" if k % 5 == 0 else "circle", float(rng.uniform(0.01, 0.2)))
        spacing = float(rng.uniform(0.005, 0.06))
        center = (float(rng.uniform(-0.5, 0.5)), float(rng.uniform(-0.5, 0.5)))
        mismatches += count_holes_under_glass(center, glass, spacing) != brute_count(center, glass, spacing)
    bad = 0
    for _ in range(100):
        nx, ny = (int(v) for v in rng.integers(1, 60, size=2))
        plate = PorousPlate(0.03, (nx - 1) * 0.01 + 0.004, (ny - 1) * 0.01 + 0.004, 0.01)
        bad += len(supply_unit_layout(plate)) != math.ceil(nx / 2) * math.ceil(ny / 2)
    report(11, "oracle equivalence", mismatches == 0 and bad == 0,
           f"hole-count mismatches={mismatches}/1000, unit-count mismatches={bad}/100")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
