"""Ready-made scenarios for the floating-robot experiments.

Robot masses and inertias are assumptions: only the 92 mm cube size of the
robot is known.  Each half of a module is taken as a 0.5 kg uniform cube.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .._validation import DomainError
from ..report import Check, at_most, within
from .engine import edge_arrival_times, region_friction, simulate, total_angular_momentum, total_momentum
from .model import Body2D, JointedModule, MagnetLink, PlatformRegionMap, Region, SimState, Trajectory
from .scenario import Couple, MagnetRelease, Scenario
from .torque import BangBang, Pulse

UBOT_SIDE = 0.092
UBOT_MASS = 1.0
HALF_MASS = UBOT_MASS / 2
HALF_INERTIA = HALF_MASS * 2 * UBOT_SIDE ** 2 / 12
UBOT_RADIUS = UBOT_SIDE / 2
ASSUMPTION = "robot mass 1.0 kg (0.5 kg per half) and uniform-cube inertia are assumed values"


@dataclass
class PresetReport:
    name: str
    values: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _module_scenario(name: str, region_map: PlatformRegionMap, torque, dt: float, t_end: float) -> Scenario:
    upper = Body2D("upper", HALF_MASS, HALF_INERTIA, footprint_radius=UBOT_RADIUS)
    lower = Body2D("lower", HALF_MASS, HALF_INERTIA, footprint_radius=UBOT_RADIUS)
    return Scenario(
        platform=region_map,
        bodies=(upper, lower),
        modules=(JointedModule("ubot", "upper", "lower", torque),),
        name=name, dt=dt, t_end=t_end, output_interval=0.01, notes=(ASSUMPTION,),
    )


def self_rotation_floating(sweep: float = math.pi / 2, duration: float = 1.0,
                           dt: float = 1e-3, t_end: float = 2.0) -> Scenario:
    """Joint sweep of ``sweep`` rad on a fully pressurized plate."""
    peak = sweep / ((duration / 2) ** 2 * (1 / HALF_INERTIA + 1 / HALF_INERTIA))
    region_map = PlatformRegionMap(bounds=(-0.5, -0.5, 0.5, 0.5))
    return _module_scenario("self_rotation_floating", region_map, BangBang(peak, 0.0, duration), dt, t_end)


def self_rotation_friction(sweep: float = math.pi / 2, duration: float = 1.0, mu: float = 0.2,
                           dt: float = 1e-3, t_end: float = 2.0) -> Scenario:
    """Same joint sweep with the module resting on an unpressurized plate.

    The commanded torque is sized for a pinned lower half, so the joint
    still sweeps the full angle.
    """
    peak = sweep / ((duration / 2) ** 2 / HALF_INERTIA)
    region_map = PlatformRegionMap(bounds=(-0.5, -0.5, 0.5, 0.5), default_pressurized=False, default_mu=mu)
    return _module_scenario("self_rotation_friction", region_map, BangBang(peak, 0.0, duration), dt, t_end)


def external_couple(torque: float = 0.01, duration: float = 0.5, coast_steps: int = 100_000,
                    dt: float = 1e-3) -> Scenario:
    """Whole robot spun up by an external couple, then left to coast."""
    body = Body2D("ubot", UBOT_MASS, 2 * HALF_INERTIA, footprint_radius=UBOT_RADIUS)
    return Scenario(
        platform=PlatformRegionMap(bounds=(-0.5, -0.5, 0.5, 0.5)),
        bodies=(body,),
        couples=(Couple("ubot", Pulse(torque, 0.0, duration)),),
        name="external_couple", dt=dt, t_end=duration + (coast_steps + 1) * dt, output_interval=0.1,
        notes=(ASSUMPTION,),
    )


def magnet_separation(mass: float = HALF_MASS, impulse: float = 0.01, release: float = 0.1,
                      half_width: float = 0.3, dt: float = 1e-3, t_end: float = 20.0,
                      kind: str = "impulse", force: float = 0.5, cutoff: float = 0.1) -> Scenario:
    """Two robots latched together by magnets, pushed apart at ``release``."""
    inertia = mass * 2 * UBOT_SIDE ** 2 / 12
    a = Body2D("left", mass, inertia, x=-UBOT_RADIUS, footprint_radius=UBOT_RADIUS)
    b = Body2D("right", mass, inertia, x=UBOT_RADIUS, footprint_radius=UBOT_RADIUS)
    link = MagnetLink("left", "right", "attract", kind=kind, impulse=impulse, force=force, cutoff=cutoff)
    return Scenario(
        platform=PlatformRegionMap(bounds=(-half_width, -half_width, half_width, half_width)),
        bodies=(a, b),
        links=(link,),
        events=(MagnetRelease(release, 0),),
        name="magnet_separation", dt=dt, t_end=t_end, output_interval=0.01, notes=(ASSUMPTION,),
    )


def film_boundary_glide(v0: float = 0.1, mu: float = 0.2, start: float = 0.05, boundary: float = 0.1,
                        mass: float = 0.2, dt: float = 1e-4, t_end: float = 1.0) -> Scenario:
    """Glass puck gliding off the fed plate onto an unfed one."""
    region_map = PlatformRegionMap(
        bounds=(0.0, -0.1, 0.4, 0.1),
        regions=(Region(boundary, -0.1, 0.4, 0.1, pressurized=False, mu=mu),),
    )
    puck = Body2D("glass", mass, mass * 0.04 ** 2 / 2, x=start, vx=v0, footprint_radius=0.04)
    return Scenario(platform=region_map, bodies=(puck,), name="film_boundary_glide",
                    dt=dt, t_end=t_end, output_interval=0.001,
                    notes=("puck mass is arbitrary: Coulomb deceleration mu*g does not depend on it",))


BUILDERS = {
    "self_rotation_floating": self_rotation_floating,
    "self_rotation_friction": self_rotation_friction,
    "external_couple": external_couple,
    "magnet_separation": magnet_separation,
    "film_boundary_glide": film_boundary_glide,
}
PRESETS = tuple(BUILDERS)


def build_preset(name: str, **params) -> Scenario:
    if name not in BUILDERS:
        raise DomainError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    return BUILDERS[name](**params)


def _rotation_report(name: str, scenario: Scenario, dt, t_end, pinned: bool):
    max_l = 0.0

    def watch(before: SimState, after: SimState):
        nonlocal max_l
        max_l = max(max_l, abs(total_angular_momentum(after)))

    traj = simulate(scenario, dt, t_end, on_step=watch)
    first, last = traj.samples[0], traj.final
    d_up = last.body("upper").theta - first.body("upper").theta
    d_lo = last.body("lower").theta - first.body("lower").theta
    torque = scenario.modules[0].torque
    i_up, i_lo = scenario.body("upper").inertia, scenario.body("lower").inertia
    sweep = torque.peak * (torque.duration / 2) ** 2 * (1 / i_up + (0.0 if pinned else 1 / i_lo))
    report = PresetReport(name, {
        "joint_sweep_commanded": sweep,
        "upper_rotation": d_up,
        "lower_rotation": d_lo,
        "joint_sweep_measured": d_up - d_lo,
        "mean_orientation_change": (d_up + d_lo) / 2,
        "max_abs_angular_momentum": max_l,
    })
    src = "derived"
    if pinned:
        report.checks += [
            at_most("lower half pinned |dtheta_lower|", 1e-9, abs(d_lo), provenance=src, group="friction"),
            within("upper half sweeps full angle", sweep, d_up, 1e-6, provenance=src, group="friction"),
        ]
    else:
        report.checks += [
            within("upper half rotates +sweep/2", sweep / 2, d_up, 1e-6, provenance=src, group="conservation"),
            within("lower half rotates -sweep/2", -sweep / 2, d_lo, 1e-6, provenance=src, group="conservation"),
            at_most("|L| throughout joint sweep", 1e-9, max_l, provenance=src, group="conservation"),
        ]
    return traj, report


def _couple_report(scenario: Scenario, dt, t_end):
    couple = scenario.couples[0].profile
    end = couple.start + couple.duration
    worst = 0.0
    coast = 0

    def watch(before: SimState, after: SimState):
        nonlocal worst, coast
        if before.time >= end:
            coast += 1
            worst = max(worst, abs(after.bodies[0].omega - before.bodies[0].omega))

    traj = simulate(scenario, dt, t_end, on_step=watch)
    inertia = scenario.bodies[0].inertia
    expected = couple.torque * couple.duration / inertia
    omega = traj.final.bodies[0].omega
    report = PresetReport("external_couple", {
        "omega_expected": expected, "omega_final": omega,
        "coast_steps": coast, "max_step_domega": worst,
    })
    src = "derived"
    report.checks += [
        within("spin rate tau*T/I after couple", expected, omega, 1e-9, relative=True,
               provenance=src, group="conservation"),
        at_most("per-step |d omega| while coasting", 1e-12, worst, provenance=src, group="conservation"),
        Check("coasting steps >= 1e5", ">= 100000", coast, ">= 100000", coast >= 100_000, src, "conservation"),
    ]
    return traj, report


def _separation_report(scenario: Scenario, dt, t_end):
    max_p = 0.0

    def watch(before: SimState, after: SimState):
        nonlocal max_p
        max_p = max(max_p, math.hypot(*total_momentum(after)))

    traj = simulate(scenario, dt, t_end, on_step=watch)
    link = scenario.links[0]
    left, right = traj.final.body("left"), traj.final.body("right")
    arrivals = edge_arrival_times(traj, scenario.platform)
    report = PresetReport("magnet_separation", {
        "v_left": left.vx, "v_right": right.vx, "edge_arrival": arrivals, "max_abs_momentum": max_p,
    })
    src = "derived"
    report.checks += [
        at_most("speeds equal and opposite |v_l + v_r|", 1e-12, abs(left.vx + right.vx),
                provenance=src, group="conservation"),
        at_most("|P_total| over run", 1e-9, max_p, provenance=src, group="conservation"),
    ]
    if link.kind == "impulse":
        report.checks.append(within("separation speed J/m", link.impulse / left.mass, right.vx, 1e-12,
                                    provenance=src, group="conservation"))
    t_l, t_r = arrivals["left"], arrivals["right"]
    if t_l is None or t_r is None:
        report.checks.append(Check("edge arrival simultaneous", "both arrive", arrivals, "", False, src,
                                   "conservation", "run ended before a body reached the edge"))
    else:
        report.checks.append(at_most("edge arrival time difference", traj.output_interval, abs(t_l - t_r),
                                     provenance=src, group="conservation"))
    return traj, report


def glide_stopping(scenario: Scenario, dt: float | None = None, t_end: float | None = None):
    """Run a glide scenario and measure its friction-region behavior.

    The stopping distance is measured from the centre position at the start
    of the first step taken under friction.
    """
    body_id = scenario.bodies[0].id
    v0 = math.hypot(scenario.bodies[0].vx, scenario.bodies[0].vy)
    state = {"dv": 0.0, "entry": None, "entry_time": None}

    def watch(before: SimState, after: SimState):
        b = before.body(body_id)
        frictionless, _ = region_friction(scenario.platform, b)
        if frictionless:
            a = after.body(body_id)
            state["dv"] = max(state["dv"], abs(math.hypot(a.vx, a.vy) - v0))
        elif state["entry"] is None:
            state["entry"] = (b.x, b.y)
            state["entry_time"] = before.time

    traj = simulate(scenario, dt, t_end, on_step=watch)
    final = traj.final.body(body_id)
    stopped = final.vx == 0.0 and final.vy == 0.0
    distance = None
    if state["entry"] is not None:
        distance = math.hypot(final.x - state["entry"][0], final.y - state["entry"][1])
    return traj, {
        "max_dv_pressurized": state["dv"], "entry": state["entry"], "entry_time": state["entry_time"],
        "stopped": stopped, "stop_distance": distance, "final_x": final.x,
    }


def _glide_report(scenario: Scenario, dt, t_end):
    dt = scenario.dt if dt is None else dt
    traj, m = glide_stopping(scenario, dt, t_end)
    _, m_half = glide_stopping(scenario, dt / 2, t_end)
    region = scenario.platform.regions[0]
    v0 = scenario.bodies[0].vx
    expected = v0 * v0 / (2 * region.mu * scenario.g)
    report = PresetReport("film_boundary_glide", {**m, "expected_stop_distance": expected,
                                                  "stop_distance_half_dt": m_half["stop_distance"]})
    src = "derived"
    report.checks.append(at_most("speed constant on film |dv|", 1e-9, m["max_dv_pressurized"],
                                 provenance=src, group="friction"))
    if m["stop_distance"] is None or not (m["stopped"] and m_half["stopped"]):
        report.checks.append(Check("puck stops in friction region", "stopped", m["stopped"], "", False,
                                   src, "friction"))
        return traj, report
    err = m["stop_distance"] - expected
    err_half = m_half["stop_distance"] - expected
    ratio = err / err_half if err_half != 0 else math.inf
    report.values["error_ratio"] = ratio
    report.checks += [
        within("stopping distance v0^2/(2 mu g)", expected, m["stop_distance"], 0.01, relative=True,
               provenance=src, group="friction"),
        within("error ratio dt -> dt/2 (first order)", 2.0, ratio, 0.01, relative=True,
               provenance=src, group="friction"),
    ]
    return traj, report


def run_preset(name: str, dt: float | None = None, t_end: float | None = None,
               **params) -> tuple[Trajectory, PresetReport]:
    """Build, run and check one preset.  ``dt``/``t_end`` override the preset defaults."""
    scenario = build_preset(name, **params)
    if name == "self_rotation_floating":
        return _rotation_report(name, scenario, dt, t_end, pinned=False)
    if name == "self_rotation_friction":
        return _rotation_report(name, scenario, dt, t_end, pinned=True)
    if name == "external_couple":
        return _couple_report(scenario, dt, t_end)
    if name == "magnet_separation":
        return _separation_report(scenario, dt, t_end)
    return _glide_report(scenario, dt, t_end)
