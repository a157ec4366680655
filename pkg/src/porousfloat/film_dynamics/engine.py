"""Semi-implicit Euler integration of bodies on a partly pressurized plate.

Each step accumulates forces and torques at the step midpoint time, updates
velocities, then advances positions with the new velocities.  Internal
interactions (joint torques, magnet forces and impulses) are applied as
exactly opposite pairs, so they leave total linear and angular momentum
unchanged up to rounding.

Bodies that belong to a :class:`JointedModule` move as one translational
group: the group's mass is the sum of both halves, its contact with the
plate is through the lower half, and both halves receive the same
``(x, y, vx, vy)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

from .._validation import DomainError, SimulationError, check_positive
from .model import Body2D, Diagnostics, MagnetLink, PlatformRegionMap, SimState, Trajectory
from .scenario import Couple, Scenario

G = 9.81
V_STOP = 1e-6
OMEGA_STOP = 1e-6
CONTACT_DISC_ARM = 2.0 / 3.0


@dataclass(frozen=True)
class StepParams:
    g: float = G
    v_stop: float = V_STOP
    omega_stop: float = OMEGA_STOP


def region_friction(region_map: PlatformRegionMap, body: Body2D) -> tuple[bool, float]:
    """``(frictionless, mu)`` for the region under the body centre."""
    pressurized, mu = region_map.lookup(body.x, body.y)
    return (True, 0.0) if pressurized else (False, mu)


def _groups(state: SimState) -> list[tuple[str, tuple[str, ...]]]:
    """``(contact_body, members)`` for every translational group."""
    grouped = set()
    out = []
    for m in state.modules:
        out.append((m.lower, (m.lower, m.upper)))
        grouped.update((m.lower, m.upper))
    for b in state.bodies:
        if b.id not in grouped:
            out.append((b.id, (b.id,)))
    return out


def _group_of(state: SimState, body_id: str) -> tuple[str, ...]:
    for m in state.modules:
        if body_id in (m.upper, m.lower):
            return (m.lower, m.upper)
    return (body_id,)


def _coulomb(velocity: float, applied: float, capacity: float, inertia: float, stop: float, dt: float) -> float:
    """One-dimensional Coulomb update used for rotation."""
    if abs(velocity) > stop:
        new = velocity + (applied - math.copysign(capacity, velocity)) / inertia * dt
        if new * velocity <= 0 and abs(applied) <= capacity:
            return 0.0
        return new
    if abs(applied) <= capacity:
        return 0.0
    return velocity + (applied - math.copysign(capacity, applied)) / inertia * dt


def step(state: SimState, region_map: PlatformRegionMap, dt: float,
         params: StepParams = StepParams(), couples: tuple[Couple, ...] = ()) -> SimState:
    """Advance ``state`` by ``dt``."""
    check_positive("dt", dt)
    t_mid = state.time + 0.5 * dt
    bodies = {b.id: b for b in state.bodies}
    fx = dict.fromkeys(bodies, 0.0)
    fy = dict.fromkeys(bodies, 0.0)
    tau = dict.fromkeys(bodies, 0.0)

    for c in couples:
        tau[c.body] += c.profile(t_mid)
    for m in state.modules:
        t_joint = m.joint_torque(t_mid)
        tau[m.upper] += t_joint
        tau[m.lower] -= t_joint
    for link in state.links:
        if link.state != "repel" or link.kind != "force" or link.force == 0.0:
            continue
        a, b = bodies[link.a], bodies[link.b]
        dx, dy = b.x - a.x, b.y - a.y
        dist = math.hypot(dx, dy)
        if 0.0 < dist < link.cutoff:
            ux, uy = dx / dist, dy / dist
            fx[link.b] += link.force * ux
            fy[link.b] += link.force * uy
            fx[link.a] -= link.force * ux
            fy[link.a] -= link.force * uy

    new = {}
    for contact_id, members in _groups(state):
        contact = bodies[contact_id]
        mass = sum(bodies[i].mass for i in members)
        gx = sum(fx[i] for i in members)
        gy = sum(fy[i] for i in members)
        vx, vy = contact.vx, contact.vy
        frictionless, mu = region_friction(region_map, contact)

        if frictionless:
            nvx, nvy = vx + gx / mass * dt, vy + gy / mass * dt
        else:
            capacity = mu * mass * params.g
            speed = math.hypot(vx, vy)
            applied = math.hypot(gx, gy)
            if speed > params.v_stop:
                decel = mu * params.g / speed
                nvx = vx + (gx / mass - decel * vx) * dt
                nvy = vy + (gy / mass - decel * vy) * dt
                if nvx * vx + nvy * vy <= 0 and applied <= capacity:
                    nvx = nvy = 0.0
            elif applied <= capacity:
                nvx = nvy = 0.0
            else:
                scale = (applied - capacity) / applied / mass * dt
                nvx, nvy = vx + gx * scale, vy + gy * scale
        nx, ny = contact.x + nvx * dt, contact.y + nvy * dt

        for i in members:
            b = bodies[i]
            if i == contact_id and not frictionless:
                limit = b.friction_torque
                if limit is None:
                    limit = mu * mass * params.g * CONTACT_DISC_ARM * b.footprint_radius
                omega = _coulomb(b.omega, tau[i], limit, b.inertia, params.omega_stop, dt)
            else:
                omega = b.omega + tau[i] / b.inertia * dt
            nb = replace(b, x=nx, y=ny, vx=nvx, vy=nvy, omega=omega, theta=b.theta + omega * dt)
            if not nb.is_finite():
                raise SimulationError(f"non-finite state for body {i!r}", body_id=i, time=state.time + dt)
            new[i] = nb

    return replace(
        state,
        time=state.time + dt,
        step_index=state.step_index + 1,
        bodies=tuple(new[b.id] for b in state.bodies),
    )


def apply_magnet_release(state: SimState, link) -> SimState:
    """Switch a link from attraction to repulsion.

    ``link`` is an index into ``state.links`` or the link itself.  The
    impulse model kicks both groups apart along the line of centres; the
    force model only flips the state and lets :func:`step` apply the force.
    """
    index = link if isinstance(link, int) else state.links.index(link)
    current: MagnetLink = state.links[index]
    if current.state != "attract":
        return state
    links = list(state.links)
    links[index] = replace(current, state="repel")
    out = replace(state, links=tuple(links))
    if current.kind != "impulse":
        return out

    a, b = state.body(current.a), state.body(current.b)
    dx, dy = b.x - a.x, b.y - a.y
    dist = math.hypot(dx, dy)
    if dist == 0.0:
        raise DomainError(f"bodies {a.id!r} and {b.id!r} are coincident; release direction undefined")
    ux, uy = dx / dist, dy / dist
    group_a, group_b = _group_of(state, a.id), _group_of(state, b.id)
    if set(group_a) & set(group_b):
        raise DomainError("a magnet link cannot join two halves of one module")
    mass_a = sum(state.body(i).mass for i in group_a)
    mass_b = sum(state.body(i).mass for i in group_b)
    kick = {}
    for i in group_a:
        kick[i] = (-current.impulse * ux / mass_a, -current.impulse * uy / mass_a)
    for i in group_b:
        kick[i] = (current.impulse * ux / mass_b, current.impulse * uy / mass_b)
    bodies = tuple(
        replace(bd, vx=bd.vx + kick[bd.id][0], vy=bd.vy + kick[bd.id][1]) if bd.id in kick else bd
        for bd in state.bodies
    )
    return replace(out, bodies=bodies)


def total_momentum(state: SimState) -> tuple[float, float]:
    return (
        math.fsum(b.mass * b.vx for b in state.bodies),
        math.fsum(b.mass * b.vy for b in state.bodies),
    )


def total_angular_momentum(state: SimState, origin: tuple[float, float] = (0.0, 0.0)) -> float:
    """Orbital plus spin angular momentum about a fixed ``origin``."""
    ox, oy = origin
    return math.fsum(
        b.mass * ((b.x - ox) * b.vy - (b.y - oy) * b.vx) + b.inertia * b.omega for b in state.bodies
    )


def kinetic_energy(state: SimState) -> float:
    return math.fsum(
        0.5 * b.mass * (b.vx * b.vx + b.vy * b.vy) + 0.5 * b.inertia * b.omega * b.omega
        for b in state.bodies
    )


def diagnostics(state: SimState, origin: tuple[float, float] = (0.0, 0.0)) -> Diagnostics:
    px, py = total_momentum(state)
    return Diagnostics(state.time, px, py, total_angular_momentum(state, origin), kinetic_energy(state))


def simulate(scenario: Scenario, dt: float | None = None, t_end: float | None = None,
             on_step: Callable[[SimState, SimState], None] | None = None) -> Trajectory:
    """Run ``scenario`` and sample it every ``output_interval``.

    ``dt`` and ``t_end`` override the scenario's values.  ``on_step`` is
    called with ``(before, after)`` for every step, after any events due at
    that step have been applied to ``before``.
    """
    dt = scenario.dt if dt is None else check_positive("dt", dt)
    t_end = scenario.t_end if t_end is None else float(t_end)
    if t_end < 0:
        raise DomainError("t_end must be >= 0")
    n_steps = int(math.floor(t_end / dt + 1e-9))
    every = max(1, int(round(scenario.output_interval / dt)))
    params = StepParams(scenario.g, scenario.v_stop, scenario.omega_stop)
    pending = sorted(scenario.events, key=lambda e: (e.time, e.link))
    region_map = scenario.platform

    state = scenario.initial_state()
    crossings: dict[str, float] = {}

    def note_edges(s: SimState):
        for b in s.bodies:
            if b.id not in crossings and not region_map.in_bounds(b.x, b.y):
                crossings[b.id] = s.time

    note_edges(state)
    samples = [state]
    for n in range(n_steps):
        while pending and pending[0].time <= state.time + 0.5 * dt:
            state = apply_magnet_release(state, pending.pop(0).link)
        try:
            nxt = step(state, region_map, dt, params, scenario.couples)
        except SimulationError as exc:
            raise SimulationError(f"{exc} at t={state.time + dt:.6g} s", exc.body_id, state.time + dt) from None
        if on_step is not None:
            on_step(state, nxt)
        state = nxt
        note_edges(state)
        if (n + 1) % every == 0 or n + 1 == n_steps:
            samples.append(state)
    return Trajectory(samples=tuple(samples), dt=dt, output_interval=every * dt,
                      name=scenario.name, edge_crossings=crossings)


def edge_arrival_times(traj: Trajectory, region_map: PlatformRegionMap) -> dict[str, float | None]:
    """First time each body centre leaves the platform bounds.

    The crossing is interpolated linearly between the two bracketing
    samples.  A body that starts outside reports 0; one that never leaves
    reports ``None``.
    """
    x0, y0, x1, y1 = region_map.bounds
    out: dict[str, float | None] = {}
    for body in traj.samples[0].bodies:
        bid = body.id
        prev = None
        arrival = None
        for s in traj.samples:
            b = s.body(bid)
            if not region_map.in_bounds(b.x, b.y):
                if prev is None:
                    arrival = 0.0
                else:
                    pb, pt = prev
                    frac = 1.0
                    for p_c, c, lo, hi in ((pb.x, b.x, x0, x1), (pb.y, b.y, y0, y1)):
                        if c > hi:
                            frac = min(frac, (hi - p_c) / (c - p_c))
                        elif c < lo:
                            frac = min(frac, (lo - p_c) / (c - p_c))
                    arrival = pt + frac * (s.time - pt)
                break
            prev = (b, s.time)
        out[bid] = arrival
    return out
