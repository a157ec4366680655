"""CSV renderings of trajectories.  '.' decimals, '\\n' line ends, shortest round-trip floats."""
from __future__ import annotations

from .engine import diagnostics
from .model import Trajectory

TRAJECTORY_HEADER = "t,body_id,x,y,theta,vx,vy,omega"
DIAGNOSTICS_HEADER = "t,px,py,L,ke"


def _f(v: float) -> str:
    return repr(float(v))


def trajectory_csv(traj: Trajectory) -> str:
    lines = [TRAJECTORY_HEADER]
    for s in traj.samples:
        t = _f(s.time)
        for b in s.bodies:
            lines.append(",".join([t, b.id, _f(b.x), _f(b.y), _f(b.theta), _f(b.vx), _f(b.vy), _f(b.omega)]))
    return "\n".join(lines) + "\n"


def diagnostics_csv(traj: Trajectory, origin: tuple[float, float] = (0.0, 0.0)) -> str:
    lines = [DIAGNOSTICS_HEADER]
    for s in traj.samples:
        d = diagnostics(s, origin)
        lines.append(",".join(_f(v) for v in (d.time, d.px, d.py, d.angular_momentum, d.kinetic_energy)))
    return "\n".join(lines) + "\n"
