"""Value types for planar bodies floating on the gas film."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Literal

from .._validation import DomainError, check_non_negative, check_positive


@dataclass(frozen=True)
class Body2D:
    """Planar rigid body.  Pose ``(x, y, theta)``, velocity ``(vx, vy, omega)``.

    ``friction_torque`` caps the rotational Coulomb torque the plate can
    exert on this body when it rests on an unpressurized region; when
    ``None`` it is derived from a uniformly loaded contact disc,
    ``mu * N * 2/3 * footprint_radius``.
    """

    id: str
    mass: float
    inertia: float
    x: float = 0.0
    y: float = 0.0
    theta: float = 0.0
    vx: float = 0.0
    vy: float = 0.0
    omega: float = 0.0
    footprint_radius: float = 0.046
    friction_torque: float | None = None

    def __post_init__(self):
        check_positive("mass", self.mass)
        check_positive("inertia", self.inertia)
        check_positive("footprint_radius", self.footprint_radius)
        if self.friction_torque is not None:
            check_non_negative("friction_torque", self.friction_torque)

    @property
    def pose(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.theta)

    @property
    def velocity(self) -> tuple[float, float, float]:
        return (self.vx, self.vy, self.omega)

    def is_finite(self) -> bool:
        return all(math.isfinite(v) for v in (self.x, self.y, self.theta, self.vx, self.vy, self.omega))


@dataclass(frozen=True)
class JointedModule:
    """Two co-located halves joined by a revolute joint about the vertical axis.

    The halves share one planar translation; the joint applies ``+tau`` to
    ``upper`` and ``-tau`` to ``lower``.  Only ``lower`` touches the plate.
    """

    id: str
    upper: str
    lower: str
    torque: object | None = None  # TorqueProfile

    def joint_torque(self, t: float) -> float:
        return 0.0 if self.torque is None else self.torque(t)


@dataclass(frozen=True)
class Region:
    x0: float
    y0: float
    x1: float
    y1: float
    pressurized: bool = True
    mu: float = 0.2

    def __post_init__(self):
        check_non_negative("mu", self.mu)
        if not (self.x1 > self.x0 and self.y1 > self.y0):
            raise DomainError(f"degenerate region {self!r}")

    def contains(self, x: float, y: float) -> bool:
        return self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1


@dataclass(frozen=True)
class PlatformRegionMap:
    """Pressurized and unpressurized patches of the plate.

    The first region containing a point decides its attributes; points in
    no region take the defaults.
    """

    bounds: tuple[float, float, float, float]
    regions: tuple[Region, ...] = ()
    default_pressurized: bool = True
    default_mu: float = 0.2

    def __post_init__(self):
        x0, y0, x1, y1 = self.bounds
        if not (x1 > x0 and y1 > y0):
            raise DomainError(f"degenerate platform bounds {self.bounds!r}")
        check_non_negative("default_mu", self.default_mu)
        object.__setattr__(self, "bounds", tuple(float(b) for b in self.bounds))
        object.__setattr__(self, "regions", tuple(self.regions))

    def in_bounds(self, x: float, y: float) -> bool:
        x0, y0, x1, y1 = self.bounds
        return x0 <= x <= x1 and y0 <= y <= y1

    def lookup(self, x: float, y: float) -> tuple[bool, float]:
        for region in self.regions:
            if region.contains(x, y):
                return region.pressurized, region.mu
        return self.default_pressurized, self.default_mu


@dataclass(frozen=True)
class MagnetLink:
    """Switchable permanent-magnet coupling between two bodies.

    ``kind='impulse'`` delivers ``impulse`` (kg m/s) to each body along the
    line of centres at release.  ``kind='force'`` pushes them apart with a
    constant ``force`` (N) while their centres are closer than ``cutoff``.
    While attracting, the bodies are latched and no force is modeled.
    """

    a: str
    b: str
    state: Literal["attract", "repel", "off"] = "attract"
    kind: Literal["impulse", "force"] = "impulse"
    impulse: float = 0.01
    force: float = 0.0
    cutoff: float = 0.0

    def __post_init__(self):
        if self.state not in ("attract", "repel", "off"):
            raise DomainError(f"unknown magnet state {self.state!r}")
        if self.kind not in ("impulse", "force"):
            raise DomainError(f"unknown magnet model {self.kind!r}")
        if self.a == self.b:
            raise DomainError("a magnet link needs two distinct bodies")
        check_non_negative("impulse", self.impulse)
        check_non_negative("force", self.force)
        check_non_negative("cutoff", self.cutoff)


@dataclass(frozen=True)
class SimState:
    time: float
    bodies: tuple[Body2D, ...]
    modules: tuple[JointedModule, ...] = ()
    links: tuple[MagnetLink, ...] = ()
    step_index: int = 0

    def body(self, body_id: str) -> Body2D:
        for b in self.bodies:
            if b.id == body_id:
                return b
        raise KeyError(body_id)

    def with_bodies(self, bodies, **changes) -> "SimState":
        return replace(self, bodies=tuple(bodies), **changes)


@dataclass(frozen=True)
class Diagnostics:
    time: float
    px: float
    py: float
    angular_momentum: float
    kinetic_energy: float


@dataclass(frozen=True)
class Trajectory:
    """Time-sampled simulation output.

    ``edge_crossings`` maps body id to the step-resolution time its centre
    first left the platform bounds.
    """

    samples: tuple[SimState, ...]
    dt: float
    output_interval: float
    name: str = ""
    edge_crossings: dict = field(default_factory=dict)

    @property
    def times(self) -> list[float]:
        return [s.time for s in self.samples]

    @property
    def final(self) -> SimState:
        return self.samples[-1]

    def series(self, body_id: str, attr: str) -> list[float]:
        return [getattr(s.body(body_id), attr) for s in self.samples]
