"""Gas diffusion through a porous plate fed from point-like inlet holes.

Each inlet is treated as a point source in an isotropic medium.  Equal mass
flow crosses every spherical envelope centred on the inlet, so the envelope
speed falls off as the inverse square of its radius.  On the top surface of a
plate of thickness ``H`` the envelope radius is ``sqrt(H**2 + x**2)`` and the
normalized outflow speed is ``H**2 / (H**2 + x**2)``.

Several inlets are combined by adding their normalized single-hole speeds.
That superposition is a model extension: the underlying derivation covers a
single hole only.

All speeds are in units of ``v0`` (the speed on the envelope tangent to the
top surface) unless a ``v0`` is passed explicitly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._validation import (
    DomainError,
    check_finite,
    check_non_negative,
    check_positive,
    grid_count,
)

AMBIENT_PRESSURE = 101325.0
DEFAULT_HOLE_DIAMETER = 0.002
GRAPHITE_POROSITY = 0.17


@dataclass(frozen=True)
class PorousPlate:
    """Graphite plate with a square array of inlet holes drilled from below.

    Holes sit at ``(i * hole_spacing, j * hole_spacing)`` in plate
    coordinates, with the origin at one plan corner.  Particle sizes are in
    micrometres and are carried as material metadata only.
    """

    thickness: float
    plan_width: float
    plan_depth: float
    hole_spacing: float
    hole_diameter: float = DEFAULT_HOLE_DIAMETER
    porosity: float = GRAPHITE_POROSITY
    particle_size_min: float = 13.0
    particle_size_max: float = 15.0

    def __post_init__(self):
        check_positive("thickness", self.thickness)
        check_positive("plan_width", self.plan_width)
        check_positive("plan_depth", self.plan_depth)
        check_positive("hole_spacing", self.hole_spacing)
        check_positive("hole_diameter", self.hole_diameter)
        if self.hole_diameter >= self.hole_spacing:
            raise DomainError("hole_diameter must be smaller than hole_spacing")
        if not 0.0 < self.porosity < 1.0:
            raise DomainError(f"porosity must lie in (0, 1), got {self.porosity!r}")
        if self.particle_size_min > self.particle_size_max:
            raise DomainError("particle_size_min exceeds particle_size_max")

    @property
    def holes_per_side(self) -> tuple[int, int]:
        """Hole counts along (width, depth)."""
        return (
            grid_count(self.plan_width, self.hole_spacing),
            grid_count(self.plan_depth, self.hole_spacing),
        )

    @property
    def hole_count(self) -> int:
        nx, ny = self.holes_per_side
        return nx * ny

    @property
    def plan_area(self) -> float:
        return self.plan_width * self.plan_depth

    @property
    def hole_area(self) -> float:
        return math.pi * self.hole_diameter ** 2 / 4.0

    def hole_positions(self) -> np.ndarray:
        """``(hole_count, 2)`` array of hole centres, row-major in y then x."""
        nx, ny = self.holes_per_side
        xs = np.arange(nx) * self.hole_spacing
        ys = np.arange(ny) * self.hole_spacing
        gx, gy = np.meshgrid(xs, ys)
        return np.column_stack([gx.ravel(), gy.ravel()])

    def contains(self, x: float, y: float) -> bool:
        return 0.0 <= x <= self.plan_width and 0.0 <= y <= self.plan_depth


@dataclass(frozen=True)
class EnvelopePoint:
    r: float
    r0: float
    x: float
    v: float
    v0: float


@dataclass(frozen=True)
class InletState:
    supply_pressure: float
    ambient_pressure: float = AMBIENT_PRESSURE

    def __post_init__(self):
        check_positive("supply_pressure", self.supply_pressure)
        check_positive("ambient_pressure", self.ambient_pressure)


@dataclass(frozen=True)
class SurfaceVelocityField:
    """Normalized surface speed sampled on a regular grid.

    ``ratio[j, i]`` is the speed at ``(xs[i], ys[j])`` in multiples of v0.
    """

    xs: np.ndarray
    ys: np.ndarray
    ratio: np.ndarray
    pitch: float

    def rows(self):
        for j, y in enumerate(self.ys):
            for i, x in enumerate(self.xs):
                yield float(x), float(y), float(self.ratio[j, i])


def envelope_velocity(r: float, r0: float, v0: float) -> float:
    """Speed on the envelope of radius ``r`` given speed ``v0`` at radius ``r0``."""
    r = check_positive("r", r)
    r0 = check_positive("r0", r0)
    v0 = check_non_negative("v0", v0)
    if r < r0:
        raise DomainError(f"envelope radius r={r!r} is inside the tangent envelope r0={r0!r}")
    return v0 * r0 * r0 / (r * r)


def envelope_point(x: float, thickness: float, v0: float = 1.0) -> EnvelopePoint:
    """Envelope state at horizontal offset ``x`` on the top surface."""
    thickness = check_positive("thickness", thickness)
    r = math.hypot(thickness, x)
    return EnvelopePoint(r=r, r0=thickness, x=x, v=envelope_velocity(r, thickness, v0), v0=v0)


def surface_velocity_ratio(x: float, thickness: float) -> float:
    """``v / v0`` on the top surface at horizontal distance ``x`` from an inlet."""
    thickness = check_positive("thickness", thickness)
    x = check_finite("x", x)
    h2 = thickness * thickness
    return h2 / (h2 + x * x)


def flow_curve(thickness: float, x_max: float, step: float) -> list[tuple[float, float]]:
    """Tabulate :func:`surface_velocity_ratio` on ``[0, x_max]`` at ``step``."""
    check_positive("thickness", thickness)
    x_max = check_non_negative("x_max", x_max)
    step = check_positive("step", step)
    if x_max > 0 and step > x_max:
        raise DomainError(f"step={step!r} exceeds x_max={x_max!r}")
    n = grid_count(x_max, step)
    out = []
    for i in range(n):
        x = round(i * step, 12)
        out.append((x, surface_velocity_ratio(x, thickness)))
    return out


def summed_ratio(points: np.ndarray, holes: np.ndarray, thickness: float) -> np.ndarray:
    """Sum of ``H**2 / (H**2 + d**2)`` over ``holes`` for each of ``points``."""
    h2 = thickness * thickness
    total = np.zeros(len(points))
    # chunk over holes so large plates stay within memory
    for start in range(0, len(holes), 2048):
        block = holes[start:start + 2048]
        d2 = ((points[:, None, :] - block[None, :, :]) ** 2).sum(axis=-1)
        total += (h2 / (h2 + d2)).sum(axis=1)
    return total


def superposed_surface_speed(point: tuple[float, float], plate: PorousPlate, v0: float = 1.0) -> float:
    """Surface speed at ``point`` summed over every inlet hole of ``plate``."""
    x, y = (check_finite("x", point[0]), check_finite("y", point[1]))
    v0 = check_non_negative("v0", v0)
    if not plate.contains(x, y):
        raise DomainError(f"point ({x}, {y}) lies outside the plate plan")
    pts = np.array([[x, y]])
    return float(v0 * summed_ratio(pts, plate.hole_positions(), plate.thickness)[0])


def superposed_surface_speeds(points, plate: PorousPlate, v0: float = 1.0) -> np.ndarray:
    """Vectorized :func:`superposed_surface_speed` over an ``(n, 2)`` array."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    inside = (
        (pts[:, 0] >= 0) & (pts[:, 0] <= plate.plan_width)
        & (pts[:, 1] >= 0) & (pts[:, 1] <= plate.plan_depth)
    )
    if not inside.all():
        raise DomainError("some points lie outside the plate plan")
    return v0 * summed_ratio(pts, plate.hole_positions(), plate.thickness)


def surface_speed_field(plate: PorousPlate, pitch: float,
                        window: tuple[float, float, float, float] | None = None) -> SurfaceVelocityField:
    """Sample the superposed field on a grid of spacing ``pitch``.

    ``window`` is ``(x0, y0, x1, y1)`` in plate coordinates; the full plan is
    used when omitted.
    """
    pitch = check_positive("pitch", pitch)
    x0, y0, x1, y1 = window if window is not None else (0.0, 0.0, plate.plan_width, plate.plan_depth)
    xs = np.round(x0 + np.arange(grid_count(x1 - x0, pitch)) * pitch, 12)
    ys = np.round(y0 + np.arange(grid_count(y1 - y0, pitch)) * pitch, 12)
    gx, gy = np.meshgrid(xs, ys)
    speeds = superposed_surface_speeds(np.column_stack([gx.ravel(), gy.ravel()]), plate)
    return SurfaceVelocityField(xs=xs, ys=ys, ratio=speeds.reshape(gy.shape), pitch=pitch)


def interior_window(plate: PorousPlate) -> tuple[float, float, float, float]:
    """One hole pitch square centred on the plate centre.

    Over the whole plate the summed field sags towards the edges, and that
    sag deepens with thickness; this window isolates the local ripple
    between neighbouring holes.
    """
    cx, cy = plate.plan_width / 2, plate.plan_depth / 2
    half = min(plate.hole_spacing / 2, cx, cy)
    return (cx - half, cy - half, cx + half, cy + half)


def relative_variation(field: SurfaceVelocityField) -> float:
    """``(max - min) / max`` of a sampled field."""
    hi = float(field.ratio.max())
    return (hi - float(field.ratio.min())) / hi


def interior_ripple(plate: PorousPlate, samples: int = 24) -> float:
    """Relative variation of the superposed field over :func:`interior_window`."""
    window = interior_window(plate)
    pitch = (window[2] - window[0]) / samples
    return relative_variation(surface_speed_field(plate, pitch, window))


def mass_flux_product(pressure: float, speed: float, r: float) -> float:
    """``p * v * r**2``: proportional to pressure times volume flow through an envelope.

    The hemisphere factor ``2*pi`` is left out; only equality across
    envelopes of one steady flow matters.
    """
    p = check_positive("pressure", pressure)
    v = check_non_negative("speed", speed)
    r = check_positive("r", r)
    return p * v * r * r


def contact_force(pressure: float, area: float) -> float:
    """Force from ``pressure`` acting over ``area``."""
    return check_non_negative("pressure", pressure) * check_non_negative("area", area)


def inlet_force_reduction(plate: PorousPlate, inlet: InletState) -> tuple[float, float, float]:
    """Compare feeding the full underside with feeding through the holes only.

    Returns ``(naive_force, inlet_force, naive_force / inlet_force)``.
    """
    p = inlet.supply_pressure
    naive = contact_force(p, plate.plan_area)
    through_holes = contact_force(p, plate.hole_count * plate.hole_area)
    return naive, through_holes, naive / through_holes
