"""Sizing a porous-plate platform for a given robot.

The procedure runs from the payload outward: glass puck from the robot
footprint, hole pitch from the glass so that every glass position covers at
least four inlet holes, plate plan from the workspace, then the supply-unit
manifold and the load check.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Literal

import numpy as np

from ._validation import (
    DesignInfeasibleError,
    DomainError,
    check_non_negative,
    check_positive,
)
from .porous_flow import DEFAULT_HOLE_DIAMETER, PorousPlate

G = 9.81
FILM_PRESSURE = 0.02e6
SUPPLY_PRESSURE = 0.4e6
GLASS_FACTOR = 0.87
MIN_COVERED_HOLES = 4
SWEEP_RESOLUTION = 200

GENERIC_PLAN_SIDE = 2.0
GENERIC_THICKNESS = 0.030
GENERIC_SPACING = 0.010
PREFERRED_SPACING = 0.030
MIN_THICKNESS = 0.030

Shape = Literal["circle", "square"]


@dataclass(frozen=True)
class RobotSpec:
    footprint_side: float
    module_mass: float
    module_count: int = 1
    workspace_width: float = 1.0
    workspace_depth: float = 1.0

    def __post_init__(self):
        check_positive("footprint_side", self.footprint_side)
        check_positive("module_mass", self.module_mass)
        check_positive("workspace_width", self.workspace_width)
        check_positive("workspace_depth", self.workspace_depth)
        if int(self.module_count) != self.module_count or self.module_count < 1:
            raise DomainError(f"module_count must be a positive integer, got {self.module_count!r}")

    @property
    def total_mass(self) -> float:
        return self.module_mass * self.module_count


@dataclass(frozen=True)
class GlassPuck:
    """Smooth glass carrier.  ``size`` is the diameter (circle) or side (square)."""

    shape: Shape = "circle"
    size: float = 0.080
    mass: float = 0.0
    surface_note: str = "low roughness and high flatness"

    def __post_init__(self):
        if self.shape not in ("circle", "square"):
            raise DomainError(f"unknown glass shape {self.shape!r}")
        # size 0 is allowed as a degenerate puck with no contact area
        check_non_negative("size", self.size)
        check_non_negative("mass", self.mass)

    @property
    def contact_area(self) -> float:
        if self.shape == "circle":
            return math.pi * self.size ** 2 / 4.0
        return self.size ** 2


@dataclass(frozen=True)
class SupplyUnit:
    grid_position: tuple[int, int]
    holes_served: tuple[int, ...]
    hose_links: tuple[int, ...]
    is_source_unit: bool = False


@dataclass(frozen=True)
class PlatformDesign:
    mode: str
    plate: PorousPlate
    glass: GlassPuck
    supply_units: tuple[SupplyUnit, ...]
    supply_pressure: float
    film_pressure: float
    estimated_capacity: float
    payload_weight: float
    covered_holes: tuple[int, int]
    max_spacing: float
    notes: tuple[str, ...] = field(default=())

    @property
    def metal_plate_dims(self) -> tuple[float, float]:
        return (self.plate.plan_width, self.plate.plan_depth)

    @property
    def unit_grid(self) -> tuple[int, int]:
        nx, ny = self.plate.holes_per_side
        return (math.ceil(ny / 2), math.ceil(nx / 2))

    def to_dict(self, include_units: bool = False) -> dict:
        """JSON-ready document.  Lengths in m, pressures in Pa, forces in N."""
        nx, ny = self.plate.holes_per_side
        source = next(u for u in self.supply_units if u.is_source_unit)
        units = {
            "count": len(self.supply_units),
            "grid_rows": self.unit_grid[0],
            "grid_cols": self.unit_grid[1],
            "holes_per_unit": 4,
            "routing": "serpentine",
            "source_unit": list(source.grid_position),
        }
        if include_units:
            units["units"] = [
                {
                    "grid_position": list(u.grid_position),
                    "holes_served": list(u.holes_served),
                    "hose_links": list(u.hose_links),
                    "is_source_unit": u.is_source_unit,
                }
                for u in self.supply_units
            ]
        return {
            "mode": self.mode,
            "plate": {**asdict(self.plate), "holes_x": nx, "holes_y": ny, "hole_count": nx * ny},
            "glass": asdict(self.glass),
            "metal_plate": {"plan_width": self.metal_plate_dims[0], "plan_depth": self.metal_plate_dims[1]},
            "supply_units": units,
            "supply_pressure": self.supply_pressure,
            "film_pressure": self.film_pressure,
            "estimated_capacity": self.estimated_capacity,
            "payload_weight": self.payload_weight,
            "covered_holes": {"min": self.covered_holes[0], "max": self.covered_holes[1]},
            "max_hole_spacing": self.max_spacing,
            "notes": list(self.notes),
        }

    def to_table(self) -> str:
        nx, ny = self.plate.holes_per_side
        rows = [
            ("mode", self.mode),
            ("plate plan", f"{self.plate.plan_width * 1e3:.0f} mm x {self.plate.plan_depth * 1e3:.0f} mm"),
            ("plate thickness", f"{self.plate.thickness * 1e3:.1f} mm"),
            ("hole spacing", f"{self.plate.hole_spacing * 1e3:.1f} mm (max feasible {self.max_spacing * 1e3:.0f} mm)"),
            ("hole diameter", f"{self.plate.hole_diameter * 1e3:.1f} mm"),
            ("holes", f"{nx} x {ny} = {nx * ny}"),
            ("glass", f"{self.glass.shape} {self.glass.size * 1e3:.0f} mm"),
            ("covered holes", f"{self.covered_holes[0]} to {self.covered_holes[1]}"),
            ("supply units", f"{len(self.supply_units)} ({self.unit_grid[0]} x {self.unit_grid[1]})"),
            ("supply pressure", f"{self.supply_pressure / 1e6:.2f} MPa"),
            ("film pressure", f"{self.film_pressure / 1e6:.3f} MPa"),
            ("capacity", f"{self.estimated_capacity:.2f} N"),
            ("payload weight", f"{self.payload_weight:.2f} N"),
            ("metal plate", f"{self.metal_plate_dims[0] * 1e3:.0f} mm x {self.metal_plate_dims[1] * 1e3:.0f} mm"),
        ]
        width = max(len(k) for k, _ in rows)
        lines = [f"{k.ljust(width)}  {v}" for k, v in rows]
        lines += [f"note: {n}" for n in self.notes]
        return "\n".join(lines)


def size_glass(robot: RobotSpec, factor: float = GLASS_FACTOR,
               shape: Shape = "circle", mass: float = 0.0) -> GlassPuck:
    """Glass diameter ``factor * footprint`` rounded to the nearest millimetre."""
    check_positive("factor", factor)
    size = round(factor * robot.footprint_side * 1000.0) / 1000.0
    return GlassPuck(shape=shape, size=size, mass=mass)


def _axis_range(c: float, half: float, spacing: float, inside) -> tuple[int, int]:
    """Inclusive index range ``lo..hi`` of grid lines satisfying ``inside``.

    Float ceil/floor may be off by one at the boundary, so both ends are
    nudged until they agree with the exact predicate.
    """
    lo = math.ceil((c - half) / spacing)
    hi = math.floor((c + half) / spacing)
    while inside(lo - 1):
        lo -= 1
    while lo <= hi and not inside(lo):
        lo += 1
    while inside(hi + 1):
        hi += 1
    while hi >= lo and not inside(hi):
        hi -= 1
    return lo, hi


def count_holes_under_glass(center: tuple[float, float], glass: GlassPuck, spacing: float) -> int:
    """Number of points of the infinite square grid of pitch ``spacing`` under the glass.

    A hole on the glass outline counts as covered.
    """
    spacing = check_positive("spacing", spacing)
    cx, cy = float(center[0]), float(center[1])
    half = glass.size / 2.0

    if glass.shape == "square":
        lo_x, hi_x = _axis_range(cx, half, spacing, lambda i: abs(i * spacing - cx) <= half)
        lo_y, hi_y = _axis_range(cy, half, spacing, lambda j: abs(j * spacing - cy) <= half)
        return max(0, hi_x - lo_x + 1) * max(0, hi_y - lo_y + 1)

    r2 = half * half
    total = 0
    for i in range(math.floor((cx - half) / spacing) - 1, math.ceil((cx + half) / spacing) + 2):
        dx2 = (i * spacing - cx) ** 2
        if dx2 > r2:
            continue
        reach = math.sqrt(r2 - dx2)
        lo, hi = _axis_range(
            cy, reach, spacing,
            lambda j, i=i: (i * spacing - cx) ** 2 + (j * spacing - cy) ** 2 <= r2,
        )
        total += max(0, hi - lo + 1)
    return total


def covered_hole_counts(centers, glass: GlassPuck, spacing: float) -> np.ndarray:
    """Vectorized covered-hole count for an ``(n, 2)`` array of glass centres."""
    spacing = check_positive("spacing", spacing)
    c = np.asarray(centers, dtype=float).reshape(-1, 2)
    half = glass.size / 2.0
    out = np.empty(len(c), dtype=np.int64)
    for start in range(0, len(c), 8192):
        block = c[start:start + 8192]
        # grid indices around each centre, wide enough to contain the glass
        reach = math.ceil(half / spacing) + 1
        offsets = np.arange(-reach, reach + 1)
        base = np.floor(block / spacing).astype(np.int64)
        ix = base[:, 0:1] + offsets[None, :]
        iy = base[:, 1:2] + offsets[None, :]
        dx = ix * spacing - block[:, 0:1]
        dy = iy * spacing - block[:, 1:2]
        if glass.shape == "square":
            nx = (np.abs(dx) <= half).sum(axis=1)
            ny = (np.abs(dy) <= half).sum(axis=1)
            out[start:start + len(block)] = nx * ny
        else:
            inside = dx[:, :, None] ** 2 + dy[:, None, :] ** 2 <= half * half
            out[start:start + len(block)] = inside.sum(axis=(1, 2))
    return out


def sweep_centers(spacing: float, resolution: int = SWEEP_RESOLUTION) -> np.ndarray:
    """Glass centres on a ``resolution x resolution`` lattice over one grid cell."""
    k = np.arange(resolution) * (spacing / resolution)
    gx, gy = np.meshgrid(k, k)
    return np.column_stack([gx.ravel(), gy.ravel()])


def min_max_covered_holes(glass: GlassPuck, spacing: float,
                          resolution: int = SWEEP_RESOLUTION) -> tuple[int, int]:
    """Fewest and most holes under the glass over every position in one grid cell."""
    if resolution < 1:
        raise DomainError("resolution must be >= 1")
    counts = covered_hole_counts(sweep_centers(spacing, resolution), glass, spacing)
    return int(counts.min()), int(counts.max())


def max_hole_spacing(glass: GlassPuck, step: float = 0.001,
                     min_holes: int = MIN_COVERED_HOLES,
                     resolution: int = SWEEP_RESOLUTION) -> float:
    """Largest spacing on a ``step`` grid keeping at least ``min_holes`` under the glass.

    Candidates are scanned from the glass size downward; the first one whose
    sweep minimum meets the floor is returned.
    """
    check_positive("glass size", glass.size)
    step = check_positive("step", step)
    k = math.floor(glass.size / step + 1e-9)
    while k >= 1:
        spacing = round(k * step, 12)
        if min_max_covered_holes(glass, spacing, resolution)[0] >= min_holes:
            return spacing
        k -= 1
    raise DesignInfeasibleError("hole_coverage", f"no spacing >= {step} m covers {min_holes} holes")


def load_capacity(glass: GlassPuck, film_pressure: float = FILM_PRESSURE) -> float:
    """Supported load: film pressure times glass contact area."""
    return check_positive("film_pressure", film_pressure) * glass.contact_area


def supply_unit_layout(plate: PorousPlate) -> list[SupplyUnit]:
    """Cover the hole grid with 2x2 manifold units joined by a serpentine hose.

    Units are listed row-major.  Hole ``(i, j)`` (column, row) has flat index
    ``j * nx + i``.  The unit at grid position (0, 0) is the source unit.
    """
    nx, ny = plate.holes_per_side
    if nx * ny == 0:
        raise DomainError("plate has no holes")
    rows, cols = math.ceil(ny / 2), math.ceil(nx / 2)

    def index(r: int, c: int) -> int:
        return r * cols + c

    path = []
    for r in range(rows):
        cs = range(cols) if r % 2 == 0 else range(cols - 1, -1, -1)
        path.extend(index(r, c) for c in cs)
    links: dict[int, list[int]] = {i: [] for i in path}
    for a, b in zip(path, path[1:]):
        links[a].append(b)
        links[b].append(a)

    units = []
    for r in range(rows):
        for c in range(cols):
            holes = tuple(
                j * nx + i
                for j in (2 * r, 2 * r + 1) if j < ny
                for i in (2 * c, 2 * c + 1) if i < nx
            )
            units.append(SupplyUnit(
                grid_position=(r, c),
                holes_served=holes,
                hose_links=tuple(sorted(links[index(r, c)])),
                is_source_unit=(r == 0 and c == 0),
            ))
    return units


def design_platform(
    robot: RobotSpec,
    mode: Literal["generic", "targeted"] = "targeted",
    *,
    glass_factor: float = GLASS_FACTOR,
    glass_shape: Shape = "circle",
    glass_mass: float = 0.0,
    preferred_spacing: float = PREFERRED_SPACING,
    min_thickness: float = MIN_THICKNESS,
    hole_diameter: float = DEFAULT_HOLE_DIAMETER,
    film_pressure: float = FILM_PRESSURE,
    supply_pressure: float = SUPPLY_PRESSURE,
    g: float = G,
) -> PlatformDesign:
    """Size a complete platform for ``robot``.

    ``generic`` returns the fixed 2 m / 30 mm / 10 mm plate.  ``targeted``
    derives the pitch from the glass (the feasible maximum, capped at
    ``preferred_spacing``), takes the plan from the workspace and sets the
    thickness to ``max(min_thickness, spacing)``.

    Raises :class:`DesignInfeasibleError` when the glass cannot carry the
    robot or fewer than four holes sit under it somewhere.
    """
    glass = size_glass(robot, glass_factor, glass_shape, glass_mass)
    if glass.size <= 0:
        raise DesignInfeasibleError("glass_size", "robot footprint rounds to a zero-size glass")
    s_max = max_hole_spacing(glass)
    notes = []
    if mode == "generic":
        plate = PorousPlate(
            thickness=GENERIC_THICKNESS,
            plan_width=GENERIC_PLAN_SIDE,
            plan_depth=GENERIC_PLAN_SIDE,
            hole_spacing=GENERIC_SPACING,
            hole_diameter=hole_diameter,
        )
    elif mode == "targeted":
        spacing = min(preferred_spacing, s_max)
        if spacing <= hole_diameter:
            raise DesignInfeasibleError(
                "hole_spacing", f"spacing {spacing} m leaves no room for {hole_diameter} m holes")
        thickness = max(min_thickness, spacing)
        notes.append("thickness = max(minimum thickness, spacing) is a heuristic")
        plate = PorousPlate(
            thickness=thickness,
            plan_width=robot.workspace_width,
            plan_depth=robot.workspace_depth,
            hole_spacing=spacing,
            hole_diameter=hole_diameter,
        )
    else:
        raise DomainError(f"unknown design mode {mode!r}")

    covered = min_max_covered_holes(glass, plate.hole_spacing)
    if covered[0] < MIN_COVERED_HOLES:
        raise DesignInfeasibleError(
            "hole_coverage",
            f"only {covered[0]} holes under a {glass.size * 1e3:.0f} mm glass at "
            f"{plate.hole_spacing * 1e3:.0f} mm spacing (need {MIN_COVERED_HOLES})",
        )
    capacity = load_capacity(glass, film_pressure)
    weight = g * (robot.total_mass + glass.mass)
    if capacity < weight:
        raise DesignInfeasibleError(
            "load_capacity", f"capacity {capacity:.2f} N is below payload weight {weight:.2f} N")

    return PlatformDesign(
        mode=mode,
        plate=plate,
        glass=glass,
        supply_units=tuple(supply_unit_layout(plate)),
        supply_pressure=supply_pressure,
        film_pressure=film_pressure,
        estimated_capacity=capacity,
        payload_weight=weight,
        covered_holes=covered,
        max_spacing=s_max,
        notes=tuple(notes),
    )
