"""Planar rigid-body motion on a gas film with friction patches, joints and magnets."""
from .engine import (
    StepParams,
    apply_magnet_release,
    diagnostics,
    edge_arrival_times,
    kinetic_energy,
    region_friction,
    simulate,
    step,
    total_angular_momentum,
    total_momentum,
)
from .io import diagnostics_csv, trajectory_csv
from .model import (
    Body2D,
    Diagnostics,
    JointedModule,
    MagnetLink,
    PlatformRegionMap,
    Region,
    SimState,
    Trajectory,
)
from .presets import PRESETS, PresetReport, build_preset, glide_stopping, run_preset
from .scenario import (
    Couple,
    MagnetRelease,
    Scenario,
    ScenarioError,
    load_scenario,
    read_scenario,
    scenario_from_dict,
)
from .torque import BangBang, Pulse

__all__ = [
    "BangBang", "Body2D", "Couple", "Diagnostics", "JointedModule", "MagnetLink", "MagnetRelease",
    "PRESETS", "PlatformRegionMap", "PresetReport", "Pulse", "Region", "Scenario", "ScenarioError",
    "SimState", "StepParams", "Trajectory", "apply_magnet_release", "build_preset", "diagnostics",
    "diagnostics_csv", "edge_arrival_times", "kinetic_energy", "load_scenario", "read_scenario",
    "glide_stopping", "region_friction", "run_preset", "scenario_from_dict", "simulate", "step", "total_angular_momentum",
    "total_momentum", "trajectory_csv",
]
