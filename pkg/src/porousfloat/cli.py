"""Command-line front end.

Exit codes: 0 success, 1 failed check / infeasible design / numeric blow-up,
2 bad input.  Files go to ``--output-dir`` (default ``$POROUSFLOAT_OUTPUT_DIR``
or the working directory); a path of ``-`` means standard output.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from pathlib import Path

from . import __version__
from ._validation import DesignInfeasibleError, DomainError, SimulationError
from .film_dynamics import (
    PRESETS,
    ScenarioError,
    build_preset,
    diagnostics,
    diagnostics_csv,
    read_scenario,
    run_preset,
    simulate,
    trajectory_csv,
)
from .platform_design import (
    FILM_PRESSURE,
    MIN_THICKNESS,
    PREFERRED_SPACING,
    SUPPLY_PRESSURE,
    RobotSpec,
    design_platform,
)
from .porous_flow import PorousPlate, flow_curve, interior_ripple, surface_speed_field
from .verify import CHECKS, run_verify

OUTPUT_DIR_ENV = "POROUSFLOAT_OUTPUT_DIR"


class UsageError(Exception):
    pass


def _f(v: float) -> str:
    return repr(float(v))


def _emit(text: str, path: str | None, default_name: str, outdir: str) -> str:
    if path == "-":
        sys.stdout.write(text)
        return "<stdout>"
    target = Path(path) if path else Path(outdir) / default_name
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return str(target)


def _positive(name: str, value: float | None) -> None:
    if value is not None and not (math.isfinite(value) and value > 0):
        raise UsageError(f"{name} must be a positive number, got {value}")


def cmd_design(args) -> int:
    if args.preset == "generic" and args.robot_size is None:
        args.robot_size = 0.092
    if args.robot_size is None:
        raise UsageError("--robot-size is required unless --preset generic")
    for name in ("robot_size", "module_mass", "spacing", "thickness", "film_pressure", "supply_pressure"):
        _positive("--" + name.replace("_", "-"), getattr(args, name))
    if len(args.workspace) > 2 or any(not (w > 0) for w in args.workspace):
        raise UsageError("--workspace takes one or two positive lengths")
    if args.module_count < 1:
        raise UsageError("--module-count must be >= 1")
    width = args.workspace[0]
    depth = args.workspace[-1]
    robot = RobotSpec(args.robot_size, args.module_mass, args.module_count, width, depth)
    try:
        design = design_platform(
            robot, args.preset,
            preferred_spacing=args.spacing or PREFERRED_SPACING,
            min_thickness=args.thickness or MIN_THICKNESS,
            film_pressure=args.film_pressure or FILM_PRESSURE,
            supply_pressure=args.supply_pressure or SUPPLY_PRESSURE,
        )
    except DesignInfeasibleError as exc:
        print(f"design infeasible: {exc}", file=sys.stderr)
        return 1
    doc = json.dumps(design.to_dict(include_units=args.units), indent=2) + "\n"
    where = _emit(doc, args.out, "design.json", args.output_dir)
    if args.out != "-":
        print(design.to_table())
        print(f"design JSON: {where}")
    return 0


_HOLES = re.compile(r"^(\d+(?:\.\d+)?)mm-grid$")


def cmd_flow(args) -> int:
    _positive("--thickness", args.thickness)
    _positive("--step", args.step)
    if not (args.max_x >= 0):
        raise UsageError("--max-x must be >= 0")
    if args.max_x > 0 and args.step > args.max_x:
        raise UsageError("--step exceeds --max-x")
    curve = flow_curve(args.thickness, args.max_x, args.step)
    text = "x_m,v_ratio\n" + "".join(f"{_f(x)},{_f(r)}\n" for x, r in curve)
    where = _emit(text, args.out, "flow.csv", args.output_dir)
    if args.out != "-":
        print(f"flow curve: {len(curve)} rows -> {where}")

    if args.holes:
        m = _HOLES.match(args.holes)
        if not m:
            raise UsageError(f"--holes expects '<pitch>mm-grid', got {args.holes!r}")
        spacing = float(m.group(1)) / 1000.0
        _positive("--extent", args.extent)
        plate = PorousPlate(args.thickness, args.extent, args.extent, spacing,
                            hole_diameter=min(0.002, spacing / 2))
        pitch = args.pitch or spacing / 10
        field = surface_speed_field(plate, pitch)
        text = "x_m,y_m,v_ratio\n" + "".join(f"{_f(x)},{_f(y)},{_f(v)}\n" for x, y, v in field.rows())
        where = _emit(text, args.field_out, "flow_field.csv", args.output_dir)
        ripple = interior_ripple(plate)
        if args.out != "-" and args.field_out != "-":
            print(f"field: {len(field.xs)} x {len(field.ys)} samples -> {where}")
            print(f"interior ripple (max-min)/max: {ripple:.6g}")
    return 0


def _conservation_summary(traj) -> str:
    first, last = diagnostics(traj.samples[0]), diagnostics(traj.final)
    worst_p = max(math.hypot(d.px - first.px, d.py - first.py)
                  for d in (diagnostics(s) for s in traj.samples))
    worst_l = max(abs(diagnostics(s).angular_momentum - first.angular_momentum) for s in traj.samples)
    return "\n".join([
        f"samples: {len(traj.samples)}  t_end: {traj.final.time:.6g} s",
        f"P_total initial: ({first.px:.6g}, {first.py:.6g})  final: ({last.px:.6g}, {last.py:.6g})",
        f"|P_total| final: {math.hypot(last.px, last.py):.3g}  max |P - P0|: {worst_p:.3g}",
        f"L initial: {first.angular_momentum:.6g}  final: {last.angular_momentum:.6g}  max |L - L0|: {worst_l:.3g}",
        f"kinetic energy final: {last.kinetic_energy:.6g} J",
    ])


def cmd_sim(args) -> int:
    _positive("--dt", args.dt)
    if args.t_end is not None and not (args.t_end >= 0):
        raise UsageError("--t-end must be >= 0")
    report = None
    if args.preset:
        if args.preset not in PRESETS:
            raise UsageError(f"unknown preset {args.preset!r}; choose from {', '.join(PRESETS)}")
        scenario = build_preset(args.preset)
        traj, report = run_preset(args.preset, args.dt, args.t_end)
    else:
        try:
            scenario = read_scenario(args.scenario)
        except OSError as exc:
            raise UsageError(f"cannot read scenario: {exc}") from None
        traj = simulate(scenario, args.dt, args.t_end)
    if args.save_scenario:
        _emit(scenario.to_json(), args.save_scenario, "scenario.json", args.output_dir)
    t_path = _emit(trajectory_csv(traj), args.trajectory, "trajectory.csv", args.output_dir)
    d_path = _emit(diagnostics_csv(traj), args.diagnostics, "diagnostics.csv", args.output_dir)
    print(f"scenario: {scenario.name or '<unnamed>'}")
    for note in scenario.notes:
        print(f"note: {note}")
    print(_conservation_summary(traj))
    print(f"trajectory: {t_path}\ndiagnostics: {d_path}")
    if report is not None:
        for c in report.checks:
            print(f"[{c.status}] {c.name}: measured {c.measured}, expected {c.expected} ({c.tolerance})")
        return 0 if report.passed else 1
    return 0


def cmd_verify(args) -> int:
    only = [s for part in (args.only or []) for s in part.split(",") if s]
    report = run_verify(only or None)
    if only and not report.checks:
        raise UsageError(f"--only matched no checks; known keys: {', '.join(CHECKS)}")
    print(report.to_table())
    if args.json:
        _emit(report.to_json(), args.json, "verify.json", args.output_dir)
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output-dir", default=os.environ.get(OUTPUT_DIR_ENV, "."),
                        help=f"directory for output files (env {OUTPUT_DIR_ENV})")

    parser = argparse.ArgumentParser(prog="porousfloat", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", parents=[common], help="size a platform for a robot")
    p.add_argument("--robot-size", type=float, help="robot footprint side (m)")
    p.add_argument("--workspace", type=float, nargs="+", default=[1.0], help="workspace width [depth] (m)")
    p.add_argument("--module-mass", type=float, default=1.0, help="mass per module (kg)")
    p.add_argument("--module-count", type=int, default=1)
    p.add_argument("--preset", choices=("targeted", "generic"), default="targeted")
    p.add_argument("--spacing", type=float, help="preferred hole spacing cap (m)")
    p.add_argument("--thickness", type=float, help="minimum plate thickness (m)")
    p.add_argument("--film-pressure", type=float, help="film pressure for capacity (Pa)")
    p.add_argument("--supply-pressure", type=float, help="supply pressure (Pa)")
    p.add_argument("--units", action="store_true", help="list every supply unit in the JSON")
    p.add_argument("--out", help="design JSON path (default <output-dir>/design.json)")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("flow", parents=[common], help="export surface outflow profiles")
    p.add_argument("--thickness", type=float, required=True, help="plate thickness H (m)")
    p.add_argument("--max-x", type=float, default=0.06, help="largest horizontal offset (m)")
    p.add_argument("--step", type=float, default=0.001, help="offset step (m)")
    p.add_argument("--out", help="curve CSV path (default <output-dir>/flow.csv)")
    p.add_argument("--holes", help="hole array for the superposed field, e.g. 30mm-grid")
    p.add_argument("--extent", type=float, default=0.3, help="square plate side for the field (m)")
    p.add_argument("--pitch", type=float, help="field sample pitch (m), default spacing/10")
    p.add_argument("--field-out", help="field CSV path (default <output-dir>/flow_field.csv)")
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("sim", parents=[common], help="simulate a preset or scenario file")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", help=f"one of: {', '.join(PRESETS)}")
    src.add_argument("--scenario", help="scenario JSON file")
    p.add_argument("--dt", type=float)
    p.add_argument("--t-end", type=float)
    p.add_argument("--trajectory", help="trajectory CSV path")
    p.add_argument("--diagnostics", help="diagnostics CSV path")
    p.add_argument("--save-scenario", help="write the scenario JSON that was run")
    p.set_defaults(func=cmd_sim)

    p = sub.add_parser("verify", parents=[common], help="run the verification checks")
    p.add_argument("--only", action="append", help=f"group or key ({', '.join(CHECKS)}, conservation, friction)")
    p.add_argument("--json", help="write a machine-readable report")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, DomainError, ScenarioError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SimulationError as exc:
        print(f"simulation failed: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
