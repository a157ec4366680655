"""Declarative experiment descriptions and their JSON form.

Scenario file layout (SI units throughout)::

    {
      "name": "magnet_separation",
      "dt": 0.001, "t_end": 20.0, "output_interval": 0.01,
      "g": 9.81, "v_stop": 1e-6, "omega_stop": 1e-6,
      "platform": {"bounds": [x0, y0, x1, y1],
                   "default": {"pressurized": true, "mu": 0.2},
                   "regions": [{"rect": [x0, y0, x1, y1], "pressurized": false, "mu": 0.2}]},
      "bodies": [{"id": "a", "mass": 0.5, "inertia": 7e-4,
                  "pose": [x, y, theta], "velocity": [vx, vy, omega],
                  "footprint_radius": 0.046, "friction_torque": null}],
      "modules": [{"id": "m", "upper": "u", "lower": "l",
                   "torque": {"kind": "bang_bang", "peak": 0.01, "start": 0, "duration": 1}}],
      "links": [{"a": "a", "b": "b", "state": "attract",
                 "model": {"kind": "impulse", "impulse": 0.01}}],
      "couples": [{"body": "a", "torque": {"kind": "pulse", "torque": 0.01, "start": 0, "duration": 0.5}}],
      "events": [{"kind": "magnet_release", "time": 0.1, "link": 0}],
      "notes": ["assumed masses ..."]
    }
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import jsonschema

from .._validation import DomainError, check_non_negative, check_positive
from .model import Body2D, JointedModule, MagnetLink, PlatformRegionMap, Region, SimState
from .torque import profile_from_dict


class ScenarioError(ValueError):
    """A scenario document is malformed.  ``where`` locates the problem."""

    def __init__(self, message: str, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


_NUM = {"type": "number"}
_VEC2 = {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2}
_VEC3 = {"type": "array", "items": _NUM, "minItems": 3, "maxItems": 3}
_RECT = {"type": "array", "items": _NUM, "minItems": 4, "maxItems": 4}
_PROFILE = {
    "type": "object",
    "required": ["kind"],
    "properties": {"kind": {"enum": ["pulse", "bang_bang"]}, "torque": _NUM, "peak": _NUM,
                   "start": _NUM, "duration": {"type": "number", "minimum": 0}},
    "additionalProperties": False,
}

SCENARIO_SCHEMA = {
    "type": "object",
    "required": ["platform", "bodies"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "dt": {"type": "number", "exclusiveMinimum": 0},
        "t_end": {"type": "number", "minimum": 0},
        "output_interval": {"type": "number", "exclusiveMinimum": 0},
        "g": {"type": "number", "minimum": 0},
        "v_stop": {"type": "number", "minimum": 0},
        "omega_stop": {"type": "number", "minimum": 0},
        "notes": {"type": "array", "items": {"type": "string"}},
        "platform": {
            "type": "object",
            "required": ["bounds"],
            "additionalProperties": False,
            "properties": {
                "bounds": _RECT,
                "default": {
                    "type": "object",
                    "properties": {"pressurized": {"type": "boolean"}, "mu": {"type": "number", "minimum": 0}},
                    "additionalProperties": False,
                },
                "regions": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["rect"],
                        "properties": {"rect": _RECT, "pressurized": {"type": "boolean"},
                                       "mu": {"type": "number", "minimum": 0}},
                        "additionalProperties": False,
                    },
                },
            },
        },
        "bodies": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "mass", "inertia"],
                "properties": {
                    "id": {"type": "string"},
                    "mass": {"type": "number", "exclusiveMinimum": 0},
                    "inertia": {"type": "number", "exclusiveMinimum": 0},
                    "pose": _VEC3,
                    "velocity": _VEC3,
                    "footprint_radius": {"type": "number", "exclusiveMinimum": 0},
                    "friction_torque": {"type": ["number", "null"], "minimum": 0},
                },
                "additionalProperties": False,
            },
        },
        "modules": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "upper", "lower"],
                "properties": {"id": {"type": "string"}, "upper": {"type": "string"},
                               "lower": {"type": "string"}, "torque": {"oneOf": [_PROFILE, {"type": "null"}]}},
                "additionalProperties": False,
            },
        },
        "links": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["a", "b"],
                "properties": {
                    "a": {"type": "string"},
                    "b": {"type": "string"},
                    "state": {"enum": ["attract", "repel", "off"]},
                    "model": {
                        "type": "object",
                        "required": ["kind"],
                        "properties": {"kind": {"enum": ["impulse", "force"]},
                                       "impulse": {"type": "number", "minimum": 0},
                                       "force": {"type": "number", "minimum": 0},
                                       "cutoff": {"type": "number", "minimum": 0}},
                        "additionalProperties": False,
                    },
                },
                "additionalProperties": False,
            },
        },
        "couples": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["body", "torque"],
                "properties": {"body": {"type": "string"}, "torque": _PROFILE},
                "additionalProperties": False,
            },
        },
        "events": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["kind", "time", "link"],
                "properties": {"kind": {"const": "magnet_release"}, "time": _NUM,
                               "link": {"type": "integer", "minimum": 0}},
                "additionalProperties": False,
            },
        },
    },
}


@dataclass(frozen=True)
class Couple:
    """External torque applied to one body."""

    body: str
    profile: object


@dataclass(frozen=True)
class MagnetRelease:
    time: float
    link: int


@dataclass(frozen=True)
class Scenario:
    platform: PlatformRegionMap
    bodies: tuple[Body2D, ...]
    modules: tuple[JointedModule, ...] = ()
    links: tuple[MagnetLink, ...] = ()
    couples: tuple[Couple, ...] = ()
    events: tuple[MagnetRelease, ...] = ()
    name: str = ""
    dt: float = 1e-3
    t_end: float = 1.0
    output_interval: float = 0.01
    g: float = 9.81
    v_stop: float = 1e-6
    omega_stop: float = 1e-6
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self):
        check_positive("dt", self.dt)
        check_non_negative("t_end", self.t_end)
        check_positive("output_interval", self.output_interval)
        for name in ("bodies", "modules", "links", "couples", "events", "notes"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        ids = [b.id for b in self.bodies]
        if len(set(ids)) != len(ids):
            raise ScenarioError("duplicate body id", "bodies")
        known = set(ids)
        claimed: set[str] = set()
        for i, m in enumerate(self.modules):
            for part in (m.upper, m.lower):
                if part not in known:
                    raise ScenarioError(f"unknown body {part!r}", f"modules[{i}]")
                if part in claimed:
                    raise ScenarioError(f"body {part!r} belongs to two modules", f"modules[{i}]")
                claimed.add(part)
            if m.upper == m.lower:
                raise ScenarioError("upper and lower must differ", f"modules[{i}]")
            up, lo = self.body(m.upper), self.body(m.lower)
            if (up.x, up.y, up.vx, up.vy) != (lo.x, lo.y, lo.vx, lo.vy):
                raise ScenarioError("module halves must share position and velocity", f"modules[{i}]")
        for i, link in enumerate(self.links):
            for part in (link.a, link.b):
                if part not in known:
                    raise ScenarioError(f"unknown body {part!r}", f"links[{i}]")
        for i, c in enumerate(self.couples):
            if c.body not in known:
                raise ScenarioError(f"unknown body {c.body!r}", f"couples[{i}]")
        for i, e in enumerate(self.events):
            if not 0 <= e.link < len(self.links):
                raise ScenarioError(f"link index {e.link} out of range", f"events[{i}]")

    def body(self, body_id: str) -> Body2D:
        for b in self.bodies:
            if b.id == body_id:
                return b
        raise KeyError(body_id)

    def initial_state(self) -> SimState:
        return SimState(time=0.0, bodies=self.bodies, modules=self.modules, links=self.links)

    def mirrored(self) -> "Scenario":
        """Reflection about the y axis: ``x -> -x``, ``vx -> -vx``, angles and torques flip sign."""
        x0, y0, x1, y1 = self.platform.bounds
        platform = replace(
            self.platform,
            bounds=(-x1, y0, -x0, y1),
            regions=tuple(replace(r, x0=-r.x1, x1=-r.x0) for r in self.platform.regions),
        )
        bodies = tuple(replace(b, x=-b.x, theta=-b.theta, vx=-b.vx, omega=-b.omega) for b in self.bodies)
        modules = tuple(
            replace(m, torque=None if m.torque is None else m.torque.negated()) for m in self.modules
        )
        couples = tuple(Couple(c.body, c.profile.negated()) for c in self.couples)
        return replace(self, platform=platform, bodies=bodies, modules=modules, couples=couples,
                       name=f"{self.name}_mirrored" if self.name else "")

    def to_dict(self) -> dict:
        p = self.platform
        return {
            "name": self.name,
            "dt": self.dt,
            "t_end": self.t_end,
            "output_interval": self.output_interval,
            "g": self.g,
            "v_stop": self.v_stop,
            "omega_stop": self.omega_stop,
            "notes": list(self.notes),
            "platform": {
                "bounds": list(p.bounds),
                "default": {"pressurized": p.default_pressurized, "mu": p.default_mu},
                "regions": [
                    {"rect": [r.x0, r.y0, r.x1, r.y1], "pressurized": r.pressurized, "mu": r.mu}
                    for r in p.regions
                ],
            },
            "bodies": [
                {
                    "id": b.id, "mass": b.mass, "inertia": b.inertia,
                    "pose": [b.x, b.y, b.theta], "velocity": [b.vx, b.vy, b.omega],
                    "footprint_radius": b.footprint_radius, "friction_torque": b.friction_torque,
                }
                for b in self.bodies
            ],
            "modules": [
                {"id": m.id, "upper": m.upper, "lower": m.lower,
                 "torque": None if m.torque is None else m.torque.to_dict()}
                for m in self.modules
            ],
            "links": [
                {"a": k.a, "b": k.b, "state": k.state,
                 "model": {"kind": k.kind, "impulse": k.impulse, "force": k.force, "cutoff": k.cutoff}}
                for k in self.links
            ],
            "couples": [{"body": c.body, "torque": c.profile.to_dict()} for c in self.couples],
            "events": [{"kind": "magnet_release", "time": e.time, "link": e.link} for e in self.events],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def scenario_from_dict(data: dict) -> Scenario:
    """Validate ``data`` against :data:`SCENARIO_SCHEMA` and build a :class:`Scenario`."""
    try:
        jsonschema.validate(data, SCENARIO_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ScenarioError(exc.message, where) from None

    plat = data["platform"]
    default = plat.get("default", {})
    try:
        platform = PlatformRegionMap(
            bounds=tuple(plat["bounds"]),
            regions=tuple(
                Region(*r["rect"], pressurized=r.get("pressurized", True), mu=r.get("mu", 0.2))
                for r in plat.get("regions", [])
            ),
            default_pressurized=default.get("pressurized", True),
            default_mu=default.get("mu", 0.2),
        )
    except DomainError as exc:
        raise ScenarioError(str(exc), "platform") from None

    bodies = []
    for i, b in enumerate(data["bodies"]):
        pose = b.get("pose", [0.0, 0.0, 0.0])
        vel = b.get("velocity", [0.0, 0.0, 0.0])
        try:
            bodies.append(Body2D(
                id=b["id"], mass=b["mass"], inertia=b["inertia"],
                x=pose[0], y=pose[1], theta=pose[2], vx=vel[0], vy=vel[1], omega=vel[2],
                footprint_radius=b.get("footprint_radius", 0.046),
                friction_torque=b.get("friction_torque"),
            ))
        except DomainError as exc:
            raise ScenarioError(str(exc), f"bodies/{i}") from None

    modules = tuple(
        JointedModule(m["id"], m["upper"], m["lower"],
                      None if m.get("torque") is None else profile_from_dict(m["torque"]))
        for m in data.get("modules", [])
    )
    links = []
    for i, k in enumerate(data.get("links", [])):
        model = k.get("model", {"kind": "impulse"})
        try:
            links.append(MagnetLink(
                a=k["a"], b=k["b"], state=k.get("state", "attract"), kind=model["kind"],
                impulse=model.get("impulse", 0.01), force=model.get("force", 0.0),
                cutoff=model.get("cutoff", 0.0),
            ))
        except DomainError as exc:
            raise ScenarioError(str(exc), f"links/{i}") from None
    couples = tuple(Couple(c["body"], profile_from_dict(c["torque"])) for c in data.get("couples", []))
    events = tuple(MagnetRelease(float(e["time"]), int(e["link"])) for e in data.get("events", []))

    kwargs = {k: data[k] for k in ("name", "dt", "t_end", "output_interval", "g", "v_stop", "omega_stop")
              if k in data}
    try:
        return Scenario(platform=platform, bodies=tuple(bodies), modules=modules, links=tuple(links),
                        couples=couples, events=events, notes=tuple(data.get("notes", [])), **kwargs)
    except DomainError as exc:
        raise ScenarioError(str(exc)) from None


def load_scenario(text: str) -> Scenario:
    """Parse a scenario from JSON text.  Syntax errors report line and column."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return scenario_from_dict(data)


def read_scenario(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return load_scenario(fh.read())
