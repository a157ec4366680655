"""Time-dependent torque profiles for joints and external couples.

Profiles are evaluated at step midpoints by the integrator, so a switch
time that coincides with a step boundary never depends on rounding.
"""
from __future__ import annotations

from dataclasses import dataclass

from .._validation import DomainError, check_non_negative


@dataclass(frozen=True)
class Pulse:
    """Constant ``torque`` on ``[start, start + duration)``, zero elsewhere."""

    torque: float
    start: float = 0.0
    duration: float = 0.0

    def __post_init__(self):
        check_non_negative("duration", self.duration)

    def __call__(self, t: float) -> float:
        return self.torque if self.start <= t < self.start + self.duration else 0.0

    def negated(self) -> "Pulse":
        return Pulse(-self.torque, self.start, self.duration)

    def to_dict(self) -> dict:
        return {"kind": "pulse", "torque": self.torque, "start": self.start, "duration": self.duration}


@dataclass(frozen=True)
class BangBang:
    """``+peak`` for the first half of the window and ``-peak`` for the second.

    Starting from rest this rotates the driven inertia by
    ``peak / inertia * (duration / 2) ** 2`` and leaves it at rest.  With
    the switch on a step boundary the semi-implicit Euler update reproduces
    that angle exactly.
    """

    peak: float
    start: float = 0.0
    duration: float = 1.0

    def __post_init__(self):
        check_non_negative("duration", self.duration)

    def __call__(self, t: float) -> float:
        u = t - self.start
        if u < 0 or u >= self.duration:
            return 0.0
        return self.peak if u < self.duration / 2 else -self.peak

    def negated(self) -> "BangBang":
        return BangBang(-self.peak, self.start, self.duration)

    def to_dict(self) -> dict:
        return {"kind": "bang_bang", "peak": self.peak, "start": self.start, "duration": self.duration}


def profile_from_dict(data: dict):
    kind = data.get("kind")
    if kind == "pulse":
        return Pulse(float(data["torque"]), float(data.get("start", 0.0)), float(data.get("duration", 0.0)))
    if kind == "bang_bang":
        return BangBang(float(data["peak"]), float(data.get("start", 0.0)), float(data.get("duration", 1.0)))
    raise DomainError(f"unknown torque profile kind {kind!r}")
