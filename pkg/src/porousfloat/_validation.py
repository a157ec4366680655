"""Shared exception types and argument checks."""
from __future__ import annotations

import math


class DomainError(ValueError):
    """An argument lies outside the domain where a model is defined."""


class DesignInfeasibleError(ValueError):
    """A sized platform violates one of its design constraints."""

    def __init__(self, constraint: str, message: str):
        super().__init__(f"{constraint}: {message}")
        self.constraint = constraint


class SimulationError(RuntimeError):
    """The integrator produced a non-finite state."""

    def __init__(self, message: str, body_id: str | None = None, time: float | None = None):
        super().__init__(message)
        self.body_id = body_id
        self.time = time


def check_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


def check_positive(name: str, value: float) -> float:
    value = check_finite(name, value)
    if value <= 0:
        raise DomainError(f"{name} must be > 0, got {value!r}")
    return value


def check_non_negative(name: str, value: float) -> float:
    value = check_finite(name, value)
    if value < 0:
        raise DomainError(f"{name} must be >= 0, got {value!r}")
    return value


def grid_count(extent: float, pitch: float) -> int:
    """Number of grid points ``0, pitch, 2*pitch, ...`` that fit in ``[0, extent]``."""
    # 1e-9 absorbs representation error such as 0.3 / 0.03 -> 9.999999999999998
    return int(math.floor(extent / pitch + 1e-9)) + 1
