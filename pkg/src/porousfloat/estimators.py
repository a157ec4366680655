"""scikit-learn style wrappers so the models drop into pipelines and grid searches.

>>> from porousfloat.estimators import SurfaceFlowTransformer
>>> flow = SurfaceFlowTransformer(thickness=0.015).fit([[0.0, 0.0]])
>>> flow.transform([[0.015, 0.0]]).ravel().tolist()
[0.5]
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .film_dynamics import Scenario, diagnostics, simulate
from .platform_design import (
    FILM_PRESSURE,
    GLASS_FACTOR,
    MIN_THICKNESS,
    PREFERRED_SPACING,
    SUPPLY_PRESSURE,
    RobotSpec,
    covered_hole_counts,
    design_platform,
)
from .porous_flow import DEFAULT_HOLE_DIAMETER, PorousPlate, summed_ratio


def _check_points(X) -> np.ndarray:
    X = check_array(X, dtype=np.float64)
    if X.shape[1] != 2:
        raise ValueError(f"expected (n, 2) coordinates, got shape {X.shape}")
    return X


class SurfaceFlowTransformer(TransformerMixin, BaseEstimator):
    """Map surface points to the superposed outflow speed of a set of inlets.

    ``fit`` takes the inlet hole coordinates ``(n_holes, 2)``; ``transform``
    takes query points ``(n, 2)`` and returns speeds ``(n, 1)`` in units of
    ``v0``.
    """

    def __init__(self, thickness: float = 0.030, v0: float = 1.0):
        self.thickness = thickness
        self.v0 = v0

    def fit(self, X, y=None):
        if self.thickness <= 0:
            raise ValueError("thickness must be > 0")
        self.holes_ = _check_points(X)
        self.n_features_in_ = 2
        return self

    def transform(self, X):
        check_is_fitted(self, "holes_")
        X = _check_points(X)
        return (self.v0 * summed_ratio(X, self.holes_, self.thickness))[:, None]

    @classmethod
    def from_plate(cls, plate: PorousPlate, v0: float = 1.0) -> "SurfaceFlowTransformer":
        return cls(thickness=plate.thickness, v0=v0).fit(plate.hole_positions())


class PlatformDesigner(BaseEstimator):
    """Fit a platform design to a robot, then predict covered-hole counts.

    ``fit`` accepts a :class:`RobotSpec`; the sized design is stored in
    ``design_``.  ``predict`` maps glass centres ``(n, 2)`` to the number of
    inlet holes under the glass at each position.
    """

    def __init__(self, mode: str = "targeted", glass_factor: float = GLASS_FACTOR,
                 preferred_spacing: float = PREFERRED_SPACING, min_thickness: float = MIN_THICKNESS,
                 hole_diameter: float = DEFAULT_HOLE_DIAMETER, film_pressure: float = FILM_PRESSURE,
                 supply_pressure: float = SUPPLY_PRESSURE):
        self.mode = mode
        self.glass_factor = glass_factor
        self.preferred_spacing = preferred_spacing
        self.min_thickness = min_thickness
        self.hole_diameter = hole_diameter
        self.film_pressure = film_pressure
        self.supply_pressure = supply_pressure

    def fit(self, X: RobotSpec, y=None):
        if not isinstance(X, RobotSpec):
            raise TypeError("PlatformDesigner.fit expects a RobotSpec")
        self.design_ = design_platform(
            X, self.mode,
            glass_factor=self.glass_factor, preferred_spacing=self.preferred_spacing,
            min_thickness=self.min_thickness, hole_diameter=self.hole_diameter,
            film_pressure=self.film_pressure, supply_pressure=self.supply_pressure,
        )
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "design_")
        return covered_hole_counts(_check_points(X), self.design_.glass, self.design_.plate.hole_spacing)


class FilmSimulator(BaseEstimator):
    """Run a :class:`Scenario` and interpolate its trajectory.

    After ``fit``, ``trajectory_`` holds the sampled run and ``diagnostics_``
    an ``(n_samples, 5)`` array of ``t, px, py, L, ke``.  ``predict(times)``
    returns ``(n_times, n_bodies, 6)`` linearly interpolated states
    ``x, y, theta, vx, vy, omega``.
    """

    def __init__(self, dt: float | None = None, t_end: float | None = None):
        self.dt = dt
        self.t_end = t_end

    def fit(self, X: Scenario, y=None):
        if not isinstance(X, Scenario):
            raise TypeError("FilmSimulator.fit expects a Scenario")
        self.trajectory_ = simulate(X, self.dt, self.t_end)
        self.body_ids_ = [b.id for b in X.bodies]
        rows = [diagnostics(s) for s in self.trajectory_.samples]
        self.diagnostics_ = np.array(
            [[d.time, d.px, d.py, d.angular_momentum, d.kinetic_energy] for d in rows])
        self._states = np.array([
            [[b.x, b.y, b.theta, b.vx, b.vy, b.omega] for b in s.bodies] for s in self.trajectory_.samples
        ])
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "trajectory_")
        times = np.asarray(X, dtype=float).ravel()
        t = np.array(self.trajectory_.times)
        out = np.empty((len(times), self._states.shape[1], 6))
        for i in range(self._states.shape[1]):
            for k in range(6):
                out[:, i, k] = np.interp(times, t, self._states[:, i, k])
        return out
