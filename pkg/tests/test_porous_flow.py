import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from porousfloat import DomainError
from porousfloat.porous_flow import (
    InletState,
    PorousPlate,
    contact_force,
    envelope_point,
    envelope_velocity,
    flow_curve,
    inlet_force_reduction,
    interior_ripple,
    mass_flux_product,
    superposed_surface_speed,
    superposed_surface_speeds,
    surface_speed_field,
    surface_velocity_ratio,
)

lengths = st.floats(1e-4, 1.0)
offsets = st.floats(-1.0, 1.0)


def brute_sum(point, holes, h):
    """Plain-loop superposition oracle."""
    total = 0.0
    for hx, hy in holes:
        d2 = (point[0] - hx) ** 2 + (point[1] - hy) ** 2
        total += h * h / (h * h + d2)
    return total


class TestEnvelope:
    def test_identity_at_tangent_envelope(self):
        assert envelope_velocity(0.015, 0.015, 1.0) == 1.0

    def test_double_radius_quarter_speed(self):
        assert envelope_velocity(0.03, 0.015, 1.0) == pytest.approx(0.25, rel=1e-15)

    def test_hand_value(self):
        assert envelope_velocity(0.045, 0.015, 0.9) == pytest.approx(0.1, rel=1e-12)

    @pytest.mark.parametrize("r, r0", [(0.0, 0.01), (0.01, 0.0), (-1.0, 0.5), (0.01, 0.02)])
    def test_rejects_bad_radii(self, r, r0):
        with pytest.raises(DomainError):
            envelope_velocity(r, r0, 1.0)

    def test_envelope_point(self):
        p = envelope_point(0.015, 0.015, v0=2.0)
        assert p.r == pytest.approx(0.015 * math.sqrt(2))
        assert p.v == pytest.approx(1.0)

    @given(r0=lengths, k=st.floats(1.0, 100.0), v0=st.floats(0.0, 10.0))
    def test_mass_flux_invariant(self, r0, k, v0):
        r = r0 * k
        a = mass_flux_product(101325.0, v0, r0)
        b = mass_flux_product(101325.0, envelope_velocity(r, r0, v0), r)
        assert b == pytest.approx(a, rel=1e-12, abs=1e-300)


class TestSurfaceRatio:
    def test_on_axis(self):
        assert surface_velocity_ratio(0.0, 0.015) == 1.0

    @given(h=lengths)
    def test_half_at_x_equals_h(self, h):
        assert surface_velocity_ratio(h, h) == 0.5

    def test_hand_value(self):
        assert surface_velocity_ratio(0.030, 0.015) == pytest.approx(0.2, rel=1e-12)

    @pytest.mark.parametrize("h", [0.0, -0.01, math.nan])
    def test_rejects_bad_thickness(self, h):
        with pytest.raises(DomainError):
            surface_velocity_ratio(0.01, h)

    @given(x=offsets, h=lengths)
    def test_symmetric_and_bounded(self, x, h):
        r = surface_velocity_ratio(x, h)
        assert r == surface_velocity_ratio(-x, h)
        assert 0.0 < r <= 1.0

    @given(x1=st.floats(0, 1), x2=st.floats(0, 1), h=lengths)
    def test_monotone_in_offset(self, x1, x2, h):
        lo, hi = sorted((x1, x2))
        assert surface_velocity_ratio(hi, h) <= surface_velocity_ratio(lo, h)

    @given(x=offsets, h=st.floats(1e-3, 0.2))
    @settings(max_examples=300)
    def test_composition_with_envelope(self, x, h):
        direct = surface_velocity_ratio(x, h)
        composed = envelope_velocity(math.sqrt(h * h + x * x), h, 1.0)
        assert abs(direct - composed) <= 1e-12 * direct


class TestFlowCurve:
    def test_three_points(self):
        curve = flow_curve(0.015, 0.03, 0.015)
        assert [x for x, _ in curve] == [0.0, 0.015, 0.03]
        assert [r for _, r in curve] == pytest.approx([1.0, 0.5, 0.2], rel=1e-12)

    def test_zero_range(self):
        assert flow_curve(0.015, 0.0, 0.001) == [(0.0, 1.0)]

    def test_row_count(self):
        assert len(flow_curve(0.015, 0.06, 0.001)) == 61

    @pytest.mark.parametrize("x_max, step", [(0.01, 0.0), (0.01, 0.02), (-0.01, 0.001)])
    def test_invalid_range(self, x_max, step):
        with pytest.raises(DomainError):
            flow_curve(0.015, x_max, step)


def one_hole_plate(h=0.015):
    # spacing larger than the plan leaves a single hole at the origin
    return PorousPlate(thickness=h, plan_width=0.1, plan_depth=0.1, hole_spacing=0.5)


class TestSuperposition:
    def test_single_hole_reduces_to_ratio(self):
        plate = one_hole_plate()
        assert plate.hole_count == 1
        for x in (0.0, 0.01, 0.05):
            assert superposed_surface_speed((x, 0.0), plate, v0=2.0) == pytest.approx(
                2.0 * surface_velocity_ratio(x, 0.015), rel=1e-14)

    def test_four_corners_of_cell(self):
        plate = PorousPlate(thickness=0.030, plan_width=0.030, plan_depth=0.030, hole_spacing=0.030)
        assert plate.hole_count == 4
        got = superposed_surface_speed((0.015, 0.015), plate)
        assert got == pytest.approx(4 * 0.0009 / (0.0009 + 0.00045), rel=1e-12)
        assert got == pytest.approx(2.6667, abs=1e-4)

    def test_outside_point_rejected(self):
        with pytest.raises(DomainError):
            superposed_surface_speed((0.2, 0.0), one_hole_plate())
        with pytest.raises(DomainError):
            superposed_surface_speeds([[0.01, 0.01], [-0.01, 0.0]], one_hole_plate())

    @given(i=st.integers(0, 10), j=st.integers(0, 10), h=st.floats(0.005, 0.06))
    @settings(max_examples=50)
    def test_on_hole_axis_at_least_v0(self, i, j, h):
        plate = PorousPlate(thickness=h, plan_width=0.3, plan_depth=0.3, hole_spacing=0.03)
        assert superposed_surface_speed((i * 0.03, j * 0.03), plate) >= 1.0

    @given(x=st.floats(0, 0.2), y=st.floats(0, 0.15), h=st.floats(0.005, 0.06))
    @settings(max_examples=50)
    def test_matches_loop_oracle(self, x, y, h):
        plate = PorousPlate(thickness=h, plan_width=0.2, plan_depth=0.15, hole_spacing=0.025)
        expected = brute_sum((x, y), plate.hole_positions().tolist(), h)
        assert superposed_surface_speed((x, y), plate) == pytest.approx(expected, rel=1e-12)

    def test_field_grid_and_values(self):
        plate = PorousPlate(thickness=0.03, plan_width=0.09, plan_depth=0.06, hole_spacing=0.03)
        field = surface_speed_field(plate, 0.015)
        assert field.xs.tolist() == [0.0, 0.015, 0.03, 0.045, 0.06, 0.075, 0.09]
        assert field.ratio.shape == (5, 7)
        rows = list(field.rows())
        assert len(rows) == 35
        x, y, v = rows[8]
        assert (x, y) == (0.015, 0.015)
        assert v == pytest.approx(brute_sum((x, y), plate.hole_positions().tolist(), 0.03), rel=1e-12)

    def test_thicker_plate_smooths_interior(self):
        ripple = [interior_ripple(PorousPlate(h, 0.3, 0.3, 0.03)) for h in (0.015, 0.030, 0.060)]
        assert ripple[0] > ripple[1] > ripple[2]


class TestForces:
    def test_naive_force(self):
        assert contact_force(0.4e6, 1.0) == 4.0e5

    def test_zero_area(self):
        assert contact_force(0.4e6, 0.0) == 0.0

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            contact_force(-1.0, 1.0)
        with pytest.raises(DomainError):
            contact_force(1.0, -1.0)

    def test_flux_fixture(self):
        assert mass_flux_product(101325.0, 1.0, 0.015) == pytest.approx(22.798125, rel=1e-12)

    def test_one_square_metre(self):
        plate = PorousPlate(thickness=0.03, plan_width=1.0, plan_depth=1.0, hole_spacing=0.01)
        assert plate.hole_count == 101 * 101 == 10201
        naive, inlet, ratio = inlet_force_reduction(plate, InletState(0.4e6))
        assert naive == 4.0e5
        assert inlet == pytest.approx(0.4e6 * 10201 * math.pi * 1e-6, rel=1e-12)
        assert inlet == pytest.approx(1.282e4, rel=1e-3)
        assert ratio == pytest.approx(31.2, abs=0.05)

    def test_generic_preset_ratio(self):
        plate = PorousPlate(thickness=0.03, plan_width=2.0, plan_depth=2.0, hole_spacing=0.01)
        assert plate.hole_count == 201 * 201
        _, _, ratio = inlet_force_reduction(plate, InletState(0.4e6))
        assert ratio > 10
        assert ratio == pytest.approx(4.0 / (40401 * math.pi * 1e-6), rel=1e-12)

    def test_tiling_limit_is_order_one(self):
        # holes of diameter just under the pitch: area ratio approaches 4/pi
        plate = PorousPlate(thickness=0.03, plan_width=1.0, plan_depth=1.0, hole_spacing=0.01,
                            hole_diameter=0.01 * (1 - 1e-9))
        _, _, ratio = inlet_force_reduction(plate, InletState(0.4e6))
        assert 1.0 < ratio < 4 / math.pi


def test_plate_validation():
    with pytest.raises(DomainError):
        PorousPlate(thickness=0.0, plan_width=1, plan_depth=1, hole_spacing=0.01)
    with pytest.raises(DomainError):
        PorousPlate(thickness=0.03, plan_width=1, plan_depth=1, hole_spacing=0.002)
    with pytest.raises(DomainError):
        PorousPlate(thickness=0.03, plan_width=1, plan_depth=1, hole_spacing=0.01, porosity=1.0)
    with pytest.raises(DomainError):
        InletState(0.0)


def test_hole_positions_layout():
    plate = PorousPlate(thickness=0.03, plan_width=0.02, plan_depth=0.01, hole_spacing=0.01)
    assert plate.holes_per_side == (3, 2)
    np.testing.assert_allclose(plate.hole_positions(),
                               [[0, 0], [0.01, 0], [0.02, 0], [0, 0.01], [0.01, 0.01], [0.02, 0.01]])
