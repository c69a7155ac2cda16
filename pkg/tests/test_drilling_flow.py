"""Test cases for the cone-angle flow inequalities and their envelopes."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.geometry.base import DegenerateBoundError, DomainError
from src.geometry.drilling_flow import (
    FlowEnvelope,
    angle_grid,
    cone_derivative_bounds,
    cone_length_curve,
    cone_length_envelope,
    controllengths_constants,
    controlled_length_factors,
    controlled_twist_factors,
    cusp_drift_bound,
    cusp_drift_curve,
    cusp_shape_lower_bound,
    doubling_epsilon,
    envelope_at,
    envelope_by_ode,
    geodesic_derivative_bound,
    geodesic_length_by_ode,
    geodesic_length_curve,
    geodesic_length_envelope,
    pointwise_derivative_bound,
    twist_curve,
    twist_envelope,
)
from src.geometry.hyperbolic_core import upper_half_plane_distance
from src.geometry.tube_geometry import tube_radius

ALPHA = 2 * math.pi


def test_angle_grid():
    grid = angle_grid(ALPHA, 5, 0.2)
    assert grid[0] == pytest.approx(0.2 * ALPHA)
    assert grid[-1] == ALPHA
    assert len(grid) == 5
    with pytest.raises(DomainError):
        angle_grid(ALPHA, 1, 0.2)


def test_cone_derivative_bounds_bracket_base_rate():
    t, L = 3.0, 0.01
    R = tube_radius(t, L)
    bounds = cone_derivative_bounds(t, L, R)
    assert bounds.lo < L / t < bounds.hi
    assert bounds.hi - L / t == pytest.approx(L / t - bounds.lo)


def test_cone_length_envelope_at_datum():
    assert cone_length_envelope(ALPHA, 0.001, ALPHA) == (0.001, 0.001)


def test_cone_length_envelope_closed_form():
    t, L = 1.0, 0.001
    spread = 2 * L * (ALPHA ** 2 - t ** 2)
    bounds = cone_length_envelope(ALPHA, L, t)
    assert bounds.lo == pytest.approx(t * L / (ALPHA + spread), rel=1e-14)
    assert bounds.hi == pytest.approx(t * L / (ALPHA - spread), rel=1e-14)
    assert bounds.lo < bounds.hi


def test_cone_length_envelope_degenerate_upper_bound():
    """A long cone axis drives the upper denominator below zero."""
    bounds = cone_length_envelope(ALPHA, 1.0, 0.1)
    assert math.isinf(bounds.hi)
    assert bounds.lo > 0
    with pytest.raises(DegenerateBoundError):
        cone_length_envelope(ALPHA, 1.0, 0.1, strict=True)


@pytest.mark.parametrize("t", [0.0, -1.0, ALPHA + 0.1])
def test_cone_length_envelope_rejects_angles_outside_range(t):
    with pytest.raises(DomainError):
        cone_length_envelope(ALPHA, 0.001, t)


def test_cone_length_curve_flags_degenerate_points():
    curve = cone_length_curve(ALPHA, 1.0, angle_grid(ALPHA, 8, 0.01))
    assert curve.flags == ("bound_degenerate",)
    assert math.isinf(curve.upper[0])
    assert curve.upper[-1] == 1.0
    assert cone_length_curve(ALPHA, 0.001, angle_grid(ALPHA, 8, 0.01)).flags == ()


@pytest.mark.parametrize("L", [0.001, 0.01, 0.03])
def test_envelope_by_ode_matches_closed_form(L):
    """2048 RK4 steps of the differential inequality reproduce the closed-form band."""
    grid = angle_grid(ALPHA, 257, 0.1)
    closed = cone_length_curve(ALPHA, L, grid)
    integrated = envelope_by_ode(ALPHA, L, grid, substeps=8)
    np.testing.assert_allclose(integrated.lower, closed.lower, rtol=1e-6)
    np.testing.assert_allclose(integrated.upper, closed.upper, rtol=1e-6)


@pytest.mark.parametrize("L", [0.001, 0.01, 0.03])
def test_envelope_by_ode_is_fourth_order(L):
    """Doubling the substeps shrinks the error by roughly 2⁴."""
    grid = angle_grid(ALPHA, 5, 0.5)
    closed = cone_length_curve(ALPHA, L, grid)
    coarse_run = envelope_by_ode(ALPHA, L, grid, substeps=16)
    fine_run = envelope_by_ode(ALPHA, L, grid, substeps=32)
    for branch in ("lower", "upper"):
        exact = np.array(getattr(closed, branch))
        coarse = np.max(np.abs(np.array(getattr(coarse_run, branch)) - exact))
        fine = np.max(np.abs(np.array(getattr(fine_run, branch)) - exact))
        assert fine > 0
        assert math.log2(coarse / fine) >= 3.8


def test_envelope_by_ode_on_grid_below_alpha():
    """The datum is still taken at α when the grid stops short of it."""
    grid = np.linspace(1.0, 3.0, 9)
    closed = cone_length_curve(ALPHA, 0.001, grid)
    integrated = envelope_by_ode(ALPHA, 0.001, grid, substeps=16)
    assert len(integrated.grid) == 9
    np.testing.assert_allclose(integrated.lower, closed.lower, rtol=1e-8)


def test_envelope_at_interpolates():
    envelope = FlowEnvelope("twist", (1.0, 2.0, 3.0), (0.0, 1.0, 2.0), (1.0, 2.0, math.inf))
    assert envelope_at(envelope, 2.0) == (1.0, 2.0)
    assert tuple(envelope_at(envelope, 1.5)) == pytest.approx((0.5, 1.5))
    assert math.isinf(envelope_at(envelope, 2.5).hi)
    with pytest.raises(DomainError):
        envelope_at(envelope, 3.5)


def test_flow_envelope_validation():
    with pytest.raises(DomainError):
        FlowEnvelope("volume", (1.0,), (0.0,), (1.0,))
    with pytest.raises(DomainError):
        FlowEnvelope("twist", (1.0, 1.0), (0.0, 0.0), (1.0, 1.0))
    with pytest.raises(DomainError):
        FlowEnvelope("twist", (1.0,), (2.0,), (1.0,))
    with pytest.raises(DomainError):
        FlowEnvelope("twist", (1.0, 2.0), (0.0,), (1.0,))


def test_geodesic_length_envelope_reference_factors():
    """4αL_𝒞 = 0.08π for α = 2π and L_𝒞 = 0.01."""
    bounds = geodesic_length_envelope(0.01, 0.01, ALPHA)
    assert bounds.lo == pytest.approx(0.777768, abs=1e-6)
    assert bounds.hi == pytest.approx(1.285730, abs=1e-6)
    assert geodesic_derivative_bound(0.5, 0.01) == pytest.approx(0.02)


def test_geodesic_length_envelope_overflows_to_infinity():
    assert math.isinf(geodesic_length_envelope(0.01, 100.0, ALPHA).hi)


def test_geodesic_length_curve_endpoints():
    grid = angle_grid(ALPHA, 4, 1e-9)
    curve = geodesic_length_curve(0.01, 0.01, ALPHA, grid)
    assert curve.lower[-1] == curve.upper[-1] == 0.01
    factors = geodesic_length_envelope(0.01, 0.01, ALPHA)
    assert curve.lower[0] / 0.01 == pytest.approx(factors.lo, rel=1e-8)
    assert curve.upper[0] / 0.01 == pytest.approx(factors.hi, rel=1e-8)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(min_value=-1, max_value=1), min_size=4, max_size=4))
def test_admissible_trajectories_stay_inside_geodesic_band(controls):
    """Piecewise-constant controls with |c| ≤ 1 never leave the integrated band."""
    grid = angle_grid(ALPHA, 33, 0.05)
    curve = geodesic_length_curve(0.02, 0.01, ALPHA, grid)

    def control(t):
        return controls[min(3, int(4 * t / ALPHA))]

    trajectory = geodesic_length_by_ode(0.02, 0.01, ALPHA, grid, control)
    for value, lo, hi in zip(trajectory, curve.lower, curve.upper):
        assert lo * (1 - 1e-9) <= value <= hi * (1 + 1e-9)


def test_extremal_controls_trace_the_band():
    grid = angle_grid(ALPHA, 33, 0.05)
    curve = geodesic_length_curve(0.02, 0.01, ALPHA, grid)
    # Integrating backwards, control -1 makes the length grow.
    growing = geodesic_length_by_ode(0.02, 0.01, ALPHA, grid, lambda t: -1.0, substeps=8)
    shrinking = geodesic_length_by_ode(0.02, 0.01, ALPHA, grid, lambda t: 1.0, substeps=8)
    np.testing.assert_allclose(growing, curve.upper, rtol=1e-9)
    np.testing.assert_allclose(shrinking, curve.lower, rtol=1e-9)


def test_twist_envelope():
    bounds = twist_envelope(0.3, 0.03, 0.01)
    assert bounds.lo == pytest.approx(0.3 * (1 - 0.0012))
    assert bounds.hi == pytest.approx(0.3 * (1 + 0.0012))
    assert twist_envelope(0.0, 0.03, 0.01) == (0.0, 0.0)


def test_twist_curve_is_linear_in_angle():
    grid = angle_grid(ALPHA, 3, 0.5)
    curve = twist_curve(0.3, 0.03, 0.01, ALPHA, grid)
    assert curve.lower[-1] == curve.upper[-1] == pytest.approx(0.3)
    drift = 4 * 0.03 * 0.01 * (ALPHA - grid[0])
    assert curve.upper[0] - 0.3 == pytest.approx(drift)
    assert 0.3 - curve.lower[0] == pytest.approx(drift)


def test_pointwise_derivative_bound():
    assert pointwise_derivative_bound(1.5, 0.2) == pytest.approx(math.sqrt(2 / 3) * 0.3)


def test_controllengths_constants_reference_values():
    """δ = 1 and K1 = 1."""
    constants = controllengths_constants(0.1, 1.0, 1.0)
    assert constants.K == pytest.approx(1.206714, abs=1e-6)
    assert constants.A == pytest.approx(0.985278, abs=1e-6)
    assert constants.epsilon2 == pytest.approx(math.log(2) / constants.A)
    assert doubling_epsilon(constants.A) == constants.epsilon2


def test_controllengths_constants_scale_with_volume_override():
    base = controllengths_constants(0.1, 1.0, 1.0)
    doubled = controllengths_constants(0.1, 1.0, 1.0, vol_B_delta=4 * 5.110932)
    assert doubled.K == pytest.approx(2 * base.K, rel=1e-6)


@pytest.mark.parametrize("delta", [0.0, math.pi / math.sqrt(2), 3.0])
def test_controllengths_constants_reject_delta(delta):
    with pytest.raises(DomainError):
        controllengths_constants(0.1, delta, 1.0)


def test_controlled_factors():
    lengths = controlled_length_factors(0.5, 0.2)
    assert lengths.lo == pytest.approx(math.exp(-0.1))
    assert lengths.hi == pytest.approx(math.exp(0.1))
    twists = controlled_twist_factors(0.5, 0.2)
    assert tuple(twists) == pytest.approx((0.9, 1.1))
    assert math.isinf(controlled_length_factors(1.0, 1000.0).hi)


def test_cusp_drift_and_shape_bound():
    tau = 0.5 + 1.0j
    drift = cusp_drift_bound(ALPHA, 0.001)
    assert drift == pytest.approx(ALPHA * 0.001)
    lowest = cusp_shape_lower_bound(tau, drift)
    reached = complex(tau.real, lowest)
    assert upper_half_plane_distance(tau, reached) == pytest.approx(drift, rel=1e-9)
    with pytest.raises(DomainError):
        cusp_shape_lower_bound(0.5 - 1j, drift)


def test_cusp_drift_curve():
    grid = angle_grid(ALPHA, 5, 0.5)
    curve = cusp_drift_curve(ALPHA, 0.001, grid)
    assert curve.lower == (0.0,) * 5
    assert curve.upper[-1] == 0.0
    assert curve.upper[0] == pytest.approx(0.5 * ALPHA * 0.001)
