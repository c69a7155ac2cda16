"""Test cases for Möbius maps, complex lengths, disks and radial Laplacians."""
import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.geometry.base import DomainError, ParabolicElementError
from src.geometry.hyperbolic_core import (
    INFINITY,
    ComplexLength,
    Mobius,
    RoundDisk,
    ball_volume,
    ball_volume_quadrature,
    complex_length_from_trace,
    disk_automorphism,
    disk_density,
    disk_to_unit,
    loxodromic,
    mobius_apply,
    mobius_compose,
    mobius_inverse,
    radial_laplacian,
    trace_from_complex_length,
    upper_half_plane_distance,
)

coordinates = st.floats(min_value=-2, max_value=2, allow_nan=False, allow_infinity=False)
complexes = st.builds(complex, coordinates, coordinates)


@st.composite
def mobius_maps(draw):
    """Determinant-one maps with |a| ≥ 1 so that d = (1 + bc)/a stays moderate."""
    a = complex(draw(st.floats(min_value=1, max_value=2)), draw(coordinates))
    b, c = draw(complexes), draw(complexes)
    return Mobius(a, b, c, (1 + b * c) / a)


def test_from_matrix_normalizes_determinant():
    m = Mobius.from_matrix(2, 0, 0, 2)
    assert m.is_normalized()
    assert m(1 + 1j) == pytest.approx(1 + 1j)


def test_from_matrix_rejects_singular():
    with pytest.raises(DomainError):
        Mobius.from_matrix(1, 2, 2, 4)


def test_mobius_apply_on_extended_plane():
    """Pole goes to infinity and infinity goes to a/c."""
    m = Mobius.from_matrix(1, 0, 1, 1)
    assert mobius_apply(m, -1) == INFINITY
    assert mobius_apply(m, INFINITY) == pytest.approx(1.0)
    assert mobius_apply(Mobius.identity(), INFINITY) == INFINITY


@settings(max_examples=100, deadline=None)
@given(mobius_maps(), mobius_maps(), mobius_maps(), complexes)
def test_composition_is_associative(m, n, p, z):
    """(m∘n)∘p and m∘(n∘p) agree pointwise."""
    left = mobius_compose(mobius_compose(m, n), p)
    right = mobius_compose(m, mobius_compose(n, p))
    w1, w2 = left(z), right(z)
    if cmath.isinf(complex(w1)) or abs(w1) > 1e3:
        return
    assert abs(w1 - w2) <= 1e-7 * max(1.0, abs(w1))


@settings(max_examples=100, deadline=None)
@given(mobius_maps(), complexes)
def test_inverse_undoes_map(m, z):
    w = m(z)
    if cmath.isinf(complex(w)) or abs(w) > 1e3:
        return
    assert abs(mobius_inverse(m)(w) - z) <= 1e-7 * max(1.0, abs(z))


def test_derivative_and_trace():
    m = Mobius.from_matrix(1, 2, 3, 7)
    z = 0.5 + 0.25j
    h = 1e-6
    numeric = (m(z + h) - m(z - h)) / (2 * h)
    assert m.derivative(z) == pytest.approx(numeric, rel=1e-7)
    assert m.trace() == pytest.approx(8.0)


def test_complex_length_from_trace_real_length():
    """Trace 2cosh(0.5) is a pure translation of length 1."""
    result = complex_length_from_trace(2 * math.cosh(0.5))
    assert result.length == pytest.approx(1.0, abs=1e-12)
    assert result.twist == pytest.approx(0.0, abs=1e-12)


def test_complex_length_from_trace_elliptic():
    """Trace 2cos(0.3) is a rotation by 0.6."""
    result = complex_length_from_trace(2 * math.cos(0.3))
    assert result.length == pytest.approx(0.0, abs=1e-12)
    assert result.twist == pytest.approx(0.6, abs=1e-12)


@pytest.mark.parametrize("tr", [2.0, -2.0, 2.0 + 1e-12j])
def test_complex_length_from_trace_parabolic(tr):
    with pytest.raises(ParabolicElementError):
        complex_length_from_trace(tr)


def test_trace_round_trip_through_loxodromic():
    """Complex length recovered from the trace of its diagonal representative."""
    m = loxodromic(0.7, 1.1)
    assert m.trace() == pytest.approx(trace_from_complex_length(0.7, 1.1))
    result = complex_length_from_trace(m.trace())
    assert result.length == pytest.approx(0.7, rel=1e-12)
    assert result.twist == pytest.approx(1.1, rel=1e-12)


def test_complex_length_reduces_lifted_twist():
    value = ComplexLength.from_lifted(0.1, 7.0)
    assert value.twist == pytest.approx(7.0 - 2 * math.pi)
    assert value.lifted_twist == 7.0
    assert value.as_complex() == complex(0.1, 7.0)
    assert ComplexLength.from_lifted(0.1, -0.5).twist == pytest.approx(2 * math.pi - 0.5)


def test_complex_length_validation():
    with pytest.raises(DomainError):
        ComplexLength(-0.1, 0.0)
    with pytest.raises(DomainError):
        ComplexLength(0.1, 7.0)


def test_ball_volume_reference_value():
    """π(sinh 2 - 2) at R = 1."""
    assert ball_volume(1.0) == pytest.approx(5.110932, abs=1e-6)


@pytest.mark.parametrize("R", [1e-3, 5e-3, 0.02, 0.5, 1.0, 3.0])
def test_ball_volume_matches_quadrature(R):
    assert ball_volume(R) == pytest.approx(ball_volume_quadrature(R), rel=1e-10)


def test_ball_volume_rejects_nonpositive():
    with pytest.raises(DomainError):
        ball_volume(0.0)


def test_ball_volume_is_euclidean_for_small_radii():
    R = 1e-4
    assert ball_volume(R) / (4 * math.pi * R ** 3 / 3) == pytest.approx(1, rel=1e-7)


def test_ball_volume_is_continuous_at_series_switch():
    below = ball_volume(math.nextafter(1e-2, 0))
    assert ball_volume(1e-2) == pytest.approx(below, rel=1e-9)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=1e-6, max_value=5), st.floats(min_value=1.001, max_value=3))
def test_ball_volume_increases_with_radius(R, factor):
    assert ball_volume(R * factor) > ball_volume(R)


def test_disk_density():
    assert disk_density(RoundDisk.unit(), 0j) == 2.0
    assert disk_density(RoundDisk.upper_half_plane(), 2j) == 0.5
    assert disk_density(RoundDisk(1 + 1j, 2.0), 1 + 1j) == 1.0
    with pytest.raises(DomainError):
        disk_density(RoundDisk.unit(), 1.5)


@pytest.mark.parametrize(
    "disk, z",
    [
        (RoundDisk(0.5 - 1j, 2.0), 1.0 - 0.5j),
        (RoundDisk.upper_half_plane(), 0.3 + 2j),
        (RoundDisk.unit(), 0.4j),
    ],
)
def test_disk_to_unit(disk, z):
    """z goes to 0 and the density transforms as a metric pullback."""
    m = disk_to_unit(disk, z)
    assert abs(m(z)) < 1e-12
    w = z + 0.01 * (1 + 1j)
    assert disk_density(disk, w) == pytest.approx(
        disk_density(RoundDisk.unit(), complex(m(w))) * abs(m.derivative(w)), rel=1e-9
    )


def test_disk_automorphism():
    m = disk_automorphism(0.3 + 0.4j)
    assert m(0j) == pytest.approx(0.3 + 0.4j)
    assert abs(m(1j)) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        disk_automorphism(1.0)


def test_upper_half_plane_distance():
    assert upper_half_plane_distance(1j, 2j) == pytest.approx(math.log(2))
    assert upper_half_plane_distance(0.5 + 1j, 0.5 + 1j) == 0.0
    with pytest.raises(DomainError):
        upper_half_plane_distance(1j, -1j)


@pytest.mark.parametrize("method", ["contour", "central"])
def test_radial_laplacian_of_square(method):
    """f = r² gives 2 + 4r·coth r."""
    r = 1.3
    expected = 2 + 4 * r / math.tanh(r)
    tolerance = 1e-12 if method == "contour" else 1e-4
    assert radial_laplacian(lambda x: x ** 2, r, method=method) == pytest.approx(expected, rel=tolerance)


def test_radial_laplacian_of_eigenfunction():
    """e^{-√2 r}/sinh r is an eigenfunction with eigenvalue 1."""
    def f(r):
        return np.exp(-math.sqrt(2) * r) / np.sinh(r)

    # With f = g/sinh r the operator becomes (g'' - g)/sinh r.
    r = 0.8
    assert radial_laplacian(f, r, method="contour") == pytest.approx(f(r), rel=1e-10)


def test_radial_laplacian_rejects_unknown_method():
    with pytest.raises(ValueError):
        radial_laplacian(lambda r: r, 1.0, method="spline")


def test_radial_laplacian_of_real_callable():
    """cosh r gives cosh r + 2·sinh r·coth r = 3·cosh r with the default central differences."""
    assert radial_laplacian(math.cosh, 1.0) == pytest.approx(3 * math.cosh(1.0), abs=1e-5)
    assert radial_laplacian(lambda r: math.cosh(r), 1.0, method="central") == pytest.approx(
        3 * math.cosh(1.0), abs=1e-5
    )


@pytest.mark.parametrize(
    "f",
    [
        math.cosh,
        lambda z: math.cosh(complex(z).real),
        lambda z: complex(z).imag,
    ],
)
def test_radial_laplacian_contour_rejects_non_holomorphic(f):
    with pytest.raises(DomainError):
        radial_laplacian(f, 1.0, method="contour")
