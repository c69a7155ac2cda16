"""Test cases for Epstein-surface eigenvalues, curvatures and depth thresholds."""
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.geometry.base import CurvaturePoleError, DomainError
from src.geometry.epstein_ends import (
    EpsteinFrame,
    Eigenvalues,
    convexity_check,
    curvature_pole,
    curvature_range,
    diffeomorphism_depth,
    embedding_depth,
    epstein_frame,
    immersion_depth,
    immersion_depth_bisection,
    principal_curvatures,
    psi_derivative_eigenvalues,
)
from src.geometry.quadratic_differentials import embedded_disk_factor


def test_eigenvalues_sum_and_unit_vertical():
    values = psi_derivative_eigenvalues(2.0, 0.5)
    assert values.lambda3 == 1.0
    assert values.lambda1 + values.lambda2 == pytest.approx(2.0)
    assert values.lambda1 - 1 == pytest.approx(2.0 / (4 * math.exp(0.5) * math.cosh(0.5)))


def test_eigenvalues_degenerate_at_immersion_depth():
    phi_sup = 8.0
    values = psi_derivative_eigenvalues(phi_sup, immersion_depth(phi_sup))
    assert values.lambda2 == pytest.approx(0.0, abs=1e-12)


def test_immersion_depth_closed_form():
    assert immersion_depth(8.0) == pytest.approx(math.log(math.sqrt(3)))
    assert immersion_depth(2.0) == -math.inf
    assert immersion_depth(0.0) == -math.inf


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=2.001, max_value=1e6))
def test_immersion_depth_matches_bisection(phi_sup):
    assert immersion_depth(phi_sup) == pytest.approx(immersion_depth_bisection(phi_sup), abs=1e-9)


def test_curvature_equals_one_when_norm_is_half():
    """‖Φ(z)‖ = ½ makes k₁ = 1, so κ₁ = 1 at every depth."""
    for d in (0.0, 0.3, 2.0):
        assert principal_curvatures(0.5, d).kappa1 == pytest.approx(1.0, rel=1e-12)


def test_curvatures_tend_to_one_deep_in_the_end():
    curvatures = principal_curvatures(3.0, 20.0)
    assert curvatures.kappa1 == pytest.approx(1.0, abs=1e-9)
    assert curvatures.kappa2 == pytest.approx(1.0, abs=1e-9)


def test_first_curvature_limit_at_unit_norm():
    """At ‖Φ(z)‖ = 1 the first curvature is coth d."""
    assert principal_curvatures(1.0, 0.7).kappa1 == pytest.approx(1 / math.tanh(0.7))


def test_zero_differential_gives_horosphere_like_values():
    curvatures = principal_curvatures(0.0, 0.8)
    assert curvatures.kappa1 == pytest.approx(math.tanh(0.8))
    assert curvatures.kappa2 == pytest.approx(math.tanh(0.8))


def test_curvature_pole():
    """The pole sits at ‖Φ(z)‖ = e^d cosh d, which is 1 at d = 0."""
    assert curvature_pole(0.0) == 1.0
    with pytest.raises(CurvaturePoleError):
        principal_curvatures(1.0, 0.0)
    frame = epstein_frame(1.0, 0.0)
    assert frame.curvatures is None
    assert frame.eigenvalues.lambda1 == pytest.approx(1.25)


def test_epstein_frame_regular_point():
    frame = epstein_frame(0.5, 1.0)
    assert frame.curvatures is not None
    assert frame.curvatures.kappa1 == pytest.approx(1.0)
    assert frame.depth == 1.0


def test_epstein_frame_rejects_inconsistent_eigenvalues():
    with pytest.raises(DomainError):
        EpsteinFrame(1.0, 0.0, Eigenvalues(0.5, 1.5, 1.0), None)
    with pytest.raises(DomainError):
        EpsteinFrame(1.0, 0.0, Eigenvalues(1.5, 0.5, 2.0), None)


def test_curvature_range_detects_pole():
    with pytest.raises(CurvaturePoleError):
        curvature_range(2.0, 0.0)
    with pytest.raises(CurvaturePoleError):
        curvature_range(curvature_pole(1.0) * 1.01, 1.0)


def test_curvature_range_orders_extremes():
    lowest, highest = curvature_range(0.5, 1.0, samples=33)
    assert 0 < lowest <= highest
    assert highest == pytest.approx(1.0, rel=1e-12)


def test_convexity_check():
    assert convexity_check(0.5, 1.0)
    assert not convexity_check(2.0, 0.0)


def test_embedding_depth_reference_value():
    assert embedding_depth(0.2, 1.5) == pytest.approx(2.999058, abs=1e-6)


def test_diffeomorphism_depth():
    assert diffeomorphism_depth(1.5) == pytest.approx(math.log(2))
    assert diffeomorphism_depth(0.0) == 0.0
    with pytest.raises(DomainError):
        diffeomorphism_depth(-0.1)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=1e-3, max_value=10), st.floats(min_value=-1, max_value=2))
def test_eigenvalue_product_contracts_volume(phi_norm, d):
    """``λ₁λ₂λ₃ = 1 - q²``, strictly below one off the umbilic points."""
    values = psi_derivative_eigenvalues(phi_norm, d)
    q = phi_norm / (4 * math.exp(d) * math.cosh(d))
    product = values.lambda1 * values.lambda2 * values.lambda3
    assert product == pytest.approx(1 - q * q, abs=1e-12)
    assert product < 1


def test_eigenvalue_product_is_one_at_umbilic_points():
    values = psi_derivative_eigenvalues(0.0, 0.7)
    assert values.lambda1 * values.lambda2 * values.lambda3 == 1.0


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=0.01, max_value=10), st.floats(min_value=0, max_value=5))
def test_embedding_depth_exponentiates_to_disk_factor(kappa, sigma_norm):
    assert math.exp(embedding_depth(kappa, sigma_norm)) == pytest.approx(
        embedded_disk_factor(kappa, sigma_norm), rel=1e-12
    )
