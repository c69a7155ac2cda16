"""Fundamental solutions of shifted radial Laplacians on hyperbolic balls.

Two kernel families vanish on the sphere of radius ``R`` and are negative inside:

* ``vector``: ``sinh(√3(r - R)) / (sinh(√3R)·4π sinh r)``, annihilated by
  ``f'' + 2coth(r)f' - 2f``;
* ``strain``: ``sin(√2(r - R)) / (sin(√2R)·4π sinh r)`` for ``R < π/√2``,
  annihilated by ``f'' + 2coth(r)f' + 3f``.

Both are written as a single sine of ``r - R`` so that ``v(R) = 0`` holds exactly;
expanding the sine recovers the ``-cosh + coth·sinh`` and ``-cos + cot·sin`` forms.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Literal, Optional

import numpy as np

from src.geometry.base import DomainError, require_nonnegative, require_positive
from src.geometry.hyperbolic_core import (
    ball_volume,
    radial_derivatives,
    radial_laplacian,
    sample_radii,
)
from src.utils.numerics import midpoint_rule
from src.utils.settings import get_settings

logger = logging.getLogger(__name__)

KernelFamily = Literal["vector", "strain"]

SQRT3 = math.sqrt(3)
SQRT2 = math.sqrt(2)
STRAIN_RADIUS_LIMIT = math.pi / SQRT2

# Zeroth-order coefficient c in f'' + 2coth(r) f' + c f = 0 for each family.
OPERATOR_SHIFT = {"vector": -2.0, "strain": 3.0}
STRAIN_SHIFT_PRINTED = 2.0


def _vector_values(r, R: float):
    return np.sinh(SQRT3 * (r - R)) / (math.sinh(SQRT3 * R) * 4 * np.pi * np.sinh(r))


def _strain_values(r, R: float):
    return np.sin(SQRT2 * (r - R)) / (math.sin(SQRT2 * R) * 4 * np.pi * np.sinh(r))


def _check_strain_radius(R: float) -> None:
    require_positive("R", R)
    if R >= STRAIN_RADIUS_LIMIT:
        raise DomainError(f"Strain kernel needs R < π/√2 ≈ {STRAIN_RADIUS_LIMIT:.6f}, got {R}")


def _check_radius(r: float, R: float) -> None:
    if not 0 < r <= R:
        raise DomainError(f"Kernel argument r={r} must lie in (0, {R}]")


def vector_kernel(r: float, R: float) -> float:
    """Fundamental solution of ``-(Δ + 2)`` on the ball of radius ``R``."""
    require_positive("R", R)
    _check_radius(r, R)
    if r == R:
        return 0.0
    return float(_vector_values(r, R))


def strain_kernel(r: float, R: float) -> float:
    """Fundamental solution for harmonic strain fields on the ball of radius ``R < π/√2``."""
    _check_strain_radius(R)
    _check_radius(r, R)
    if r == R:
        return 0.0
    return float(_strain_values(r, R))


def kernel_derivative_at_boundary(family: KernelFamily, R: float) -> float:
    """Closed-form ``v'(R)``."""
    if family == "vector":
        require_positive("R", R)
        return SQRT3 / (4 * math.pi * math.sinh(R) * math.sinh(SQRT3 * R))
    if family == "strain":
        _check_strain_radius(R)
        return SQRT2 / (4 * math.pi * math.sinh(R) * math.sin(SQRT2 * R))
    raise DomainError(f"Unknown kernel family: {family}")


@dataclass(frozen=True)
class MeanValueKernel:
    """Kernel record: family, outer radius and its closed-form boundary derivative."""

    family: KernelFamily
    outer_radius: float
    derivative_at_R: float
    scale: float = 1.0

    def __post_init__(self) -> None:
        if self.family not in OPERATOR_SHIFT:
            raise DomainError(f"Unknown kernel family: {self.family}")
        if self.family == "strain":
            _check_strain_radius(self.outer_radius)
        else:
            require_positive("R", self.outer_radius)

    def values(self, r):
        """Kernel on scalars or arrays, complex arguments included."""
        if self.family == "vector":
            return self.scale * _vector_values(r, self.outer_radius)
        return self.scale * _strain_values(r, self.outer_radius)

    def __call__(self, r: float) -> float:
        _check_radius(r, self.outer_radius)
        if r == self.outer_radius:
            return 0.0
        return float(np.real(self.values(r)))


def make_kernel(family: KernelFamily, R: float, scale: float = 1.0) -> MeanValueKernel:
    return MeanValueKernel(family, R, scale * kernel_derivative_at_boundary(family, R), scale)


def boundary_derivative_fd(kernel: MeanValueKernel) -> float:
    """``v'(R)`` measured numerically from the analytic continuation of the kernel."""
    first, _ = radial_derivatives(kernel.values, kernel.outer_radius, method="contour")
    return first


def verify_kernel(
    kernel: MeanValueKernel, samples: int = 100, shift: Optional[float] = None
) -> float:
    """Maximum of ``|v'' + 2coth(r)v' + c·v|`` over interior radii in ``[R/10, R)``.

    ``c`` defaults to the family's own shift; pass ``shift`` to test another operator.
    """
    if samples < 2:
        raise DomainError(f"Kernel verification needs at least two samples, got {samples}")
    shift = OPERATOR_SHIFT[kernel.family] if shift is None else shift

    residual = 0.0
    for r in sample_radii(kernel.outer_radius, samples):
        r = float(r)
        laplacian = radial_laplacian(kernel.values, r, method="contour")
        value = laplacian + shift * float(np.real(kernel.values(r)))
        residual = max(residual, abs(value))
    logger.debug(
        f"DEBUG: {kernel.family} kernel R={kernel.outer_radius} shift={shift} residual={residual}"
    )
    return residual


def default_bump(R: float) -> Callable:
    """Radial bump ``(1 - (r/R)²)⁴``, even in ``r`` and flat to third order at ``R``."""
    require_positive("R", R)
    return lambda r: (1 - (r / R) ** 2) ** 4


def greens_check(R: float, bump: Optional[Callable] = None, panels: Optional[int] = None) -> float:
    """``|∫_{B_R} v·Lφ dV - φ(0)|`` for the vector kernel and a radial test function.

    ``L = -(Δ + 2)`` acts on ``φ`` radially, and the volume integral reduces to
    ``∫₀^R v·Lφ·4π sinh²r dr``, evaluated by the composite midpoint rule.
    ``bump`` must accept complex arguments and vanish with its derivative at ``R``.
    """
    require_positive("R", R)
    bump = default_bump(R) if bump is None else bump
    panels = get_settings().greens_panels if panels is None else panels

    first, _ = radial_derivatives(bump, R, method="contour")
    scale = max(1.0, abs(complex(bump(0.0))))
    if abs(complex(bump(R))) > 1e-12 * scale or abs(first) > 1e-8 * scale:
        raise DomainError("Test function must vanish to first order at the boundary sphere")

    shift = OPERATOR_SHIFT["vector"]

    def integrand(nodes: np.ndarray) -> np.ndarray:
        values = []
        for r in nodes:
            r = float(r)
            L_phi = radial_laplacian(bump, r, method="contour") + shift * complex(bump(r)).real
            weight = math.sinh(SQRT3 * (r - R)) / math.sinh(SQRT3 * R) * math.sinh(r)
            values.append(weight * L_phi)
        return np.array(values)

    integral = midpoint_rule(integrand, 0.0, R, panels)
    residual = abs(integral - complex(bump(0.0)).real)
    logger.debug(f"DEBUG: Green's identity R={R} panels={panels} residual={residual}")
    return residual


def vector_kernel_integral(R: float) -> float:
    """``∫_{B_R} v dV = (√3/2)·sinh R / sinh(√3R) - ½`` for the vector kernel."""
    require_positive("R", R)
    return SQRT3 / 2 * math.sinh(R) / math.sinh(SQRT3 * R) - 0.5


def vector_mean_value_bound(l2: float, R: float, b: float = 0.0) -> float:
    """Pointwise bound ``l2/√vol(B_R) + b/2`` for a field with ``‖Δv‖ ≤ b``."""
    require_nonnegative("l2", l2)
    require_nonnegative("b", b)
    return l2 / math.sqrt(ball_volume(R)) + b / 2


def strain_f(R: float) -> float:
    """``f(R) = cosh R·sin(√2R) - √2·sinh R·cos(√2R)``."""
    return math.cosh(R) * math.sin(SQRT2 * R) - SQRT2 * math.sinh(R) * math.cos(SQRT2 * R)


def strain_mean_value_constant(R: float) -> float:
    """``3√(2·vol(B_R)) / (4π·f(R))``: pointwise-by-L² constant for harmonic strain fields."""
    _check_strain_radius(R)
    return 3 * math.sqrt(2 * ball_volume(R)) / (4 * math.pi * strain_f(R))
