"""Model deformation norms on a half space and the projective-distance bound.

The half space is ``D × [0, ∞)`` with metric ``σ²cosh²t(dx² + dy²) + dt²`` over
the unit disk ``D``.
"""
import logging
import math
from typing import NamedTuple, Optional

from scipy import integrate

from src.geometry.base import require_nonnegative, require_positive, DomainError
from src.geometry.quadratic_differentials import (
    ProjectiveGap,
    QuadDiff,
    l2_norm_disk,
    l2_norm_disk_quadrature,
)
from src.utils.numerics import rk4_integrate

logger = logging.getLogger(__name__)

SQRT_TWO_PI_THIRDS = math.sqrt(2 * math.pi / 3)
NEHARI_BOUND = 1.5
MAX_EXPONENT = 700.0


class ProjectiveBound(NamedTuple):
    sigma_bound: ProjectiveGap
    C: float


def model_pointwise_norm(phi_norm_at_w: float, t: float) -> float:
    """``2e^{-t}·sech t·‖Φ(w)‖``: pointwise norm of the model form at height ``t``."""
    require_nonnegative("phi_norm_at_w", phi_norm_at_w)
    if t < 0:
        raise DomainError(f"Height t={t} must be non-negative")
    return 2 * math.exp(-t) / math.cosh(t) * phi_norm_at_w if t < 700 else 0.0


def model_l2_norm(phi: QuadDiff) -> float:
    """``∫_H ‖ω_Φ‖² = 2‖Φ‖₂²``."""
    return 2 * l2_norm_disk(phi) ** 2


def model_l2_norm_quadrature(phi: QuadDiff) -> float:
    """Factored oracle: height integral of ``‖ω‖²·cosh²t`` times the disk quadrature."""

    def height_density(t: float) -> float:
        return model_pointwise_norm(1.0, t) ** 2 * math.cosh(t) ** 2 if t < 350 else 0.0

    height, _ = integrate.quad(height_density, 0.0, math.inf, epsabs=1e-15, epsrel=1e-12)
    return height * l2_norm_disk_quadrature(phi) ** 2


def halfspace_lower_bound(phi_norm_at_z: float) -> float:
    """``(8π/3)·‖Φ(z)‖²``: lower bound on the energy of any form extending ``Φ``."""
    require_nonnegative("phi_norm_at_z", phi_norm_at_z)
    return 8 * math.pi / 3 * phi_norm_at_z ** 2


def schwarzian_sup_bound(L_C_t: float, kappa: float, sigma_norm_t: float) -> float:
    """Upper bound ``L_𝒞(t)(1 + 2‖Σ_t‖∞) / (2√(2π/3)·tanh²(κ/2))`` on ``‖Φ_t‖∞``."""
    require_nonnegative("L_C_t", L_C_t)
    require_positive("kappa", kappa)
    require_nonnegative("sigma_norm_t", sigma_norm_t)
    return L_C_t * (1 + 2 * sigma_norm_t) / (2 * SQRT_TWO_PI_THIRDS * math.tanh(kappa / 2) ** 2)


def projective_slope(kappa: float) -> float:
    """``K = 2√(2π/3)·coth²(κ/2)``, the rate constant of the projective-distance inequality."""
    require_positive("kappa", kappa)
    return 2 * SQRT_TWO_PI_THIRDS / math.tanh(kappa / 2) ** 2


def sharp_projective_slope(kappa: float) -> float:
    """``coth²(κ/2)/√(2π/3)``: the slope implied by :func:`schwarzian_sup_bound` itself."""
    require_positive("kappa", kappa)
    return 1 / (SQRT_TWO_PI_THIRDS * math.tanh(kappa / 2) ** 2)


def affine_majorant(alpha: float, K: float, x_max: float) -> float:
    """``C'(x_max) = (e^{αK·x_max} - 1)/x_max``; ``e^{αKx} - 1 ≤ C'·x`` on ``(0, x_max]``."""
    require_nonnegative("alpha", alpha)
    require_nonnegative("K", K)
    require_nonnegative("x_max", x_max)
    if x_max == 0:
        return alpha * K
    if alpha * K * x_max > MAX_EXPONENT:
        return math.inf
    return math.expm1(alpha * K * x_max) / x_max


def projective_distance_bound(
    alpha: float,
    kappa: float,
    sigma_norm_alpha: float,
    L_C_alpha: float,
    K: Optional[float] = None,
) -> ProjectiveBound:
    """Distance bound ``(½ + ‖Σ_α‖∞)(e^{αK·L_𝒞(α)} - 1)`` and ``C = bound / L_𝒞(α)``.

    ``K`` defaults to :func:`projective_slope`. When ``L_𝒞(α) = 0`` the constant is
    its limit ``(½ + ‖Σ_α‖∞)·αK``. Both values are ``inf`` once ``αK·L_𝒞(α)``
    exceeds ``MAX_EXPONENT``.
    """
    require_positive("alpha", alpha)
    require_nonnegative("sigma_norm_alpha", sigma_norm_alpha)
    require_nonnegative("L_C_alpha", L_C_alpha)
    K = projective_slope(kappa) if K is None else K
    if alpha * K * L_C_alpha > MAX_EXPONENT:
        logger.debug(f"DEBUG: projective bound overflows for alpha={alpha}, K={K}, L_C={L_C_alpha}")
        return ProjectiveBound(ProjectiveGap(math.inf), math.inf)

    base = 0.5 + sigma_norm_alpha
    sigma_bound = base * math.expm1(alpha * K * L_C_alpha)
    C = base * affine_majorant(alpha, K, L_C_alpha)
    logger.debug(
        f"DEBUG: projective bound alpha={alpha} kappa={kappa} K={K} "
        f"L_C={L_C_alpha} -> sigma_bound={sigma_bound}, C={C}"
    )
    return ProjectiveBound(ProjectiveGap(sigma_bound), C)


def projective_distance_ode(
    alpha: float,
    kappa: float,
    sigma_norm_alpha: float,
    L_C_alpha: float,
    steps: int = 256,
    K: Optional[float] = None,
) -> float:
    """RK4 value of the distance bound from ``ds/dτ = K·L_𝒞·(½ + ‖Σ_α‖∞ + s)``, ``s(0) = 0``.

    ``τ = α - t`` runs from 0 to ``α``.
    """
    require_positive("alpha", alpha)
    K = projective_slope(kappa) if K is None else K

    def rate(tau: float, s: float) -> float:
        return K * L_C_alpha * (0.5 + sigma_norm_alpha + s)

    return float(rk4_integrate(rate, 0.0, [0.0, alpha], substeps=steps)[-1])
