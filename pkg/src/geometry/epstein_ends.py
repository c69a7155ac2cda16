"""Scalar geometry of Epstein surfaces in geometrically finite ends."""
import logging
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np
from scipy import optimize

from src.geometry.base import CurvaturePoleError, DomainError, require_nonnegative
from src.geometry.quadratic_differentials import embedded_disk_factor
from src.utils.settings import get_settings

logger = logging.getLogger(__name__)


class Eigenvalues(NamedTuple):
    lambda1: float
    lambda2: float
    lambda3: float


class Curvatures(NamedTuple):
    kappa1: float
    kappa2: float


@dataclass(frozen=True)
class EpsteinFrame:
    """Derivative eigenvalues and principal curvatures at one point of depth ``d``."""

    phi_norm: float
    depth: float
    eigenvalues: Eigenvalues
    curvatures: Optional[Curvatures]

    def __post_init__(self) -> None:
        require_nonnegative("phi_norm", self.phi_norm)
        l1, l2, l3 = self.eigenvalues
        if l3 != 1 or abs(l1 + l2 - 2) > 1e-12 or l1 < l2:
            raise DomainError(f"Invalid eigenvalue triple {self.eigenvalues}")


def _q(phi_norm: float, d: float) -> float:
    return phi_norm / (4 * math.exp(d) * math.cosh(d))


def psi_derivative_eigenvalues(phi_norm: float, d: float) -> Eigenvalues:
    """Eigenvalues ``(1 + q, 1 - q, 1)`` with ``q = ‖Φ(z)‖ / (4e^d cosh d)``."""
    require_nonnegative("phi_norm", phi_norm)
    lambda1 = 1 + _q(phi_norm, d)
    return Eigenvalues(lambda1, 2 - lambda1, 1.0)


def immersion_depth(phi_sup: float) -> float:
    """Smallest ``d`` with ``4e^d cosh d ≥ ‖Φ‖∞``; ``-inf`` when every depth qualifies.

    ``4e^d cosh d = 2e^{2d} + 2``, so the threshold is ``½·ln((‖Φ‖∞ - 2)/2)``.
    """
    require_nonnegative("phi_sup", phi_sup)
    if phi_sup <= 2:
        return -math.inf
    return 0.5 * math.log((phi_sup - 2) / 2)


def immersion_depth_bisection(phi_sup: float) -> float:
    """Root of ``4e^d cosh d = ‖Φ‖∞`` by bracketing; oracle for :func:`immersion_depth`."""
    require_nonnegative("phi_sup", phi_sup)
    if phi_sup <= 2:
        return -math.inf

    def excess(d: float) -> float:
        return 4 * math.exp(d) * math.cosh(d) - phi_sup

    lower, upper = -1.0, 1.0
    while excess(lower) > 0:
        lower *= 2
    while excess(upper) < 0:
        upper *= 2
    return optimize.brentq(excess, lower, upper, xtol=1e-15, maxiter=500)


def _curvature_terms(phi_norm: float, d: float) -> Tuple[float, float, float, float]:
    # Numerator and denominator of each curvature after clearing the k_i denominators,
    # so that ‖Φ(z)‖ = 1 needs no special case.
    s, c = math.sinh(d), math.cosh(d)
    num1 = s * (phi_norm - 1) - phi_norm * c
    den1 = c * (phi_norm - 1) - phi_norm * s
    num2 = s * (phi_norm + 1) - phi_norm * c
    den2 = c * (phi_norm + 1) - phi_norm * s
    return num1, den1, num2, den2


def principal_curvatures(phi_norm: float, d: float) -> Curvatures:
    """Curvatures ``(sinh d + kᵢ cosh d)/(cosh d + kᵢ sinh d)`` with ``k₁ = -p/(p - 1)``, ``k₂ = -p/(p + 1)``.

    At ``p = 1`` the first curvature is the limit ``coth d``.
    """
    require_nonnegative("phi_norm", phi_norm)
    num1, den1, num2, den2 = _curvature_terms(phi_norm, d)
    scale = math.cosh(d) * (1 + phi_norm)
    if abs(den1) <= 1e-15 * scale or abs(den2) <= 1e-15 * scale:
        raise CurvaturePoleError(f"Principal curvature undefined at phi_norm={phi_norm}, d={d}")
    return Curvatures(num1 / den1, num2 / den2)


def epstein_frame(phi_norm: float, d: float) -> EpsteinFrame:
    """Eigenvalues and, where defined, principal curvatures at ``(phi_norm, d)``."""
    try:
        curvatures = principal_curvatures(phi_norm, d)
    except CurvaturePoleError:
        curvatures = None
    return EpsteinFrame(phi_norm, d, psi_derivative_eigenvalues(phi_norm, d), curvatures)


def curvature_pole(d: float) -> float:
    """Value ``e^d cosh d`` of ``‖Φ(z)‖`` at which the first curvature has its pole."""
    return math.exp(d) * math.cosh(d)


def curvature_range(phi_sup: float, d: float, samples: Optional[int] = None) -> Tuple[float, float]:
    """Minimum and maximum principal curvature over ``‖Φ(z)‖ ∈ [0, phi_sup]``."""
    require_nonnegative("phi_sup", phi_sup)
    samples = get_settings().curvature_samples if samples is None else samples
    if _has_pole_on(phi_sup, d):
        raise CurvaturePoleError(
            f"First principal curvature has a pole in [0, {phi_sup}] at depth {d}"
        )
    values = []
    for p in np.linspace(0.0, phi_sup, samples):
        values.extend(principal_curvatures(float(p), d))
    return min(values), max(values)


def _has_pole_on(phi_sup: float, d: float) -> bool:
    # den1(p) = p·e^{-d} - cosh d is linear in p and negative at p = 0.
    _, den1_end, _, _ = _curvature_terms(phi_sup, d)
    return den1_end >= 0


def convexity_check(phi_sup: float, d: float, samples: Optional[int] = None) -> bool:
    """True when both principal curvatures stay strictly positive for ``‖Φ(z)‖ ≤ phi_sup``."""
    try:
        lowest, _ = curvature_range(phi_sup, d, samples)
    except CurvaturePoleError:
        logger.debug(f"DEBUG: curvature pole for phi_sup={phi_sup}, d={d}")
        return False
    return lowest > 0


def embedding_depth(kappa: float, sigma_norm: float) -> float:
    """``ln(coth(κ/2)·√(1 + 2‖Σ‖∞))``: depth beyond which the end embeds disjoint from the tubes."""
    return math.log(embedded_disk_factor(kappa, sigma_norm))


def diffeomorphism_depth(sigma_norm: float) -> float:
    """``½·ln(2‖Σ‖∞ + 1)``: depth beyond which the Epstein map is a diffeomorphism."""
    require_nonnegative("sigma_norm", sigma_norm)
    return 0.5 * math.log(2 * sigma_norm + 1)
