"""Tube radii, boundary areas and boundary-torus shape of cone singularities."""
import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

from scipy import optimize

from src.geometry.base import DomainError, require_positive

logger = logging.getLogger(__name__)

# Radius sinh⁻¹√2 below which the tube estimates stop applying.
MIN_TUBE_RADIUS = math.asinh(math.sqrt(2))
HK_AREA_CONSTANT = 1.6978
NORMALIZED_AREA = 0.5


@dataclass(frozen=True)
class TubeParams:
    """Tube about a cone axis, normalized so its boundary torus has area ½."""

    angle: float
    core_length: float
    radius: float
    boundary_area: float

    def __post_init__(self) -> None:
        for name in ("angle", "core_length", "radius", "boundary_area"):
            require_positive(name, getattr(self, name))
        expected = self.angle * self.core_length * math.sinh(self.radius) * math.cosh(self.radius)
        if abs(expected - self.boundary_area) > 1e-10 * self.boundary_area:
            raise DomainError(
                f"Boundary area {self.boundary_area} disagrees with angle·L·sinh R·cosh R = {expected}"
            )


class TorusShape(NamedTuple):
    height: float
    circumference: float
    four_H_sq: float


def tube_radius(angle: float, core_length: float) -> float:
    """Radius ``R`` with ``angle·L·sinh R·cosh R = ½``, i.e. ``sinh 2R = 1/(angle·L)``."""
    require_positive("angle", angle)
    require_positive("core_length", core_length)
    return math.asinh(1.0 / (angle * core_length)) / 2


def tube_radius_bisection(angle: float, core_length: float) -> float:
    """Bracketing root find of the monotone area product; oracle for :func:`tube_radius`."""
    require_positive("angle", angle)
    require_positive("core_length", core_length)

    def excess(R: float) -> float:
        return angle * core_length * math.sinh(R) * math.cosh(R) - NORMALIZED_AREA

    upper = 1.0
    while excess(upper) < 0:
        upper *= 2
    return optimize.brentq(excess, 0.0, upper, xtol=1e-15, maxiter=500)


def tube_params(angle: float, core_length: float) -> TubeParams:
    """Solve for the normalized tube and bundle it with its reconstructed boundary area."""
    radius = tube_radius(angle, core_length)
    area = angle * core_length * math.sinh(radius) * math.cosh(radius)
    logger.debug(f"DEBUG: tube for angle={angle}, L={core_length}: R={radius}, area={area}")
    return TubeParams(angle, core_length, radius, area)


def hk_area_lower_bound(R: float) -> float:
    """Lower bound ``1.6978·sinh²R / cosh 2R`` on the boundary area of a maximal tube."""
    require_positive("R", R)
    if R > 350:
        return HK_AREA_CONSTANT / 2
    return HK_AREA_CONSTANT * math.sinh(R) ** 2 / math.cosh(2 * R)


def ell0_explicit_component(alpha: float) -> float:
    """``ℓ₃ = 1/(2√6·α)``: the explicit part of the short-length threshold ℓ₀."""
    require_positive("alpha", alpha)
    return 1.0 / (2 * math.sqrt(6) * alpha)


def short_geodesic_threshold(alpha: float, ell0: float) -> float:
    """``e^{-4αℓ₀}·ℓ₀``: geodesics this short stay below ℓ₀ along the whole flow."""
    require_positive("alpha", alpha)
    require_positive("ell0", ell0)
    return math.exp(-4 * alpha * ell0) * ell0


def torus_shape(t: float, L: float, R: float) -> TorusShape:
    """Cylinder height, circumference and the ratio ``(L cosh R)² / (t L sinh R cosh R)``."""
    require_positive("t", t)
    require_positive("L", L)
    require_positive("R", R)
    height = L * math.cosh(R)
    circumference = t * math.sinh(R)
    four_H_sq = height ** 2 / (t * L * math.sinh(R) * math.cosh(R))
    return TorusShape(height, circumference, four_H_sq)


def normbound_tube_ratio(R: float) -> float:
    """``2cosh³R / (sinh R·(2cosh²R + 1))``, the factor on L² in the tube term of the norm bound."""
    require_positive("R", R)
    cosh = math.cosh(R)
    return 2 * cosh ** 3 / (math.sinh(R) * (2 * cosh ** 2 + 1))


def tube_energy_factor(R: float, area: float = NORMALIZED_AREA) -> float:
    """``tanh R·(2 + sech²R)·area``: energy of the standard radial form per unit derivative.

    At ``R = sinh⁻¹√2`` with area ½ this is ``√(2/3)·(7/3)·½ > ¼``.
    """
    require_positive("R", R)
    require_positive("area", area)
    return math.tanh(R) * (2 + 1 / math.cosh(R) ** 2) * area
