"""Holomorphic quadratic differentials on round disks.

A differential ``Φ = φ dz²`` is stored through the Taylor coefficients of ``φ``
on the unit disk; other disks are reached by Möbius pullback.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import integrate

from src.geometry.base import (
    CriticalPointError,
    DomainError,
    require_nonnegative,
    require_positive,
)
from src.geometry.hyperbolic_core import (
    Mobius,
    RoundDisk,
    disk_automorphism,
    disk_density,
)
from src.utils.numerics import contour_derivatives, trapezoid_rule
from src.utils.settings import get_settings

logger = logging.getLogger(__name__)

CENTER_BOUND_FACTOR = 2 * math.sqrt(math.pi / 3)


@dataclass(frozen=True)
class QuadDiff:
    """``Φ = φ dz²`` with ``φ(z) = Σ aₙ zⁿ`` on the unit disk."""

    coeffs: Tuple[complex, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(complex(a) for a in self.coeffs)
        if not coeffs:
            raise DomainError("A quadratic differential needs at least one coefficient")
        if not all(np.isfinite(a) for a in coeffs):
            raise DomainError(f"Non-finite Taylor coefficients: {coeffs}")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_coefficients(cls, coeffs: Sequence[complex]) -> "QuadDiff":
        return cls(tuple(coeffs))

    @classmethod
    def zero(cls) -> "QuadDiff":
        return cls((0j,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z: complex) -> complex:
        if abs(z) >= 1:
            raise DomainError(f"{z} lies outside the unit disk")
        return complex(P.polyval(complex(z), self.coeffs))

    def scale(self, c: complex) -> "QuadDiff":
        return QuadDiff(tuple(c * a for a in self.coeffs))


class ProjectiveGap(float):
    """Sup-norm distance in the space of projective structures; never negative."""

    def __new__(cls, value: float) -> "ProjectiveGap":
        require_nonnegative("projective distance", value)
        return super().__new__(cls, value)


class CenterBound(NamedTuple):
    lhs: float
    rhs: float


def schwarzian_of_map(
    f: Callable[[complex], complex],
    z: complex,
    radius: Optional[float] = None,
    points: Optional[int] = None,
    critical_tolerance: Optional[float] = None,
) -> complex:
    """Schwarzian derivative ``(f''/f')' - ½(f''/f')²`` at ``z``.

    Derivatives come from samples of ``f`` on a circle about ``z``; ``f`` must
    be holomorphic on a neighbourhood of that circle.
    """
    settings = get_settings()
    radius = settings.schwarzian_radius if radius is None else radius
    points = settings.schwarzian_points if points is None else points
    critical_tolerance = settings.critical_tolerance if critical_tolerance is None else critical_tolerance

    _, d1, d2, d3 = contour_derivatives(f, complex(z), radius, points, order=3)
    if abs(d1) < critical_tolerance:
        raise CriticalPointError(f"f'({z}) = {d1} vanishes: map is not locally univalent")
    return complex(d3 / d1 - 1.5 * (d2 / d1) ** 2)


def pointwise_norm(phi: QuadDiff, z: complex, D: Optional[RoundDisk] = None) -> float:
    """``σ_D(z)^-2 · |φ(z)|``."""
    D = RoundDisk.unit() if D is None else D
    density = disk_density(D, z)
    value = complex(P.polyval(complex(z), phi.coeffs))
    return abs(value) / density ** 2


def series_weight(n: int) -> float:
    """``∫₀¹ (1 - r²)² r^{2n+1} dr = 1 / ((n+1)(n+2)(n+3))``."""
    return 1.0 / ((n + 1) * (n + 2) * (n + 3))


def l2_norm_disk(phi: QuadDiff) -> float:
    """Hyperbolic L² norm on the unit disk, summed exactly from the Taylor series."""
    total = sum(abs(a) ** 2 * series_weight(n) for n, a in enumerate(phi.coeffs))
    return math.sqrt(math.pi / 2 * total)


def l2_norm_disk_quadrature(phi: QuadDiff) -> float:
    """Independent value of :func:`l2_norm_disk` by 2D adaptive quadrature in polar coordinates."""
    coeffs = phi.coeffs

    def integrand(theta: float, r: float) -> float:
        value = P.polyval(r * np.exp(1j * theta), coeffs)
        return abs(value) ** 2 * (1 - r * r) ** 2 / 4 * r

    value, _ = integrate.dblquad(
        integrand, 0.0, 1.0, 0.0, 2 * math.pi, epsabs=1e-15, epsrel=1e-12
    )
    return math.sqrt(value)


def pullback(phi: QuadDiff, m: Mobius, points: Optional[int] = None) -> QuadDiff:
    """Taylor coefficients of ``(φ∘m)·(m')²`` for an automorphism ``m`` of the unit disk."""
    points = get_settings().taylor_points if points is None else points
    centre = complex(m(0j))
    if abs(centre) >= 1:
        raise DomainError(f"{m} does not preserve the unit disk")

    nodes = np.exp(2j * np.pi * np.arange(points) / points)
    images = np.array([complex(m(w)) for w in nodes])
    derivatives = np.array([m.derivative(w) for w in nodes])
    samples = P.polyval(images, phi.coeffs) * derivatives ** 2
    coefficients = np.fft.fft(samples)[: points // 2] / points

    cutoff = 1e-15 * max(1.0, float(np.max(np.abs(coefficients))))
    significant = np.nonzero(np.abs(coefficients) > cutoff)[0]
    last = int(significant[-1]) if significant.size else 0
    return QuadDiff(tuple(coefficients[: last + 1]))


def center_bound_check(phi: QuadDiff, z: complex = 0j) -> CenterBound:
    """``‖Φ‖₂`` against ``2√(π/3)·‖Φ(z)‖``, evaluated after recentering ``z`` to 0."""
    if abs(z) >= 1:
        raise DomainError(f"{z} lies outside the unit disk")
    recentered = pullback(phi, disk_automorphism(z))
    lhs = l2_norm_disk(phi)
    rhs = CENTER_BOUND_FACTOR * abs(recentered.coeffs[0]) / 4
    logger.debug(f"DEBUG: center bound at {z}: lhs={lhs}, rhs={rhs}")
    return CenterBound(lhs, rhs)


def _validated_samples(norms: Sequence[Tuple[float, float]]) -> Tuple[np.ndarray, np.ndarray]:
    if len(norms) < 2:
        raise DomainError(f"A path length needs at least two samples, got {len(norms)}")
    t = np.array([sample[0] for sample in norms], dtype=float)
    values = np.array([sample[1] for sample in norms], dtype=float)
    if np.any(np.diff(t) <= 0):
        raise DomainError("Sample times must be strictly increasing")
    return t, values


def path_length(norms: Sequence[Tuple[float, float]]) -> float:
    """Trapezoid integral of ``‖Φ_t‖∞`` over the sampled path."""
    t, values = _validated_samples(norms)
    return trapezoid_rule(t, values)


def path_length_tolerance(norms: Sequence[Tuple[float, float]]) -> float:
    """Gap between the full trapezoid sum and the one on every other sample."""
    t, values = _validated_samples(norms)
    if len(t) < 3:
        return math.inf
    coarse = list(range(0, len(t), 2))
    if coarse[-1] != len(t) - 1:
        coarse.append(len(t) - 1)
    return abs(trapezoid_rule(t, values) - trapezoid_rule(t[coarse], values[coarse]))


def subdisk_density_ratio(ell: float) -> float:
    """``coth(ℓ/4)``: density of the embedded subdisk relative to the whole disk at its centre."""
    require_positive("ell", ell)
    return 1.0 / math.tanh(ell / 4)


def subdisk_radius(ell: float) -> float:
    """Euclidean radius ``tanh(ℓ/4)`` of the subdisk of hyperbolic diameter ``ℓ/2``."""
    require_positive("ell", ell)
    return math.tanh(ell / 4)


def embedded_disk_factor(kappa: float, sigma_norm: float) -> float:
    """``coth(κ/2)·√(1 + 2‖Σ‖∞)``: density inflation of an embedded round disk."""
    require_positive("kappa", kappa)
    require_nonnegative("sigma_norm", sigma_norm)
    return math.sqrt(1 + 2 * sigma_norm) / math.tanh(kappa / 2)
