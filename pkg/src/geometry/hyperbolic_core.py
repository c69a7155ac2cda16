"""Elementary hyperbolic-geometry primitives shared by every other module.

Conventions: the hyperbolic metric has curvature -1 everywhere, so the unit
disk carries the density ``2 / (1 - |z|^2)`` and the upper half-plane ``1 / y``.
"""
import cmath
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
from scipy import integrate

from src.geometry.base import DomainError, ParabolicElementError, require_positive
from src.utils.numerics import central_radial_derivatives, contour_derivatives
from src.utils.settings import get_settings

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
INFINITY = math.inf
# Relative size of imaginary parts tolerated in contour derivatives of real-analytic f.
CONTOUR_IMAG_TOLERANCE = 1e-8

ExtendedComplex = Union[complex, float]


def is_infinite(z: ExtendedComplex) -> bool:
    """True for the point at infinity of the Riemann sphere."""
    return cmath.isinf(complex(z))


@dataclass(frozen=True)
class Mobius:
    """Element of PSL(2, C) stored as a determinant-one matrix."""

    a: complex
    b: complex
    c: complex
    d: complex

    @classmethod
    def from_matrix(cls, a: complex, b: complex, c: complex, d: complex) -> "Mobius":
        """Normalize ``[[a, b], [c, d]]`` to determinant one."""
        det = complex(a) * d - complex(b) * c
        if abs(det) == 0:
            raise DomainError(f"Singular matrix ({a}, {b}, {c}, {d}) is not a Mobius map")
        root = cmath.sqrt(det)
        return cls(complex(a) / root, complex(b) / root, complex(c) / root, complex(d) / root)

    @classmethod
    def identity(cls) -> "Mobius":
        return cls(1 + 0j, 0j, 0j, 1 + 0j)

    @property
    def determinant(self) -> complex:
        return self.a * self.d - self.b * self.c

    def is_normalized(self, tolerance: Optional[float] = None) -> bool:
        tolerance = get_settings().mobius_tolerance if tolerance is None else tolerance
        return abs(self.determinant - 1) <= tolerance

    def compose(self, other: "Mobius") -> "Mobius":
        """Return ``self ∘ other``."""
        return Mobius.from_matrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "Mobius":
        return Mobius(self.d, -self.b, -self.c, self.a)

    def trace(self) -> complex:
        return self.a + self.d

    def derivative(self, z: complex) -> complex:
        """Complex derivative ``1 / (cz + d)^2`` at a finite, non-polar point."""
        denominator = self.c * z + self.d
        if denominator == 0:
            raise DomainError(f"{z} is the pole of {self}")
        return 1.0 / denominator ** 2

    def __call__(self, z: ExtendedComplex) -> ExtendedComplex:
        return mobius_apply(self, z)


@dataclass(frozen=True)
class ComplexLength:
    """Length and twist of a closed geodesic or cone axis.

    ``twist`` is the canonical representative in ``[0, twist_modulus)`` while
    ``lifted_twist`` keeps the continuous-branch value it was reduced from.
    """

    length: float
    twist: float
    twist_modulus: float = TWO_PI
    lifted_twist: Optional[float] = None

    def __post_init__(self) -> None:
        if self.length < 0:
            raise DomainError(f"Complex length must have non-negative real part, got {self.length}")
        require_positive("twist_modulus", self.twist_modulus)
        if not 0 <= self.twist < self.twist_modulus:
            raise DomainError(
                f"Twist {self.twist} is not reduced modulo {self.twist_modulus}"
            )

    @classmethod
    def from_lifted(
        cls, length: float, lifted_twist: float, twist_modulus: float = TWO_PI
    ) -> "ComplexLength":
        canonical = math.fmod(lifted_twist, twist_modulus)
        if canonical < 0:
            canonical += twist_modulus
        if canonical >= twist_modulus:
            canonical = 0.0
        return cls(length, canonical, twist_modulus, lifted_twist)

    def as_complex(self) -> complex:
        twist = self.twist if self.lifted_twist is None else self.lifted_twist
        return complex(self.length, twist)


@dataclass(frozen=True)
class RoundDisk:
    """Round disk in the plane chart, or the upper half-plane when ``half_plane``."""

    center: complex = 0j
    radius: float = 1.0
    half_plane: bool = False

    def __post_init__(self) -> None:
        if not self.half_plane:
            require_positive("disk radius", self.radius)

    @classmethod
    def unit(cls) -> "RoundDisk":
        return cls()

    @classmethod
    def upper_half_plane(cls) -> "RoundDisk":
        return cls(half_plane=True)

    def contains(self, z: complex) -> bool:
        if is_infinite(z):
            return False
        if self.half_plane:
            return complex(z).imag > 0
        return abs(complex(z) - self.center) < self.radius


def mobius_apply(m: Mobius, z: ExtendedComplex) -> ExtendedComplex:
    """Evaluate ``(az + b) / (cz + d)`` on the extended plane."""
    if is_infinite(z):
        if m.c == 0:
            return INFINITY
        return m.a / m.c
    denominator = m.c * z + m.d
    if denominator == 0:
        return INFINITY
    return (m.a * z + m.b) / denominator


def mobius_compose(m: Mobius, n: Mobius) -> Mobius:
    return m.compose(n)


def mobius_inverse(m: Mobius) -> Mobius:
    return m.inverse()


def complex_length_from_trace(
    tr: complex,
    twist_modulus: float = TWO_PI,
    tolerance: Optional[float] = None,
) -> ComplexLength:
    """Complex length ``2·arccosh(tr/2)`` of a loxodromic or elliptic element.

    The principal branch of arccosh has non-negative real part, which is the
    length. Traces with ``|tr^2 - 4|`` below the tolerance are parabolic.
    """
    tolerance = get_settings().parabolic_tolerance if tolerance is None else tolerance
    tr = complex(tr)
    if abs(tr * tr - 4) < tolerance:
        raise ParabolicElementError(f"Trace {tr} is parabolic: no geodesic representative")

    value = 2 * cmath.acosh(tr / 2)
    if value.real < 0:
        value = -value
    logger.debug(f"DEBUG: trace {tr} has complex length {value}")
    return ComplexLength.from_lifted(value.real, value.imag, twist_modulus)


def trace_from_complex_length(length: float, twist: float) -> complex:
    """Trace ``2·cosh(ℒ/2)`` of the loxodromic with complex length ``length + i·twist``."""
    return 2 * cmath.cosh(complex(length, twist) / 2)


def loxodromic(length: float, twist: float) -> Mobius:
    """Diagonal representative ``z ↦ e^{ℒ} z`` with complex length ``ℒ``."""
    half = cmath.exp(complex(length, twist) / 2)
    return Mobius(half, 0j, 0j, 1 / half)


def ball_volume(R: float) -> float:
    """Volume ``π(sinh 2R - 2R)`` of a hyperbolic ball of radius ``R``."""
    require_positive("ball radius", R)
    if R < 1e-2:
        # Taylor series of 4π∫sinh² avoids cancellation in sinh 2R - 2R.
        return 4 * math.pi * (R ** 3 / 3 + R ** 5 / 15 + 2 * R ** 7 / 315)
    return math.pi * (math.sinh(2 * R) - 2 * R)


def ball_volume_quadrature(R: float) -> float:
    """Adaptive quadrature of ``4π∫₀^R sinh² r dr``."""
    require_positive("ball radius", R)
    value, _ = integrate.quad(lambda r: math.sinh(r) ** 2, 0.0, R, epsabs=0.0, epsrel=1e-13)
    return 4 * math.pi * value


def disk_density(D: RoundDisk, z: complex) -> float:
    """Curvature -1 hyperbolic density of ``D`` at ``z``."""
    if not D.contains(z):
        raise DomainError(f"{z} does not lie inside {D}")
    if D.half_plane:
        return 1.0 / complex(z).imag
    distance_sq = abs(complex(z) - D.center) ** 2
    return 2 * D.radius / (D.radius ** 2 - distance_sq)


def disk_to_unit(D: RoundDisk, z: complex) -> Mobius:
    """Möbius map sending ``D`` onto the unit disk and ``z`` to 0."""
    if not D.contains(z):
        raise DomainError(f"{z} does not lie inside {D}")
    z = complex(z)
    if D.half_plane:
        return Mobius.from_matrix(1, -z, 1, -z.conjugate())
    scale = Mobius.from_matrix(1, -D.center, 0, D.radius)
    w = complex(scale(z))
    recenter = Mobius.from_matrix(1, -w, -w.conjugate(), 1)
    return recenter.compose(scale)


def disk_automorphism(z: complex) -> Mobius:
    """Automorphism ``w ↦ (w + z) / (1 + z̄w)`` of the unit disk taking 0 to ``z``."""
    z = complex(z)
    if abs(z) >= 1:
        raise DomainError(f"{z} does not lie inside the unit disk")
    return Mobius.from_matrix(1, z, z.conjugate(), 1)


def upper_half_plane_distance(tau1: complex, tau2: complex) -> float:
    """Hyperbolic distance on the upper half-plane (the Teichmüller space of a torus)."""
    tau1, tau2 = complex(tau1), complex(tau2)
    if tau1.imag <= 0 or tau2.imag <= 0:
        raise DomainError(f"Points {tau1}, {tau2} must lie in the upper half-plane")
    ratio = abs(tau1 - tau2) ** 2 / (2 * tau1.imag * tau2.imag)
    return math.acosh(1 + ratio)


def radial_laplacian(
    f: Callable,
    r: float,
    method: str = "central",
    step: Optional[float] = None,
) -> float:
    """Radial part ``f''(r) + 2·coth(r)·f'(r)`` of the Laplacian on hyperbolic 3-space.

    This is ``-Δf`` for the positive Laplacian ``Δ = ∇*∇``. The default
    ``central`` method uses real central differences with step
    ``fd_step·max(1, r)``. ``contour`` samples ``f`` on a small complex circle
    about ``r``; ``f`` must then be holomorphic there and accept complex
    arguments.
    """
    require_positive("radius", r)
    first, second = radial_derivatives(f, r, method=method, step=step)
    return second + 2 * first / math.tanh(r)


def radial_derivatives(
    f: Callable,
    r: float,
    method: str = "central",
    step: Optional[float] = None,
) -> tuple:
    """Numerical ``(f'(r), f''(r))`` by the method described in :func:`radial_laplacian`."""
    settings = get_settings()
    if method == "contour":
        radius = settings.contour_radius_fraction * r
        try:
            values = contour_derivatives(f, r, radius, settings.contour_points, order=2)
        except (TypeError, ValueError) as exc:
            raise DomainError(f"Contour derivative of f at r={r} failed, use method='central': {exc}") from exc
        scale = max(1.0, float(np.max(np.abs(values))))
        if np.max(np.abs(values.imag)) > CONTOUR_IMAG_TOLERANCE * scale:
            raise DomainError(
                f"Contour derivatives of f at r={r} are not real; "
                f"f must be holomorphic and accept complex arguments, or use method='central'"
            )
        return float(values[1].real), float(values[2].real)
    if method == "central":
        step = settings.fd_step * max(1.0, r) if step is None else step
        return central_radial_derivatives(f, r, step)
    raise ValueError(f"Unknown differentiation method: {method}")


def sample_radii(R: float, samples: int) -> np.ndarray:
    """Interior sample points ``[R/10, R)`` used by kernel verification."""
    return np.linspace(R / 10, R, samples + 1)[:-1]
