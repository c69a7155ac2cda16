"""Differential inequalities along the cone-angle flow and their integrated envelopes.

Every envelope is anchored at the known datum ``t = α`` and integrated backwards
towards smaller cone angles. Twists are handled on a continuous lift; reduction
modulo the cone angle happens only when values are presented.
"""
import bisect
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from src.geometry.base import (
    DegenerateBoundError,
    DomainError,
    require_nonnegative,
    require_positive,
)
from src.geometry.hyperbolic_core import ball_volume
from src.geometry.meanvalue_kernels import STRAIN_RADIUS_LIMIT, strain_f
from src.utils.numerics import rk4_integrate

logger = logging.getLogger(__name__)

QUANTITIES = ("cone_length", "geodesic_length", "twist", "cusp_drift")
SQRT_TWO_THIRDS = math.sqrt(2.0 / 3.0)


def _exp(x: float) -> float:
    return math.exp(x) if x < 709 else math.inf


@dataclass(frozen=True)
class FlowEnvelope:
    """Lower and upper bound curves for one monitored quantity on an increasing grid."""

    quantity: str
    grid: Tuple[float, ...]
    lower: Tuple[float, ...]
    upper: Tuple[float, ...]
    flags: Tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.quantity not in QUANTITIES:
            raise DomainError(f"Unknown envelope quantity: {self.quantity}")
        object.__setattr__(self, "grid", tuple(float(t) for t in self.grid))
        object.__setattr__(self, "lower", tuple(float(v) for v in self.lower))
        object.__setattr__(self, "upper", tuple(float(v) for v in self.upper))
        if not len(self.grid) == len(self.lower) == len(self.upper):
            raise DomainError("Envelope grid and bound curves must have equal length")
        if len(self.grid) < 1:
            raise DomainError("Envelope needs at least one grid point")
        if any(b <= a for a, b in zip(self.grid[:-1], self.grid[1:])):
            raise DomainError("Envelope grid must be strictly increasing")
        for lo, hi in zip(self.lower, self.upper):
            if lo > hi + 1e-12 * max(1.0, abs(hi)):
                raise DomainError(f"Envelope lower bound {lo} exceeds upper bound {hi}")

    def rows(self) -> List[Tuple[float, float, float]]:
        return list(zip(self.grid, self.lower, self.upper))


class Bounds(NamedTuple):
    lo: float
    hi: float


class ControlConstants(NamedTuple):
    K: float
    A: float
    epsilon2: float


def angle_grid(alpha: float, points: int, start_fraction: float) -> np.ndarray:
    """Equispaced cone angles on ``[start_fraction·α, α]``."""
    require_positive("alpha", alpha)
    if points < 2:
        raise DomainError(f"An angle grid needs at least two points, got {points}")
    return np.linspace(start_fraction * alpha, alpha, points)


def _validate_grid(alpha: float, grid: Sequence[float]) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 1:
        raise DomainError("Grid must be a non-empty sequence of angles")
    if np.any(grid <= 0) or np.any(grid > alpha):
        raise DomainError(f"Grid must lie in (0, {alpha}]")
    if np.any(np.diff(grid) <= 0):
        raise DomainError("Grid must be strictly increasing")
    return grid


def cone_derivative_bounds(t: float, L: float, R: float) -> Bounds:
    """``(L/t)(1 ∓ 1/sinh²R)``: the range of ``dL_c/dt`` for a tube of radius ``R``."""
    require_positive("t", t)
    require_positive("L", L)
    require_positive("R", R)
    correction = 1.0 / math.sinh(R) ** 2 if R < 350 else 0.0
    base = L / t
    return Bounds(base * (1 - correction), base * (1 + correction))


def cone_length_envelope(alpha: float, L_alpha: float, t: float, strict: bool = False) -> Bounds:
    """Closed-form bounds ``tL/(α ± 2L(α² - t²))`` on the cone-axis length at angle ``t``.

    A non-positive upper denominator yields ``hi = inf``, or raises
    :class:`DegenerateBoundError` when ``strict``.
    """
    require_positive("alpha", alpha)
    require_nonnegative("L_alpha", L_alpha)
    if not 0 < t <= alpha:
        raise DomainError(f"Cone angle {t} must lie in (0, {alpha}]")
    if t == alpha:
        return Bounds(L_alpha, L_alpha)

    spread = 2 * L_alpha * (alpha ** 2 - t ** 2)
    lo = t * L_alpha / (alpha + spread)
    denominator = alpha - spread
    if denominator <= 0:
        if strict:
            raise DegenerateBoundError(f"Upper cone-length bound has denominator {denominator} at t={t}")
        logger.debug(f"DEBUG: upper cone-length bound degenerate at t={t}")
        return Bounds(lo, math.inf)
    return Bounds(lo, t * L_alpha / denominator)


def cone_length_curve(alpha: float, L_alpha: float, grid: Sequence[float]) -> FlowEnvelope:
    """:func:`cone_length_envelope` tabulated on a grid."""
    grid = _validate_grid(alpha, grid)
    bounds = [cone_length_envelope(alpha, L_alpha, float(t)) for t in grid]
    flags = ("bound_degenerate",) if any(math.isinf(b.hi) for b in bounds) else ()
    return FlowEnvelope(
        "cone_length", tuple(grid), tuple(b.lo for b in bounds), tuple(b.hi for b in bounds), flags
    )


def envelope_by_ode(
    alpha: float, L_alpha: float, grid: Sequence[float], substeps: int = 1
) -> FlowEnvelope:
    """Integrate ``L' = (L/t)(1 ± 4tL)`` backwards from ``L(α) = L_alpha`` with RK4.

    The ``+`` branch gives the lower curve and the ``-`` branch the upper one.
    Points where the upper branch has blown up are reported as ``inf``.
    """
    grid = _validate_grid(alpha, grid)
    require_nonnegative("L_alpha", L_alpha)

    backwards = [alpha] + [float(t) for t in grid[::-1] if t < alpha]

    def slower(t: float, L: float) -> float:
        return L / t * (1 + 4 * t * L)

    def faster(t: float, L: float) -> float:
        return L / t * (1 - 4 * t * L)

    lower = rk4_integrate(slower, L_alpha, backwards, substeps)
    upper = rk4_integrate(faster, L_alpha, backwards, substeps)
    if grid[-1] < alpha:
        lower, upper = lower[1:], upper[1:]
    lower = [float(v) for v in lower[::-1]]
    upper = [float(v) for v in upper[::-1]]
    flags = ("bound_degenerate",) if any(math.isinf(v) for v in upper) else ()
    return FlowEnvelope("cone_length", tuple(grid), tuple(lower), tuple(upper), flags)


def envelope_at(envelope: FlowEnvelope, t: float) -> Bounds:
    """Linear interpolation of an envelope at an angle inside its grid."""
    grid = envelope.grid
    if not grid[0] <= t <= grid[-1]:
        raise DomainError(f"Angle {t} lies outside the envelope grid [{grid[0]}, {grid[-1]}]")
    index = bisect.bisect_left(grid, t)
    if grid[index] == t:
        return Bounds(envelope.lower[index], envelope.upper[index])
    t0, t1 = grid[index - 1], grid[index]
    weight = (t - t0) / (t1 - t0)

    def blend(values: Tuple[float, ...]) -> float:
        a, b = values[index - 1], values[index]
        if math.isinf(a) or math.isinf(b):
            return math.inf
        return a + weight * (b - a)

    return Bounds(blend(envelope.lower), blend(envelope.upper))


def geodesic_derivative_bound(L_gamma: float, L_C: float) -> float:
    """``4·L_γ·L_𝒞``: bound on the derivative of a short geodesic's complex length."""
    require_nonnegative("L_gamma", L_gamma)
    require_nonnegative("L_C", L_C)
    return 4 * L_gamma * L_C


def geodesic_length_envelope(L_gamma_alpha: float, L_C_alpha: float, alpha: float) -> Bounds:
    """Multiplicative factors ``e^{∓4αL_𝒞(α)}`` bracketing ``L_γ(t)/L_γ(α)``."""
    require_nonnegative("L_gamma_alpha", L_gamma_alpha)
    require_nonnegative("L_C_alpha", L_C_alpha)
    require_nonnegative("alpha", alpha)
    exponent = 4 * alpha * L_C_alpha
    return Bounds(math.exp(-exponent), _exp(exponent))


def geodesic_length_curve(
    L_gamma_alpha: float, L_C_alpha: float, alpha: float, grid: Sequence[float]
) -> FlowEnvelope:
    """``L_γ(α)·e^{∓4(α - t)L_𝒞(α)}`` on a grid; at ``t → 0`` this is :func:`geodesic_length_envelope`."""
    grid = _validate_grid(alpha, grid)
    require_nonnegative("L_gamma_alpha", L_gamma_alpha)
    require_nonnegative("L_C_alpha", L_C_alpha)
    exponents = 4 * (alpha - grid) * L_C_alpha
    with np.errstate(over="ignore"):
        upper = L_gamma_alpha * np.exp(exponents)
    return FlowEnvelope(
        "geodesic_length",
        tuple(grid),
        tuple(L_gamma_alpha * np.exp(-exponents)),
        tuple(upper),
    )


def geodesic_length_by_ode(
    L_gamma_alpha: float,
    L_C_alpha: float,
    alpha: float,
    grid: Sequence[float],
    control: Callable[[float], float],
    substeps: int = 4,
) -> List[float]:
    """Trajectory of ``L' = control(t)·4·L·L_𝒞(α)`` from ``L(α)``, with ``|control| ≤ 1``.

    Any such trajectory is admissible under the derivative bound, so it must
    stay inside :func:`geodesic_length_curve`.
    """
    grid = _validate_grid(alpha, grid)
    backwards = [alpha] + [float(t) for t in grid[::-1] if t < alpha]

    def rate(t: float, L: float) -> float:
        return max(-1.0, min(1.0, control(t))) * 4 * L * L_C_alpha

    values = rk4_integrate(rate, L_gamma_alpha, backwards, substeps)
    if grid[-1] < alpha:
        values = values[1:]
    return [float(v) for v in values[::-1]]


def twist_envelope(theta_alpha: float, ell0: float, L_C_alpha: float) -> Bounds:
    """``(1 ∓ 4ℓ₀L_𝒞(α))·Θ(α)`` on the lifted twist."""
    require_nonnegative("theta_alpha", theta_alpha)
    require_nonnegative("ell0", ell0)
    require_nonnegative("L_C_alpha", L_C_alpha)
    if theta_alpha == 0:
        return Bounds(0.0, 0.0)
    spread = 4 * ell0 * L_C_alpha if L_C_alpha > 0 else 0.0
    return Bounds((1 - spread) * theta_alpha, (1 + spread) * theta_alpha)


def twist_curve(
    theta_alpha: float, ell0: float, L_C_alpha: float, alpha: float, grid: Sequence[float]
) -> FlowEnvelope:
    """Integrated twist band ``Θ(α) ∓ 4ℓ₀L_𝒞(α)(α - t)`` from ``|Θ'| ≤ 4ℓ₀L_𝒞(α)``."""
    grid = _validate_grid(alpha, grid)
    require_nonnegative("ell0", ell0)
    require_nonnegative("L_C_alpha", L_C_alpha)
    remaining = alpha - grid
    if math.isinf(ell0):
        # Unbounded away from t = α, where the band pins to the datum.
        drift = np.where((remaining > 0) & (L_C_alpha > 0), math.inf, 0.0)
    else:
        drift = 4 * ell0 * L_C_alpha * remaining
    return FlowEnvelope("twist", tuple(grid), tuple(theta_alpha - drift), tuple(theta_alpha + drift))


def pointwise_derivative_bound(K: float, L_gamma: float) -> float:
    """``√(2/3)·K·L_γ`` for a geodesic along which the deformation has pointwise norm ≤ K."""
    require_nonnegative("K", K)
    require_nonnegative("L_gamma", L_gamma)
    return SQRT_TWO_THIRDS * K * L_gamma


def controllengths_constants(
    L: float, delta: float, K1: float, vol_B_delta: Optional[float] = None
) -> ControlConstants:
    """Assemble ``K``, ``A = √(2/3)·K`` and ``ε₂ = ln 2 / A`` from the mean-value estimate.

    ``K = 3√(2·vol(B_δ))·K1 / (2π·f(δ))``. ``L`` bounds the geodesic length and
    only enters through the non-constructive inputs ``delta`` and ``K1``.
    """
    require_positive("L", L)
    require_positive("K1", K1)
    if not 0 < delta < STRAIN_RADIUS_LIMIT:
        raise DomainError(f"delta={delta} must lie in (0, π/√2)")
    volume = ball_volume(delta) if vol_B_delta is None else vol_B_delta
    require_positive("vol_B_delta", volume)

    K = 3 * math.sqrt(2 * volume) * K1 / (2 * math.pi * strain_f(delta))
    A = SQRT_TWO_THIRDS * K
    return ControlConstants(K, A, doubling_epsilon(A))


def doubling_epsilon(A: float) -> float:
    """``ln 2 / A``: total cone length below which lengths change by at most a factor 2."""
    require_positive("A", A)
    return math.log(2) / A


def controlled_length_factors(A: float, L_C: float) -> Bounds:
    """``e^{∓A·L_𝒞}`` length factors."""
    require_nonnegative("A", A)
    require_nonnegative("L_C", L_C)
    return Bounds(math.exp(-A * L_C), _exp(A * L_C))


def controlled_twist_factors(A: float, L_C: float) -> Bounds:
    """``1 ∓ A·L_𝒞`` twist factors."""
    require_nonnegative("A", A)
    require_nonnegative("L_C", L_C)
    return Bounds(1 - A * L_C, 1 + A * L_C)


def cusp_drift_bound(alpha: float, L_C_alpha: float) -> float:
    """``α·L_𝒞(α)``: hyperbolic path length of a cusp's Teichmüller parameter over ``[0, α]``."""
    require_nonnegative("alpha", alpha)
    require_nonnegative("L_C_alpha", L_C_alpha)
    return alpha * L_C_alpha


def cusp_drift_curve(alpha: float, L_C_alpha: float, grid: Sequence[float]) -> FlowEnvelope:
    """Accumulated drift ``(α - t)·L_𝒞(α)`` as the upper curve over a zero lower curve."""
    grid = _validate_grid(alpha, grid)
    require_nonnegative("L_C_alpha", L_C_alpha)
    upper = (alpha - grid) * L_C_alpha
    return FlowEnvelope("cusp_drift", tuple(grid), tuple(np.zeros_like(grid)), tuple(upper))


def cusp_shape_lower_bound(tau_alpha: complex, drift: float) -> float:
    """``Im τ_α·e^{-drift}``: lowest imaginary part reachable within hyperbolic distance ``drift``."""
    tau_alpha = complex(tau_alpha)
    if tau_alpha.imag <= 0:
        raise DomainError(f"Cusp shape {tau_alpha} must lie in the upper half-plane")
    require_nonnegative("drift", drift)
    return tau_alpha.imag * math.exp(-drift)
