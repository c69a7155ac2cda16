"""Low-level numerical building blocks: derivatives, quadrature rules and RK4.

All routines use fixed node sets and fixed step counts, so repeated calls on
the same input return bit-identical results.
"""
import logging
import math
import warnings
from typing import Callable, Sequence, Tuple, Union

import numpy as np

logger = logging.getLogger(__name__)

Scalar = Union[float, complex]
State = Union[float, np.ndarray]


def contour_derivatives(
    f: Callable[[complex], Scalar],
    z0: complex,
    radius: float,
    points: int,
    order: int,
) -> np.ndarray:
    """Return ``[f(z0), f'(z0), ..., f^(order)(z0)]`` from samples on a circle.

    ``f`` must be holomorphic on a neighbourhood of the closed disk of the given
    radius about ``z0`` and accept complex arguments. The Taylor coefficients
    are read off the discrete Fourier transform of the samples, so the aliasing
    error decays like ``(radius / distance_to_singularity) ** points``.

    Args:
        f: Function to differentiate.
        z0: Expansion point.
        radius: Radius of the sampling circle.
        points: Number of equispaced nodes on the circle.
        order: Highest derivative requested; must be below ``points``.

    Returns:
        np.ndarray: Complex array of length ``order + 1``.
    """
    if radius <= 0:
        raise ValueError(f"Contour radius must be positive, got {radius}")
    if order >= points:
        raise ValueError(f"Derivative order {order} needs more than {points} nodes")

    angles = 2.0 * np.pi * np.arange(points) / points
    nodes = z0 + radius * np.exp(1j * angles)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", np.exceptions.ComplexWarning)
            samples = np.array([complex(f(z)) for z in nodes], dtype=complex)
    except np.exceptions.ComplexWarning as exc:
        raise TypeError(f"f discards the imaginary part of its argument: {exc}") from exc
    # A non-constant holomorphic function cannot be real on a whole circle.
    if not np.any(samples.imag) and np.ptp(samples.real) > 0:
        raise ValueError("f returned only real values on the contour; it is not holomorphic there")
    coefficients = np.fft.fft(samples) / points

    derivatives = np.empty(order + 1, dtype=complex)
    for n in range(order + 1):
        derivatives[n] = math.factorial(n) * coefficients[n] / radius ** n
    return derivatives


def central_radial_derivatives(
    f: Callable[[float], float], r: float, step: float
) -> Tuple[float, float]:
    """Second-order central differences ``(f'(r), f''(r))`` with the given step."""
    forward = f(r + step)
    centre = f(r)
    backward = f(r - step)
    first = (forward - backward) / (2.0 * step)
    second = (forward - 2.0 * centre + backward) / step ** 2
    return first, second


def midpoint_rule(
    integrand: Callable[[np.ndarray], np.ndarray], a: float, b: float, panels: int
) -> float:
    """Composite midpoint rule on ``panels`` equal subintervals of ``[a, b]``."""
    if panels < 1:
        raise ValueError(f"Midpoint rule needs at least one panel, got {panels}")
    width = (b - a) / panels
    nodes = a + width * (np.arange(panels) + 0.5)
    return float(width * np.sum(integrand(nodes)))


def trapezoid_rule(t: Sequence[float], values: Sequence[float]) -> float:
    """Trapezoid integral of tabulated values."""
    return float(np.trapezoid(np.asarray(values, dtype=float), np.asarray(t, dtype=float)))


def rk4_step(
    fn: Callable[[float, State], State], t: float, y: State, h: float
) -> State:
    """Advance ``y' = fn(t, y)`` by one classical Runge-Kutta step of size ``h``."""
    k1 = h * fn(t, y)
    k2 = h * fn(t + h / 2, y + k1 / 2)
    k3 = h * fn(t + h / 2, y + k2 / 2)
    k4 = h * fn(t + h, y + k3)
    return y + (k1 + 2 * k2 + 2 * k3 + k4) / 6


def rk4_integrate(
    fn: Callable[[float, State], State],
    y0: State,
    t_points: Sequence[float],
    substeps: int = 1,
) -> list:
    """Integrate through ``t_points`` starting from ``y0`` at ``t_points[0]``.

    The points may run forwards or backwards; each interval between consecutive
    points is split into ``substeps`` equal RK4 steps. Integration stops early
    once the state stops being finite, and the remaining entries are ``inf``.

    Returns:
        list: State at every entry of ``t_points`` (first entry is ``y0``).
    """
    if substeps < 1:
        raise ValueError(f"substeps must be positive, got {substeps}")

    states = [y0]
    y = y0
    for start, end in zip(t_points[:-1], t_points[1:]):
        h = (end - start) / substeps
        if h == 0 or abs(h) < 1e-300:
            raise ValueError(f"RK4 step underflow between {start} and {end}")
        t = start
        for _ in range(substeps):
            y = rk4_step(fn, t, y, h)
            t = t + h
        if not np.all(np.isfinite(y)):
            logger.debug(f"DEBUG: RK4 state left the finite range at t={end}")
            remaining = len(t_points) - len(states)
            states.extend([math.inf] * remaining)
            return states
        states.append(y)
    return states
