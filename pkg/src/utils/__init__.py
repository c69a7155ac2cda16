"""Shared numerical helpers and settings."""
from .numerics import (
    central_radial_derivatives,
    contour_derivatives,
    midpoint_rule,
    rk4_integrate,
    rk4_step,
    trapezoid_rule,
)
from .settings import NumericsSettings, get_settings

__all__ = [
    'NumericsSettings',
    'get_settings',
    'central_radial_derivatives',
    'contour_derivatives',
    'midpoint_rule',
    'rk4_integrate',
    'rk4_step',
    'trapezoid_rule',
]
