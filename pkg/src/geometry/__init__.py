"""Geometry module initialization."""
from .base import (
    ConfigError,
    CriticalPointError,
    CurvaturePoleError,
    DegenerateBoundError,
    DomainError,
    ParabolicElementError,
    PinchingError,
)
from .hyperbolic_core import (
    ComplexLength,
    Mobius,
    RoundDisk,
    ball_volume,
    complex_length_from_trace,
    disk_density,
    mobius_apply,
    radial_laplacian,
)
from .quadratic_differentials import (
    QuadDiff,
    center_bound_check,
    l2_norm_disk,
    path_length,
    pointwise_norm,
    schwarzian_of_map,
)
from .tube_geometry import TubeParams, tube_params, tube_radius
from .drilling_flow import FlowEnvelope, QUANTITIES
from .epstein_ends import EpsteinFrame
from .halfspace_hodge import projective_distance_bound, schwarzian_sup_bound
from .meanvalue_kernels import MeanValueKernel, make_kernel, verify_kernel

__all__ = [
    'PinchingError',
    'DomainError',
    'ParabolicElementError',
    'CriticalPointError',
    'CurvaturePoleError',
    'DegenerateBoundError',
    'ConfigError',
    'Mobius',
    'ComplexLength',
    'RoundDisk',
    'mobius_apply',
    'complex_length_from_trace',
    'ball_volume',
    'disk_density',
    'radial_laplacian',
    'QuadDiff',
    'schwarzian_of_map',
    'pointwise_norm',
    'l2_norm_disk',
    'center_bound_check',
    'path_length',
    'TubeParams',
    'tube_params',
    'tube_radius',
    'FlowEnvelope',
    'QUANTITIES',
    'EpsteinFrame',
    'projective_distance_bound',
    'schwarzian_sup_bound',
    'MeanValueKernel',
    'make_kernel',
    'verify_kernel',
]
