"""Re-derive the headline constants independently and compare them with the library."""
import math
import sys

from scipy import integrate, optimize

from src.geometry.halfspace_hodge import projective_distance_bound, projective_slope
from src.geometry.hyperbolic_core import ball_volume
from src.geometry.meanvalue_kernels import strain_mean_value_constant
from src.geometry.tube_geometry import (
    MIN_TUBE_RADIUS,
    ell0_explicit_component,
    hk_area_lower_bound,
)

TOLERANCE = 1e-5


def quad_ball_volume(R):
    value, _ = integrate.quad(lambda r: 4 * math.pi * math.sinh(r) ** 2, 0.0, R)
    return value


def rederived():
    alpha = 2 * math.pi
    R = math.asinh(math.sqrt(2))
    # α·ℓ·sinh R·cosh R = ½ solved for ℓ by root finding.
    ell3 = optimize.brentq(lambda ell: alpha * ell * math.sinh(R) * math.cosh(R) - 0.5, 1e-9, 1.0)
    hk = 1.6978 * math.sinh(R) ** 2 / (1 + 2 * math.sinh(R) ** 2)
    volume = quad_ball_volume(1.0)
    f1 = math.cosh(1) * math.sin(math.sqrt(2)) - math.sqrt(2) * math.sinh(1) * math.cos(math.sqrt(2))
    strain = 3 * math.sqrt(2 * volume) / (4 * math.pi * f1)
    coth = math.cosh(1) / math.sinh(1)
    K = 2 * math.sqrt(2 * math.pi / 3) * coth ** 2
    sigma_bound = (0.5 + 0.5) * (math.exp(alpha * K * 0.001) - 1)
    return {
        "ell3(2pi)": (ell3, ell0_explicit_component(alpha)),
        "hk_area_lower_bound(asinh sqrt2)": (hk, hk_area_lower_bound(MIN_TUBE_RADIUS)),
        "ball_volume(1)": (volume, ball_volume(1.0)),
        "strain_mean_value_constant(1)": (strain, strain_mean_value_constant(1.0)),
        "K(kappa=2)": (K, projective_slope(2.0)),
        "sigma_bound(2pi, 2, 1/2, 0.001)": (
            sigma_bound,
            projective_distance_bound(alpha, 2.0, 0.5, 0.001).sigma_bound,
        ),
    }


def main():
    failures = 0
    for name, (independent, library) in rederived().items():
        ok = abs(independent - library) <= TOLERANCE * max(1.0, abs(independent))
        failures += not ok
        print(f"{'OK ' if ok else 'BAD'} {name}: rederived={independent:.9g} library={library:.9g}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
