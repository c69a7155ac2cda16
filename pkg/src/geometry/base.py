"""Exception hierarchy shared by the geometry modules."""


class PinchingError(Exception):
    """Base class for every error raised by the toolkit."""


class DomainError(PinchingError, ValueError):
    """An input lies outside the domain where a formula is defined."""


class ParabolicElementError(DomainError):
    """A trace of ±2: the element has no geodesic axis and no complex length."""


class CriticalPointError(DomainError):
    """The map is not locally univalent at the requested point."""


class CurvaturePoleError(DomainError):
    """A principal curvature is undefined because its denominator vanishes."""


class DegenerateBoundError(PinchingError):
    """A closed-form bound has a non-positive denominator."""


class ConfigError(PinchingError):
    """A scenario configuration is inconsistent beyond field-level validation."""


def require_positive(name: str, value: float) -> None:
    """Raise :class:`DomainError` unless ``value > 0``."""
    if not value > 0:
        raise DomainError(f"{name} must be positive, got {value}")


def require_nonnegative(name: str, value: float) -> None:
    """Raise :class:`DomainError` unless ``value >= 0``."""
    if not value >= 0:
        raise DomainError(f"{name} must be non-negative, got {value}")
