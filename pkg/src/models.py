"""Pydantic models for scenario configuration and pinching reports."""
import math
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.utils.settings import get_settings


class StrictModel(BaseModel):
    """Base model rejecting unknown keys."""

    model_config = ConfigDict(extra="forbid")


class BoundaryComponent(StrictModel):
    name: str
    kappa: float = Field(gt=0)
    sigma_norm_alpha: Optional[float] = Field(default=None, ge=0)


class CuspComponent(StrictModel):
    name: str
    tau_real: float
    tau_imag: float = Field(gt=0)


class GeodesicSpec(StrictModel):
    """A closed geodesic followed along the flow; ``twist_alpha`` is the lifted twist."""

    name: str
    length_alpha: float = Field(gt=0)
    twist_alpha: float = Field(ge=0)
    bound_L: Optional[float] = Field(default=None, gt=0)


class NonConstructiveInputs(StrictModel):
    """Constants that exist but have no explicit value; absent ones are flagged."""

    ell1: Optional[float] = Field(default=None, gt=0)
    ell2: Optional[float] = Field(default=None, gt=0)
    eps0: Optional[float] = Field(default=None, gt=0)
    K1: Optional[float] = Field(default=None, gt=0)
    delta: Optional[float] = Field(default=None, gt=0, lt=math.pi / math.sqrt(2))


class DrilledInputs(StrictModel):
    boundary_lengths: Dict[str, float] = Field(default_factory=dict)
    A: Optional[float] = Field(default=None, ge=0)

    @field_validator("boundary_lengths")
    @classmethod
    def _nonnegative_lengths(cls, value: Dict[str, float]) -> Dict[str, float]:
        for name, length in value.items():
            if not length >= 0 or math.isinf(length):
                raise ValueError(f"boundary length of {name!r} must be finite and >= 0")
        return value


class ScenarioConfig(StrictModel):
    """Inputs of one pinching scenario: angle, cone singularity, ends and geodesics."""

    alpha: float = Field(gt=0)
    cone_lengths: Dict[str, float] = Field(default_factory=dict)
    boundary: List[BoundaryComponent] = Field(default_factory=list)
    cusps: List[CuspComponent] = Field(default_factory=list)
    geodesics: List[GeodesicSpec] = Field(default_factory=list)
    grid_points: int = Field(default_factory=lambda: get_settings().grid_points, ge=2)
    grid_start_fraction: float = Field(
        default_factory=lambda: get_settings().grid_start_fraction, gt=0, lt=1
    )
    non_constructive: NonConstructiveInputs = Field(default_factory=NonConstructiveInputs)
    nehari: bool = False
    drilled: Optional[DrilledInputs] = None

    @field_validator("alpha")
    @classmethod
    def _finite_alpha(cls, value: float) -> float:
        if math.isinf(value):
            raise ValueError("alpha must be finite")
        return value

    @field_validator("cone_lengths")
    @classmethod
    def _nonnegative_cone_lengths(cls, value: Dict[str, float]) -> Dict[str, float]:
        for name, length in value.items():
            if not length >= 0 or math.isinf(length):
                raise ValueError(f"cone length of {name!r} must be finite and >= 0")
        return value

    @model_validator(mode="after")
    def _unique_names(self) -> "ScenarioConfig":
        for label, items in (
            ("boundary", self.boundary),
            ("cusps", self.cusps),
            ("geodesics", self.geodesics),
        ):
            names = [item.name for item in items]
            if len(names) != len(set(names)):
                raise ValueError(f"{label} names must be unique, got {names}")
        return self

    @property
    def total_cone_length(self) -> float:
        return math.fsum(self.cone_lengths.values())


class Quantity(BaseModel):
    """A reported number, the operation that produced it, and any caveats."""

    value: Optional[float]
    source: str
    flags: List[str] = Field(default_factory=list)


def measured(value: float, source: str, *flags: str) -> Quantity:
    return Quantity(value=float(value), source=source, flags=list(flags))


def missing(source: str, *flags: str) -> Quantity:
    """Null value standing in for a number that depends on absent inputs."""
    return Quantity(value=None, source=source, flags=list(flags))


class Bracket(BaseModel):
    lower: Quantity
    upper: Quantity


class ConeCheck(BaseModel):
    name: str
    cone_length: Quantity
    tube_radius: Quantity
    tube_radius_ok: bool
    within_explicit_threshold: bool
    hk_area_lower_bound: Quantity
    normbound_tube_ratio: Quantity
    tube_energy_factor: Quantity


class HypothesisChecks(BaseModel):
    ell3: Quantity
    ell0: Quantity
    min_tube_radius: Quantity
    components: List[ConeCheck]
    all_hold: bool


class EnvelopeSummary(BaseModel):
    quantity: str
    component: Optional[str]
    grid_points: int
    at_start: Bracket
    at_alpha: Bracket
    limit_at_zero: Bracket
    ode_deviation: Optional[Quantity] = None
    flags: List[str] = Field(default_factory=list)


class ProjectiveSection(BaseModel):
    name: str
    kappa: float
    sigma_norm_alpha: Quantity
    K: Quantity
    sharp_slope: Quantity
    sigma_bound: Quantity
    sigma_bound_ode: Quantity
    C: Quantity
    schwarzian_sup: Quantity


class EpsteinSection(BaseModel):
    name: str
    phi_sup: Quantity
    immersion_depth: Quantity
    embedding_depth: Quantity
    diffeomorphism_depth: Quantity
    curvature_depth: Quantity
    curvature_min: Quantity
    curvature_max: Quantity
    convex: Optional[bool]


class CuspSection(BaseModel):
    name: str
    tau_real: float
    tau_imag: float
    drift: Quantity
    imag_lower_bound: Quantity


class LengthBoundRegime(BaseModel):
    derivative_bound: Quantity
    length_factors: Bracket
    twist_length_bound: Quantity
    twist_bounds: Bracket


class ControlLengthsRegime(BaseModel):
    K: Quantity
    A: Quantity
    epsilon2: Quantity
    within_doubling: Optional[bool]
    length_factors: Bracket
    twist_factors: Bracket


class GeodesicSection(BaseModel):
    name: str
    length_alpha: float
    twist_alpha: float
    short_threshold: Quantity
    in_short_regime: Optional[bool]
    lengthbound: LengthBoundRegime
    controllengths: ControlLengthsRegime


class DrilledDistance(BaseModel):
    name: str
    distance: Quantity
    C: Quantity


class DrilledSection(BaseModel):
    total_boundary_length: Quantity
    distances: List[DrilledDistance]
    A: Quantity
    length_factors: Bracket
    twist_factors: Bracket
    ell0_prime: Quantity
    flags: List[str] = Field(default_factory=list)


class Report(BaseModel):
    alpha: float
    total_cone_length: Quantity
    hypothesis_checks: HypothesisChecks
    envelopes: List[EnvelopeSummary]
    projective_bounds: List[ProjectiveSection]
    epstein: List[EpsteinSection]
    cusp: List[CuspSection]
    geodesics: List[GeodesicSection]
    applications: Optional[DrilledSection]
    flags: List[str]
