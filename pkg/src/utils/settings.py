"""Numerics settings loaded from the environment."""
import os
from functools import lru_cache
from typing import Mapping, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field

ENV_PREFIX = "PINCHING_"


class NumericsSettings(BaseModel):
    """Step sizes, node counts and tolerances used by the verification routines."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    fd_step: float = Field(default=1e-5, gt=0)
    contour_radius_fraction: float = Field(default=0.25, gt=0, lt=1)
    contour_points: int = Field(default=32, ge=8)
    schwarzian_radius: float = Field(default=1e-2, gt=0)
    schwarzian_points: int = Field(default=16, ge=8)
    critical_tolerance: float = Field(default=1e-10, gt=0)
    parabolic_tolerance: float = Field(default=1e-9, gt=0)
    mobius_tolerance: float = Field(default=1e-12, gt=0)
    greens_panels: int = Field(default=256, ge=4)
    taylor_points: int = Field(default=1024, ge=16)
    grid_points: int = Field(default=256, ge=2)
    grid_start_fraction: float = Field(default=0.01, gt=0, lt=1)
    curvature_samples: int = Field(default=257, ge=2)

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> "NumericsSettings":
        """Build settings from ``PINCHING_*`` variables, ignoring unrelated keys."""
        environ = os.environ if environ is None else environ
        values = {}
        for name in cls.model_fields:
            key = f"{ENV_PREFIX}{name.upper()}"
            if key in environ:
                values[name] = environ[key]
        return cls(**values)


@lru_cache(maxsize=1)
def get_settings() -> NumericsSettings:
    """Load ``.env`` once and return the process-wide settings."""
    load_dotenv()
    return NumericsSettings.from_env()
