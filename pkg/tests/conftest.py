"""Shared fixtures for scenario-level tests."""
import math
from pathlib import Path

import pytest

from src.models import ScenarioConfig
from src.report import load_config

EXAMPLE_CONFIG = Path(__file__).resolve().parent.parent / "configs" / "drilling_example.yaml"


@pytest.fixture
def example_config_path() -> Path:
    return EXAMPLE_CONFIG


@pytest.fixture
def example_config() -> ScenarioConfig:
    return load_config(EXAMPLE_CONFIG)


@pytest.fixture
def make_config():
    """Build a small scenario at angle 2π, overriding any field by keyword."""

    def build(**overrides) -> ScenarioConfig:
        data = {
            "alpha": 2 * math.pi,
            "cone_lengths": {"c1": 0.001},
            "grid_points": 16,
            "grid_start_fraction": 0.1,
        }
        data.update(overrides)
        return ScenarioConfig.model_validate(data)

    return build
