"""Scenario ingestion, report execution and canonical text output."""
import logging
import math
from pathlib import Path
from typing import List, Optional, Tuple, Union

import yaml

from src.geometry.base import ConfigError
from src.models import DrilledSection, Report, ScenarioConfig
from src.sections import build_envelope, drilled_comparison
from src.state import ReportState
from src.workflow import create_report_workflow

logger = logging.getLogger(__name__)

ROWS_HEADER = "t,lower,upper"

__all__ = [
    "load_config",
    "run_report",
    "arun_report",
    "drilled_comparison",
    "emit_curves",
    "dump_report",
    "rows_to_text",
]


def load_config(path: Union[str, Path]) -> ScenarioConfig:
    """Read a YAML scenario; raises ``ConfigError`` for non-mapping documents."""
    with open(path, "r", encoding="utf-8") as handle:
        data = yaml.safe_load(handle)
    if not isinstance(data, dict):
        raise ConfigError(f"Scenario file {path} must contain a mapping, got {type(data).__name__}")
    return ScenarioConfig.model_validate(data)


def _finish(result: dict) -> Report:
    errors = result.get("errors") or []
    if errors:
        raise errors[0]
    return result["report"]


def run_report(config: ScenarioConfig) -> Report:
    """Run every report stage for ``config``; the first recorded domain error is raised."""
    logger.debug(f"DEBUG: Running report for alpha={config.alpha}")
    workflow = create_report_workflow()
    return _finish(workflow.invoke(ReportState(config).to_dict()))


async def arun_report(config: ScenarioConfig) -> Report:
    workflow = create_report_workflow()
    return _finish(await workflow.ainvoke(ReportState(config).to_dict()))


def format_float(value: float) -> str:
    """17 significant digits, always with a mantissa point so YAML reads it back as a float."""
    if math.isnan(value):
        return ".nan"
    if math.isinf(value):
        return ".inf" if value > 0 else "-.inf"
    text = format(value, ".17g")
    mantissa, _, exponent = text.partition("e")
    if "." not in mantissa:
        mantissa += ".0"
    return f"{mantissa}e{exponent}" if exponent else mantissa


class ReportDumper(yaml.SafeDumper):
    """SafeDumper with canonical float rendering."""


def _represent_float(dumper: yaml.SafeDumper, value: float) -> yaml.ScalarNode:
    return dumper.represent_scalar("tag:yaml.org,2002:float", format_float(value))


ReportDumper.add_representer(float, _represent_float)
ReportDumper.add_multi_representer(float, _represent_float)


def dump_report(report: Union[Report, DrilledSection]) -> str:
    """YAML text of a report in model field order; identical reports give identical bytes."""
    return yaml.dump(
        report.model_dump(mode="python"),
        Dumper=ReportDumper,
        sort_keys=False,
        default_flow_style=False,
        allow_unicode=True,
        line_break="\n",
    )


def emit_curves(
    config: ScenarioConfig,
    quantity: str,
    component: Optional[str] = None,
    grid_points: Optional[int] = None,
) -> List[Tuple[float, float, float]]:
    """Rows ``(t, lower, upper)`` of one envelope at the scenario's grid resolution."""
    envelope = build_envelope(config, quantity, component, grid_points)
    logger.debug(f"DEBUG: Emitting {len(envelope.grid)} rows for {quantity}")
    return envelope.rows()


def _row_value(value: float) -> str:
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, ".17g")


def rows_to_text(rows: List[Tuple[float, float, float]]) -> str:
    lines = [ROWS_HEADER]
    lines.extend(",".join(_row_value(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"
