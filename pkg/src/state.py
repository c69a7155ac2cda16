"""State management for the report pipeline."""
from typing import Any, Dict, List, Optional, TypedDict

from typing_extensions import Annotated

from src.models import Report, ScenarioConfig


def state_reducer(a: Dict[str, Any], b: Dict[str, Any]) -> Dict[str, Any]:
    """Reducer function for merging state updates."""
    return {**a, **b}


def append_reducer(a: List[Any], b: List[Any]) -> List[Any]:
    """Reducer function for accumulating list entries across stages."""
    return list(a) + list(b)


class ReportStateDict(TypedDict):
    """TypedDict for report state with reducer annotations."""
    config: ScenarioConfig
    sections: Annotated[Dict[str, Any], state_reducer]
    completed_stages: Annotated[List[str], append_reducer]
    errors: Annotated[List[Exception], append_reducer]
    report: Optional[Report]


class ReportState:
    """State management class for the report workflow."""
    def __init__(self, config: ScenarioConfig):
        self._state: ReportStateDict = {
            "config": config,
            "sections": {},
            "completed_stages": [],
            "errors": [],
            "report": None,
        }

    def to_dict(self) -> ReportStateDict:
        """Convert state to dictionary."""
        return self._state
