"""Test cases for state management."""

from src.state import ReportState, append_reducer, state_reducer


def test_state_reducer():
    """Test state reducer function."""
    a = {"hypothesis_checks": 1, "envelopes": 2}
    b = {"envelopes": 3, "cusp": 4}
    result = state_reducer(a, b)
    assert result == {"hypothesis_checks": 1, "envelopes": 3, "cusp": 4}


def test_append_reducer():
    """Stage names and errors accumulate in order."""
    assert append_reducer(["hypotheses"], ["flows"]) == ["hypotheses", "flows"]
    assert append_reducer([], []) == []


def test_report_state_initialization(make_config):
    """Test ReportState initialization."""
    config = make_config()
    state = ReportState(config).to_dict()
    assert state["config"] is config
    assert state["sections"] == {}
    assert state["completed_stages"] == []
    assert state["errors"] == []
    assert state["report"] is None


def test_report_state_to_dict(make_config):
    """Test conversion to dictionary."""
    state_dict = ReportState(make_config()).to_dict()
    assert isinstance(state_dict, dict)
    assert set(state_dict) == {"config", "sections", "completed_stages", "errors", "report"}
