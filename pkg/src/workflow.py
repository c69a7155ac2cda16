"""Report workflow implementation using LangGraph."""
import logging
from typing import Any, Callable, Dict

from langgraph.graph import END, StateGraph

from src.geometry.base import PinchingError
from src.models import Report, measured
from src.sections import (
    build_cusp_sections,
    build_envelope_summaries,
    build_epstein_sections,
    build_geodesic_sections,
    build_hypothesis_checks,
    build_projective_sections,
    collect_flags,
    drilled_comparison,
)
from src.state import ReportStateDict

logger = logging.getLogger(__name__)


def has_errors(state: Dict[str, Any]) -> bool:
    return bool(state.get("errors"))


def _stage(name: str, build: Callable[[Dict[str, Any]], Dict[str, Any]]) -> Callable:
    """Wrap a section builder so domain errors land in the state instead of escaping."""

    def node(state: Dict[str, Any]) -> Dict[str, Any]:
        logger.debug(f"DEBUG: Processing {name} stage")
        try:
            update = build(state)
        except PinchingError as exc:
            logger.error(f"ERROR in {name} stage: {exc}", exc_info=True)
            return {"errors": [exc], "completed_stages": [name]}
        update.setdefault("completed_stages", [name])
        return update

    node.__name__ = f"{name}_node"
    return node


def process_hypotheses(state: Dict[str, Any]) -> Dict[str, Any]:
    return {"sections": {"hypothesis_checks": build_hypothesis_checks(state["config"])}}


def process_flows(state: Dict[str, Any]) -> Dict[str, Any]:
    config = state["config"]
    return {
        "sections": {
            "envelopes": build_envelope_summaries(config),
            "geodesics": build_geodesic_sections(config),
        }
    }


def process_boundary(state: Dict[str, Any]) -> Dict[str, Any]:
    return {"sections": {"projective_bounds": build_projective_sections(state["config"])}}


def process_epstein(state: Dict[str, Any]) -> Dict[str, Any]:
    projective = state["sections"]["projective_bounds"]
    return {"sections": {"epstein": build_epstein_sections(state["config"], projective)}}


def process_cusp(state: Dict[str, Any]) -> Dict[str, Any]:
    return {"sections": {"cusp": build_cusp_sections(state["config"])}}


def process_assemble(state: Dict[str, Any]) -> Dict[str, Any]:
    """Combine the finished sections into a Report with the union of all flags."""
    config = state["config"]
    sections = state["sections"]
    applications = None
    if config.drilled is not None:
        applications = drilled_comparison(config, config.drilled.boundary_lengths)

    parts = [
        sections["hypothesis_checks"],
        sections["envelopes"],
        sections.get("projective_bounds", []),
        sections.get("epstein", []),
        sections["cusp"],
        sections["geodesics"],
    ]
    flags = set()
    for part in parts:
        items = part if isinstance(part, list) else [part]
        for item in items:
            flags.update(collect_flags(item))
    if applications is not None:
        flags.update(collect_flags(applications))

    report = Report(
        alpha=config.alpha,
        total_cone_length=measured(config.total_cone_length, "cone_lengths"),
        hypothesis_checks=sections["hypothesis_checks"],
        envelopes=sections["envelopes"],
        projective_bounds=sections.get("projective_bounds", []),
        epstein=sections.get("epstein", []),
        cusp=sections["cusp"],
        geodesics=sections["geodesics"],
        applications=applications,
        flags=sorted(flags),
    )
    logger.debug(f"DEBUG: Assembled report with {len(report.flags)} flags")
    return {"report": report}


def route_to(next_stage: str) -> Callable[[Dict[str, Any]], str]:
    def route(state: Dict[str, Any]) -> str:
        return END if has_errors(state) else next_stage

    return route


def route_after_flows(state: Dict[str, Any]) -> str:
    """Skip the boundary stages when the scenario has no geometrically finite ends."""
    if has_errors(state):
        return END
    return "boundary" if state["config"].boundary else "cusp"


def create_report_workflow():
    """
    Create the report workflow graph.

    Returns:
        CompiledStateGraph: hypotheses → flows → (boundary → epstein) → cusp → assemble,
        leaving early for END as soon as a stage records an error.
    """
    workflow = StateGraph(ReportStateDict)
    workflow.add_node("hypotheses", _stage("hypotheses", process_hypotheses))
    workflow.add_node("flows", _stage("flows", process_flows))
    workflow.add_node("boundary", _stage("boundary", process_boundary))
    workflow.add_node("epstein", _stage("epstein", process_epstein))
    workflow.add_node("cusp", _stage("cusp", process_cusp))
    workflow.add_node("assemble", _stage("assemble", process_assemble))
    logger.debug("DEBUG: Added all workflow nodes")

    workflow.add_conditional_edges("hypotheses", route_to("flows"), {"flows": "flows", END: END})
    workflow.add_conditional_edges(
        "flows",
        route_after_flows,
        {"boundary": "boundary", "cusp": "cusp", END: END},
    )
    workflow.add_conditional_edges("boundary", route_to("epstein"), {"epstein": "epstein", END: END})
    workflow.add_conditional_edges("epstein", route_to("cusp"), {"cusp": "cusp", END: END})
    workflow.add_conditional_edges("cusp", route_to("assemble"), {"assemble": "assemble", END: END})
    workflow.add_edge("assemble", END)

    workflow.set_entry_point("hypotheses")
    return workflow.compile()
