"""
LangGraph Definition for the Verify Workflow
============================================
Sequences the checker suite over one configuration.

Graph Flow:
    ┌─────────────────┐
    │     runner      │ (Start - builds the graph, runs every seed)
    └────────┬────────┘
             │
             ├──────────────────────────────┐ (no seeds)
             ▼                              │
    ┌─────────────────┐                     │
    │  deterministic  │                     │
    └────────┬────────┘                     │
             │                              │
             ▼                              │
    ┌─────────────────┐                     │
    │   statistical   │                     │
    └────────┬────────┘                     │
             │                              │
             ▼                              │
    ┌─────────────────┐                     │
    │     report      │◄────────────────────┘
    └────────┬────────┘
             │
             ▼
    ┌─────────────────┐
    │      END        │
    └─────────────────┘
"""

import logging
from typing import Any, Dict

from langgraph.graph import END, StateGraph

from models import SimConfig
from nodes import deterministic_node, report_node, runner_node, statistical_node
from state import VerifyState, create_verify_state

logger = logging.getLogger(__name__)

_compiled_graph = None


# ═══════════════════════════════════════════════════════════════════════
# ROUTING FUNCTIONS
# ═══════════════════════════════════════════════════════════════════════

def route_after_runner(state: VerifyState) -> str:
    """Skip the checks when there is nothing to check."""
    if not state.get("runs", {}).get("main"):
        logger.info("⚠️ no runs, going straight to the report")
        return "report"
    return "deterministic"


# ═══════════════════════════════════════════════════════════════════════
# GRAPH CREATION
# ═══════════════════════════════════════════════════════════════════════

def create_verify_graph() -> StateGraph:
    """Create the checker-suite workflow graph."""
    workflow = StateGraph(VerifyState)

    workflow.add_node("runner", runner_node)
    workflow.add_node("deterministic", deterministic_node)
    workflow.add_node("statistical", statistical_node)
    workflow.add_node("report", report_node)

    workflow.set_entry_point("runner")
    workflow.add_conditional_edges(
        "runner",
        route_after_runner,
        {
            "deterministic": "deterministic",
            "report": "report",
        }
    )
    workflow.add_edge("deterministic", "statistical")
    workflow.add_edge("statistical", "report")
    workflow.add_edge("report", END)
    return workflow


def compile_graph(force_recompile: bool = False):
    """Compile the verify graph once per process."""
    global _compiled_graph
    if _compiled_graph is None or force_recompile:
        logger.debug("🔧 compiling verify graph")
        _compiled_graph = create_verify_graph().compile()
    return _compiled_graph


# ═══════════════════════════════════════════════════════════════════════
# EXECUTION HELPERS
# ═══════════════════════════════════════════════════════════════════════

def run_verify(config: SimConfig) -> Dict[str, Any]:
    """
    Run the checker suite on every seed of `config`.

    Returns:
        Final VerifyState: deterministic/statistical counts, notes, passed
    """
    graph = compile_graph()
    final = graph.invoke(create_verify_state(config, config.seeds))
    return dict(final)
