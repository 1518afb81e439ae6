"""
Runner Node
===========
First step of the verify workflow.

Builds the communication graph once, decides which checks the policy
supports, and executes every seed with trace capture on.
"""

import logging
from typing import Any, Dict, List

from simulator import build_graph, run

logger = logging.getLogger(__name__)

COMMON_CHECKS = ["stage_structure", "min_neighborhood", "message_bounds", "good_events"]

POLICY_CHECKS = {
    "coop-se": ["get_info", "fast_path", "sync", "sample_bound"],
    "sus-act": ["lockstep"],
    "restricted": ["equivalence"],
    "low-comm": ["delay_lowcomm"],
    "single-se": [],
}


def supported_checks(policy: str) -> List[str]:
    return POLICY_CHECKS[policy] + COMMON_CHECKS


def runner_node(state: Dict[str, Any]) -> Dict[str, Any]:
    """
    Input State:
        - config: SimConfig of the suite
        - seeds: seeds to execute

    Output State:
        - graph: the shared CommGraph
        - checks: names of the checks that apply
        - runs: {"main": [(Metrics, RunTrace), ...]} in seed order
    """
    config = state["config"]
    print("\n" + "=" * 60)
    print(f"🚀 RUNNER: {config.policy} on {config.topology.name} m={config.m} "
          f"A={config.A} T={config.T}, {len(state['seeds'])} seeds")
    print("=" * 60)

    update = {"capture_trace": True, "trace_window": 0}
    if config.policy == "low-comm":
        update["track_provenance"] = True
    traced = config.model_copy(update=update)

    g = build_graph(traced)
    runs = [run(traced, seed, graph=g) for seed in state["seeds"]]
    refusals = sum(mt.empty_active_refusals for mt, _ in runs)
    notes = list(state.get("notes", []))
    if refusals:
        notes.append(f"{refusals} eliminations refused to keep an active set nonempty")

    print(f"✅ {len(runs)} runs on a graph with diameter {g.diameter}")
    return {
        "graph": g,
        "checks": supported_checks(config.policy),
        "runs": {"main": runs},
        "notes": notes,
    }
