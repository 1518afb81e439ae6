"""
Deterministic Checks Node
=========================
Checks that hold on every run, not just with high probability. Any
nonzero count here fails the suite.
"""

import logging
from typing import Any, Dict

from checkers import (
    check_delay_lowcomm,
    check_equivalence_restricted,
    check_fast_path,
    check_get_info,
    check_lockstep,
    check_message_bounds,
    check_min_neighborhood,
    check_stage_structure,
)
from topology import build_spanning_tree

logger = logging.getLogger(__name__)


def deterministic_node(state: Dict[str, Any]) -> Dict[str, Any]:
    """
    Input State:
        - config, graph, checks
        - runs: {"main": [(Metrics, RunTrace), ...]}

    Output State:
        - deterministic: violation counts summed over seeds, keyed by check name
    """
    print("\n" + "=" * 60)
    print("🔧 DETERMINISTIC CHECKS")
    print("=" * 60)

    config = state["config"]
    g = state["graph"]
    checks = state["checks"]
    runs = state["runs"].get("main", [])
    results: Dict[str, int] = {}

    if "stage_structure" in checks:
        results["stage_structure"] = sum(check_stage_structure(tr) for _, tr in runs)
    if "min_neighborhood" in checks:
        results["min_neighborhood"] = check_min_neighborhood(g)
    if "message_bounds" in checks:
        results["message_bounds"] = sum(check_message_bounds(mt, config, tr) for mt, tr in runs)
    if "lockstep" in checks:
        results["lockstep"] = sum(check_lockstep(tr) for _, tr in runs)
    if "get_info" in checks:
        results["get_info"] = sum(check_get_info(tr, g) for _, tr in runs)
    if "fast_path" in checks:
        results["fast_path"] = check_fast_path(config.with_seeds(state["seeds"]))
    if "equivalence" in checks:
        same = check_equivalence_restricted(config.with_seeds(state["seeds"]))
        results["equivalence"] = 0 if same else 1
    if "delay_lowcomm" in checks:
        tree = build_spanning_tree(g, config.topology.root)
        results["delay_lowcomm"] = sum(check_delay_lowcomm(tr, tree, config.A) for _, tr in runs)

    for name, count in results.items():
        mark = "✅" if count == 0 else "❌"
        print(f"   {mark} {name}: {count}")
    return {"deterministic": results}
