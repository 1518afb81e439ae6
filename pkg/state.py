"""
State Definitions
=================
Per-agent protocol state for every policy, and the state carried through
the verify workflow in graph.py.

Agent states are plain TypedDicts owned by one run; the policy round
functions in policies/ mutate them in place.
"""

from typing import Any, Dict, List, Optional, Set, Tuple, TypedDict

import numpy as np


class ConfidenceState(TypedDict):
    """Per-action observation counts and reward sums."""
    n: np.ndarray                       # int64, shape (A,)
    R: np.ndarray                       # float64, shape (A,)


class AgentState(TypedDict, total=False):
    """
    State of one agent.

    The common part is filled for every policy; each policy adds its own
    block (see the factories below).
    """
    # ═══════════════════════════════════════════════════════════════════════
    # COMMON
    # ═══════════════════════════════════════════════════════════════════════
    id: int
    policy: str
    active: np.ndarray                  # bool mask, shape (A,), only shrinks
    conf: ConfidenceState
    own_prev: List[Any]                 # own events of the previous round, folded next round
    last_action: int                    # -1 before the first play
    refusals: int                       # incoming eliminations refused to keep `active` nonempty
    eliminated_at: Dict[int, int]       # action -> round it left `active`

    # ═══════════════════════════════════════════════════════════════════════
    # COOP-SE / SUS-ACT (flooding)
    # ═══════════════════════════════════════════════════════════════════════
    seen: Set[tuple]                    # dedup keys already processed, recent rounds only
    sent: Set[tuple]                    # dedup keys already forwarded, recent rounds only
    buckets: Dict[int, List[Any]]       # sus-act: round -> Rwd events of that round
    D: int                              # sus-act suspension

    # ═══════════════════════════════════════════════════════════════════════
    # RESTRICTED / LOW-COMM (tree)
    # ═══════════════════════════════════════════════════════════════════════
    neighbors: Tuple[int, ...]          # tree neighbours, ascending
    parent: Optional[int]
    children: Tuple[int, ...]
    depth: int
    known_elims: Set[int]               # actions known to be eliminated somewhere
    agg_n: Dict[int, np.ndarray]        # neighbour -> pending counts per action
    agg_r: Dict[int, np.ndarray]        # neighbour -> pending reward sums per action
    agg_units: Dict[int, List[list]]    # neighbour -> per-action (round, agent) plays
    pending_elim: Dict[int, Set[int]]   # low-comm: neighbour -> eliminations awaiting a slot

    # ═══════════════════════════════════════════════════════════════════════
    # PROVENANCE (low-comm, opt-in)
    # ═══════════════════════════════════════════════════════════════════════
    arrivals: Dict[tuple, int]          # (k, w) -> round the play entered these counters
    first_up: Dict[tuple, int]          # own (k, id) -> round first sent toward the root
    first_down: Dict[tuple, int]        # own (k, id) -> round first sent toward the leaves


def create_confidence_state(A: int) -> ConfidenceState:
    return {"n": np.zeros(A, dtype=np.int64), "R": np.zeros(A, dtype=np.float64)}


def create_agent_state(
    policy: str,
    agent_id: int,
    A: int,
    neighbors: Tuple[int, ...] = (),
    parent: Optional[int] = None,
    children: Tuple[int, ...] = (),
    depth: int = 0,
    D: int = 1,
    track_units: bool = False,
) -> AgentState:
    """
    Create a fresh agent state for `policy`.

    Args:
        policy: coop-se | sus-act | restricted | low-comm | single-se
        agent_id: index of the agent
        A: number of actions
        neighbors: tree neighbours (restricted / low-comm)
        parent, children, depth: tree position (low-comm)
        D: suspension rounds (sus-act)
        track_units: keep (round, agent) provenance on aggregates (low-comm)

    Returns:
        Initialized AgentState with every action active
    """
    state: AgentState = {
        "id": agent_id,
        "policy": policy,
        "active": np.ones(A, dtype=bool),
        "conf": create_confidence_state(A),
        "own_prev": [],
        "last_action": -1,
        "refusals": 0,
        "eliminated_at": {},
    }

    if policy in ("coop-se", "sus-act", "single-se"):
        state["seen"] = set()
        state["sent"] = set()
    if policy == "sus-act":
        state["buckets"] = {}
        state["D"] = max(int(D), 1)

    if policy in ("restricted", "low-comm"):
        state["neighbors"] = tuple(neighbors)
        state["known_elims"] = set()
        state["agg_n"] = {u: np.zeros(A, dtype=np.int64) for u in neighbors}
        state["agg_r"] = {u: np.zeros(A, dtype=np.float64) for u in neighbors}
    if policy == "low-comm":
        state["parent"] = parent
        state["children"] = tuple(children)
        state["depth"] = depth
        state["pending_elim"] = {u: set() for u in neighbors}
        if track_units:
            state["agg_units"] = {u: [[] for _ in range(A)] for u in neighbors}
            state["arrivals"] = {}
            state["first_up"] = {}
            state["first_down"] = {}

    return state


# ═══════════════════════════════════════════════════════════════════════
# VERIFY WORKFLOW STATE
# ═══════════════════════════════════════════════════════════════════════

class VerifyState(TypedDict):
    """State threaded through the verify workflow (graph.py)."""
    config: Any                         # SimConfig the suite was built from
    seeds: List[int]
    graph: Any                          # CommGraph shared by every run
    checks: List[str]                   # which checks this topology/policy set supports
    runs: Dict[str, List[Any]]          # label -> [(Metrics, RunTrace)] per seed
    deterministic: Dict[str, int]       # check name -> violation count
    statistical: Dict[str, int]
    notes: List[str]
    passed: bool


def create_verify_state(config: Any, seeds: List[int]) -> VerifyState:
    return {
        "config": config,
        "seeds": list(seeds),
        "graph": None,
        "checks": [],
        "runs": {},
        "deterministic": {},
        "statistical": {},
        "notes": [],
        "passed": False,
    }
