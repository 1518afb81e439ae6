"""
Shared round plumbing for the policy modules.
"""

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from events import Event, Message, prune_keys
from state import AgentState

Outbox = Dict[int, Tuple[Event, ...]]
RoundResult = Tuple[AgentState, Outbox, int, float]
Sampler = Callable[[int], float]


@dataclass(frozen=True)
class RoundContext:
    """Run-wide constants every agent sees."""
    A: int
    iota: float
    neighbors: Tuple[Tuple[int, ...], ...]   # per agent; tree neighbours for tree policies
    selection: str = "uniform"
    track_units: bool = False
    diameter: Optional[int] = None            # bounds how late a duplicate can arrive; None keeps every key


def inbox_events(inbox: List[Message]) -> List[Tuple[int, Event]]:
    """Flatten an inbox into (sender, event) pairs, sender order first."""
    return [(msg.sender, e) for msg in inbox for e in msg.events]


def fold_reward(state: AgentState, a: int, r: float, n: int = 1) -> bool:
    """Add (n, r) to the counters if `a` is still active."""
    if not state["active"][a]:
        return False
    state["conf"]["n"][a] += n
    state["conf"]["R"][a] += r
    return True


def active_list(state: AgentState) -> List[int]:
    return [int(a) for a in np.flatnonzero(state["active"])]


def forget_old_keys(state: AgentState, t: int, ctx: RoundContext) -> None:
    """
    Drop flooding dedup keys that can no longer be looked up.

    A copy of an event created at round k reaches every agent by
    k + diameter + 1, so keys older than t - diameter - 1 are dead. The
    sweep runs once every diameter + 1 rounds.
    """
    if ctx.diameter is None:
        return
    span = ctx.diameter + 1
    if t % span:
        return
    prune_keys(state["seen"], t - span)
    prune_keys(state["sent"], t - span)
