"""
Policies Package
================
One round function per cooperative elimination policy, all with the
signature

    round_fn(state, inbox, t, u, sample, ctx) -> (state, outbox, action, reward)

where `u` is the agent's action draw for the round and `sample` draws the
reward of the chosen action.
"""

from .base import RoundContext
from .coop_se import coop_se_round
from .elimination import (
    EmptyActiveSetError,
    confidence_bounds,
    elim_mask,
    elim_step,
    round_robin_action,
    select_action,
)
from .low_comm import child_action, low_comm_round, parent_action
from .restricted import restricted_round
from .single_se import single_se_round
from .sus_act import sus_act_round

ROUND_FUNCTIONS = {
    "coop-se": coop_se_round,
    "sus-act": sus_act_round,
    "restricted": restricted_round,
    "low-comm": low_comm_round,
    "single-se": single_se_round,
}

__all__ = [
    "ROUND_FUNCTIONS",
    "RoundContext",
    "EmptyActiveSetError",
    "confidence_bounds",
    "elim_mask",
    "elim_step",
    "select_action",
    "round_robin_action",
    "child_action",
    "parent_action",
    "coop_se_round",
    "sus_act_round",
    "restricted_round",
    "low_comm_round",
    "single_se_round",
]
