"""
Sus-Act
=======
Successive elimination on suspended statistics.

Reward events flood the graph exactly as in Coop-SE, but an agent only
folds plays that are at least D rounds old. Every such play has reached
every agent by then, so all agents hold identical counts, identical
active sets and, with a shared round-robin cursor, play identical
actions. Plays of one round are folded in agent order so the float sums
agree bit for bit across agents.
"""

from typing import List

from events import Message, dedupe, rwd
from state import AgentState

from .base import RoundContext, RoundResult, Sampler, fold_reward, forget_old_keys, inbox_events
from .elimination import elim_step, remove_actions, round_robin_action


def sus_act_round(state: AgentState, inbox: List[Message], t: int, u: float,
                  sample: Sampler, ctx: RoundContext) -> RoundResult:
    """One round of Sus-Act for one agent; `u` is drawn but unused by the cursor."""
    v = state["id"]
    forget_old_keys(state, t, ctx)
    received = [e for _, e in inbox_events(inbox)]
    fresh, _ = dedupe(state["own_prev"] + received, state["seen"])
    for e in fresh:
        state["buckets"].setdefault(e.t, []).append(e)

    due = state["buckets"].pop(t - state["D"], [])
    for e in sorted(due, key=lambda e: e.id):
        fold_reward(state, e.a, e.r)

    E = elim_step(state["active"], state["conf"], ctx.iota)
    remove_actions(state, E, t)

    action = round_robin_action(state["active"], state["last_action"])
    reward = sample(action)
    state["last_action"] = action

    own = rwd(t, v, action, reward)
    state["own_prev"] = [own]

    outgoing = []
    for e in [own] + fresh:
        if e.key not in state["sent"]:
            state["sent"].add(e.key)
            outgoing.append(e)
    payload = tuple(outgoing)
    outbox = {w: payload for w in ctx.neighbors[v]}
    return state, outbox, action, reward
