"""
Coop-SE
=======
Cooperative successive elimination with flooding.

Each round an agent:
1. Folds in its own play of the previous round and every fresh event of
   its inbox (eliminations first, then rewards of still-active actions)
2. Runs the elimination step
3. Plays an action and sends its reward event, its new eliminations and
   every event first received this round to all neighbours

An event created by w at round k is therefore processed by u at round
k + dist(w, u), and an agent's own play counts from the next round.
"""

from typing import List

import numpy as np

from events import Event, Message, dedupe, elim, ELIM, RWD, rwd
from state import AgentState

from .base import RoundContext, RoundResult, Sampler, fold_reward, forget_old_keys, inbox_events
from .elimination import choose, elim_step, mask_of, remove_actions


def absorb(state: AgentState, events: List[Event], t: int, A: int) -> None:
    """Apply a batch of fresh events: eliminations, then rewards."""
    elims = [e.a for e in events if e.tag == ELIM]
    if elims:
        remove_actions(state, mask_of(elims, A), t)
    for e in events:
        if e.tag == RWD:
            fold_reward(state, e.a, e.r)


def coop_se_round(state: AgentState, inbox: List[Message], t: int, u: float,
                  sample: Sampler, ctx: RoundContext) -> RoundResult:
    """One synchronized round of Coop-SE for one agent."""
    v = state["id"]
    forget_old_keys(state, t, ctx)
    received = [e for _, e in inbox_events(inbox)]
    fresh, _ = dedupe(state["own_prev"] + received, state["seen"])
    absorb(state, fresh, t, ctx.A)

    E = elim_step(state["active"], state["conf"], ctx.iota)
    remove_actions(state, E, t)

    action = choose(state, u, ctx.selection)
    reward = sample(action)
    state["last_action"] = action

    own = [rwd(t, v, action, reward)] + [elim(t, v, int(a)) for a in np.flatnonzero(E)]
    for e in own[1:]:
        state["seen"].add(e.key)
    state["own_prev"] = own[:1]

    outgoing = []
    for e in own + fresh:
        if e.key not in state["sent"]:
            state["sent"].add(e.key)
            outgoing.append(e)
    payload = tuple(outgoing)
    outbox = {w: payload for w in ctx.neighbors[v]}
    return state, outbox, action, reward
