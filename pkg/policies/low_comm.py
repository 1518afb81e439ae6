"""
Coop-SE-Low-Comm
================
Coop-SE on a shared spanning tree with one event per message.

An agent at depth d talks about a single action per round and direction:
action (t - d) mod A toward its children and (t + d) mod A toward its
parent. Aggregates are kept per (neighbour, action) and only the
scheduled action's aggregate is sent and reset. A pending elimination
for the scheduled action takes the slot; the rewards then wait for the
action's next slot. The root has no parent and only talks to children.

With these clocks a message climbing toward the root or descending away
from it is forwarded on arrival, so it travels one hop per round.
"""

from typing import List

import numpy as np

from events import ELIM, RWD_MANY, Event, Message, elim, rwd_many
from state import AgentState

from .base import RoundContext, RoundResult, Sampler, fold_reward, inbox_events
from .elimination import choose, elim_step, mask_of, remove_actions
from .restricted import fold_own_play


def child_action(t: int, d: int, A: int) -> int:
    return (t - d) % A


def parent_action(t: int, d: int, A: int) -> int:
    return (t + d) % A


def _send_one(state: AgentState, x: int, a: int, t: int, track: bool) -> Event:
    """Send-One-Action toward neighbour x for scheduled action a."""
    v = state["id"]
    pending = state["pending_elim"][x]
    if a in pending:
        pending.discard(a)
        return elim(t, v, a)

    units = ()
    if track:
        units = tuple(state["agg_units"][x][a])
        state["agg_units"][x][a] = []
        first = state["first_up"] if x == state["parent"] else state["first_down"]
        for k, w in units:
            if w == v:
                first.setdefault((k, w), t)
    event = rwd_many(t, v, a, float(state["agg_r"][x][a]), int(state["agg_n"][x][a]), units)
    state["agg_n"][x][a] = 0
    state["agg_r"][x][a] = 0.0
    return event


def low_comm_round(state: AgentState, inbox: List[Message], t: int, u: float,
                   sample: Sampler, ctx: RoundContext) -> RoundResult:
    """One round of Coop-SE-Low-Comm for one agent."""
    v = state["id"]
    nbrs = state["neighbors"]
    track = ctx.track_units

    # Eliminations first: news is queued for every neighbour but its source
    senders = {}
    for sender, e in inbox_events(inbox):
        if e.tag == ELIM and (e.a not in state["known_elims"] or e.a in senders):
            senders.setdefault(e.a, set()).add(sender)
    if senders:
        state["known_elims"].update(senders)
        remove_actions(state, mask_of(senders, ctx.A), t)
        for a, src in senders.items():
            for x in nbrs:
                if x not in src:
                    state["pending_elim"][x].add(a)

    fold_own_play(state)

    for sender, e in inbox_events(inbox):
        if e.tag != RWD_MANY or not fold_reward(state, e.a, e.r, e.n):
            continue
        if track:
            for unit in e.units:
                state["arrivals"].setdefault(unit, t)
        for x in nbrs:
            if x == sender:
                continue
            state["agg_n"][x][e.a] += e.n
            state["agg_r"][x][e.a] += e.r
            if track:
                state["agg_units"][x][e.a].extend(e.units)

    E = elim_step(state["active"], state["conf"], ctx.iota)
    remove_actions(state, E, t)
    for a in np.flatnonzero(E):
        state["known_elims"].add(int(a))
        for x in nbrs:
            state["pending_elim"][x].add(int(a))

    action = choose(state, u, ctx.selection)
    reward = sample(action)
    state["last_action"] = action
    state["own_prev"] = [(action, reward)]
    for x in nbrs:
        state["agg_n"][x][action] += 1
        state["agg_r"][x][action] += reward
        if track:
            state["agg_units"][x][action].append((t, v))

    d = state["depth"]
    outbox = {}
    down = child_action(t, d, ctx.A)
    for c in state["children"]:
        outbox[c] = (_send_one(state, c, down, t, track),)
    if state["parent"] is not None:
        p = state["parent"]
        outbox[p] = (_send_one(state, p, parent_action(t, d, ctx.A), t, track),)
    return state, outbox, action, reward
