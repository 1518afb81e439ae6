"""
Coop-SE-Restricted
==================
Coop-SE on a shared spanning tree with aggregated messages.

Per round and per tree neighbour x an agent sends one Elim for each
action it just learned is eliminated (never back to the neighbour it
learned it from) and one RwdMany per active action carrying every fresh
reward that did not come from x, its own play included. The tree has a
single path between any two agents, so nothing needs deduplication and
each agent ends up with exactly the counts a Coop-SE agent would have on
the same tree.
"""

from typing import Dict, List, Set

import numpy as np

from events import ELIM, RWD_MANY, Message, elim, rwd_many
from state import AgentState

from .base import RoundContext, RoundResult, Sampler, fold_reward, inbox_events
from .elimination import choose, elim_step, mask_of, remove_actions


def receive_eliminations(state: AgentState, inbox: List[Message], t: int, A: int) -> Dict[int, Set[int]]:
    """
    Apply Elim events that carry news.

    Returns:
        action -> neighbours it was learned from this round
    """
    senders: Dict[int, Set[int]] = {}
    for sender, e in inbox_events(inbox):
        if e.tag != ELIM:
            continue
        if e.a in state["known_elims"] and e.a not in senders:
            continue
        senders.setdefault(e.a, set()).add(sender)
    if senders:
        state["known_elims"].update(senders)
        remove_actions(state, mask_of(senders, A), t)
    return senders


def fold_own_play(state: AgentState) -> None:
    for a, r in state["own_prev"]:
        fold_reward(state, a, r)
    state["own_prev"] = []


def restricted_round(state: AgentState, inbox: List[Message], t: int, u: float,
                     sample: Sampler, ctx: RoundContext) -> RoundResult:
    """One round of Coop-SE-Restricted for one agent."""
    v = state["id"]
    nbrs = state["neighbors"]
    learned = receive_eliminations(state, inbox, t, ctx.A)
    fold_own_play(state)

    for x in nbrs:
        state["agg_n"][x][:] = 0
        state["agg_r"][x][:] = 0.0
    for sender, e in inbox_events(inbox):
        if e.tag != RWD_MANY or not fold_reward(state, e.a, e.r, e.n):
            continue
        for x in nbrs:
            if x != sender:
                state["agg_n"][x][e.a] += e.n
                state["agg_r"][x][e.a] += e.r

    E = elim_step(state["active"], state["conf"], ctx.iota)
    remove_actions(state, E, t)
    own_elims = [int(a) for a in np.flatnonzero(E)]
    state["known_elims"].update(own_elims)

    action = choose(state, u, ctx.selection)
    reward = sample(action)
    state["last_action"] = action
    state["own_prev"] = [(action, reward)]
    for x in nbrs:
        state["agg_n"][x][action] += 1
        state["agg_r"][x][action] += reward

    active = [int(a) for a in np.flatnonzero(state["active"])]
    outbox = {}
    for x in nbrs:
        events = [elim(t, v, a) for a in own_elims]
        events += [elim(t, v, a) for a in sorted(learned) if x not in learned[a]]
        events += [rwd_many(t, v, a, float(state["agg_r"][x][a]), int(state["agg_n"][x][a]))
                   for a in active]
        outbox[x] = tuple(events)
    return state, outbox, action, reward
