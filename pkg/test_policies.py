"""Tests for the elimination step and single rounds of each policy."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from events import ELIM, RWD_MANY, Message, elim, rwd, rwd_many
from policies import (
    ROUND_FUNCTIONS,
    EmptyActiveSetError,
    RoundContext,
    child_action,
    confidence_bounds,
    coop_se_round,
    elim_mask,
    elim_step,
    low_comm_round,
    parent_action,
    restricted_round,
    round_robin_action,
    select_action,
    single_se_round,
    sus_act_round,
)
from policies.elimination import remove_actions
from state import create_agent_state, create_confidence_state


def test_confidence_bounds_treat_zero_counts_as_one():
    mu, lam, ucb, lcb = confidence_bounds(np.array([0, 4]), np.array([0.0, 2.0]), iota=2.0)
    assert mu.tolist() == [0.0, 0.5]
    assert lam == pytest.approx([2.0, 1.0])
    assert ucb == pytest.approx([2.0, 1.5])
    assert lcb == pytest.approx([-2.0, -0.5])


def test_clear_loser_is_eliminated():
    active = np.ones(2, dtype=bool)
    E = elim_mask(active, np.array([100, 100]), np.array([100.0, 0.0]), iota=1.0)
    assert E.tolist() == [False, True]


def test_overlapping_intervals_eliminate_nothing():
    active = np.ones(3, dtype=bool)
    E = elim_mask(active, np.array([2, 2, 2]), np.array([2.0, 1.0, 0.0]), iota=1.0)
    assert not E.any()


def test_inactive_actions_never_eliminate_others():
    active = np.array([False, True, True])
    E = elim_mask(active, np.array([100, 100, 100]), np.array([100.0, 0.0, 0.0]), iota=1.0)
    assert not E.any()


def test_row_wise_elimination_matches_per_agent():
    n = np.array([[100, 100], [1, 1]])
    R = np.array([[100.0, 0.0], [1.0, 0.0]])
    active = np.ones((2, 2), dtype=bool)
    E = elim_mask(active, n, R, iota=1.0)
    assert E.tolist() == [[False, True], [False, False]]


@settings(max_examples=100, deadline=None)
@given(
    n=st.lists(st.integers(0, 500), min_size=2, max_size=8),
    data=st.data(),
)
def test_elimination_never_empties_the_active_set(n, data):
    A = len(n)
    R = [data.draw(st.floats(0, k)) for k in n]
    active = np.array(data.draw(st.lists(st.booleans(), min_size=A, max_size=A)))
    if not active.any():
        active[0] = True
    conf = create_confidence_state(A)
    conf["n"][:] = n
    conf["R"][:] = R
    E = elim_step(active, conf, iota=0.5)
    assert (active & ~E).any()
    assert not (E & ~active).any()


def test_elim_step_rejects_an_empty_set():
    with pytest.raises(EmptyActiveSetError):
        elim_step(np.zeros(3, dtype=bool), create_confidence_state(3), 1.0)


def test_uniform_selection_uses_the_sorted_active_actions():
    active = np.array([False, True, True])
    assert select_action(active, 0.0) == 1
    assert select_action(active, 0.5) == 2
    assert select_action(active, 0.999) == 2
    assert select_action({3, 1}, 0.2) == 1
    with pytest.raises(EmptyActiveSetError):
        select_action([], 0.5)


@settings(max_examples=100, deadline=None)
@given(st.sets(st.integers(0, 9), min_size=1), st.floats(0, 1, exclude_max=True))
def test_selection_stays_inside_the_active_set(actions, u):
    assert select_action(sorted(actions), u) in actions


def test_round_robin_wraps_around():
    assert round_robin_action([0, 2, 3], -1) == 0
    assert round_robin_action([0, 2, 3], 0) == 2
    assert round_robin_action([0, 2, 3], 2) == 3
    assert round_robin_action([0, 2, 3], 3) == 0


def test_refused_batch_keeps_the_lowest_active_action():
    state = create_agent_state("coop-se", 0, 3)
    state["active"][0] = False
    refused = remove_actions(state, np.ones(3, dtype=bool), t=7)
    assert refused == 1
    assert state["active"].tolist() == [False, True, False]
    assert state["refusals"] == 1
    assert state["eliminated_at"] == {2: 7}


def test_low_comm_clocks():
    assert child_action(5, 2, 3) == 0
    assert parent_action(5, 2, 3) == 1
    # a message keeps its action slot while it climbs or descends one hop per round
    t, d, A = 11, 4, 5
    assert parent_action(t, d, A) == parent_action(t + 1, d - 1, A)
    assert child_action(t, d, A) == child_action(t + 1, d + 1, A)


def _ctx(neighbors, A=3, **kw):
    return RoundContext(A=A, iota=1.0, neighbors=neighbors, **kw)


def test_coop_se_first_round_floods_its_own_reward():
    state = create_agent_state("coop-se", 0, 3)
    ctx = _ctx(((1, 2), (0,), (0,)))
    _, outbox, action, reward = coop_se_round(state, [], 1, 0.0, lambda a: 1.0, ctx)
    assert (action, reward) == (0, 1.0)
    assert outbox == {1: (rwd(1, 0, 0, 1.0),), 2: (rwd(1, 0, 0, 1.0),)}
    assert state["conf"]["n"].tolist() == [0, 0, 0]


def test_coop_se_folds_own_play_next_round_and_relays_once():
    state = create_agent_state("coop-se", 0, 3)
    ctx = _ctx(((1, 2), (0,), (0,)))
    coop_se_round(state, [], 1, 0.0, lambda a: 1.0, ctx)
    inbox = [Message(sender=1, receiver=0, sent_at=1, events=(rwd(1, 1, 2, 0.0),))]
    _, outbox, _, _ = coop_se_round(state, inbox, 2, 0.0, lambda a: 0.0, ctx)
    assert state["conf"]["n"].tolist() == [1, 0, 1]
    assert rwd(1, 1, 2, 0.0) in outbox[2]
    # the duplicate arriving later is dropped
    coop_se_round(state, inbox, 3, 0.0, lambda a: 0.0, ctx)
    assert state["conf"]["n"].tolist() == [2, 0, 1]


def test_coop_se_applies_eliminations_before_rewards():
    state = create_agent_state("coop-se", 0, 3)
    ctx = _ctx(((1,), (0,)))
    inbox = [Message(sender=1, receiver=0, sent_at=0, events=(rwd(0, 1, 2, 1.0), elim(0, 1, 2)))]
    coop_se_round(state, inbox, 1, 0.0, lambda a: 0.0, ctx)
    assert state["active"].tolist() == [True, True, False]
    assert state["conf"]["n"][2] == 0
    assert state["eliminated_at"] == {2: 1}


def test_single_se_sends_nothing():
    state = create_agent_state("single-se", 0, 2)
    _, outbox, _, _ = single_se_round(state, [], 1, 0.3, lambda a: 1.0, _ctx(((1,), (0,)), A=2))
    assert outbox == {}


def test_sus_act_waits_D_rounds_before_counting():
    state = create_agent_state("sus-act", 0, 2, D=2)
    ctx = _ctx(((1,), (0,)), A=2)
    actions = []
    for t in range(1, 4):
        _, _, a, _ = sus_act_round(state, [], t, 0.9, lambda a: 1.0, ctx)
        actions.append(a)
        if t < 3:
            assert state["conf"]["n"].sum() == 0
    assert actions == [0, 1, 0]
    assert state["conf"]["n"].tolist() == [1, 0]


def test_restricted_sends_one_aggregate_per_active_action():
    state = create_agent_state("restricted", 1, 3, neighbors=(0, 2))
    ctx = _ctx(((1,), (0, 2), (1,)))
    inbox = [Message(sender=0, receiver=1, sent_at=1,
                     events=(rwd_many(1, 0, 0, 1.0, 1), rwd_many(1, 0, 1, 0.0, 0), rwd_many(1, 0, 2, 0.0, 0)))]
    _, outbox, action, _ = restricted_round(state, inbox, 2, 0.0, lambda a: 1.0, ctx)
    assert action == 0
    assert [e.tag for e in outbox[0]] == [RWD_MANY] * 3
    # the aggregate toward 2 carries agent 0's play plus the own play, toward 0 only the own play
    assert (outbox[2][0].n, outbox[2][0].r) == (2, 2.0)
    assert (outbox[0][0].n, outbox[0][0].r) == (1, 1.0)


def test_restricted_forwards_eliminations_away_from_their_source():
    state = create_agent_state("restricted", 1, 3, neighbors=(0, 2))
    ctx = _ctx(((1,), (0, 2), (1,)))
    inbox = [Message(sender=0, receiver=1, sent_at=1, events=(elim(1, 0, 2),))]
    _, outbox, _, _ = restricted_round(state, inbox, 2, 0.0, lambda a: 1.0, ctx)
    assert [e for e in outbox[2] if e.tag == ELIM] == [elim(2, 1, 2)]
    assert not [e for e in outbox[0] if e.tag == ELIM]
    assert len(outbox[2]) == 1 + 2


def test_low_comm_sends_a_single_event_per_neighbour():
    state = create_agent_state("low-comm", 1, 3, neighbors=(0, 2), parent=0, children=(2,), depth=1)
    ctx = _ctx(((1,), (0, 2), (1,)))
    _, outbox, action, _ = low_comm_round(state, [], 4, 0.0, lambda a: 1.0, ctx)
    assert set(outbox) == {0, 2}
    assert all(len(events) == 1 for events in outbox.values())
    down, up = outbox[2][0], outbox[0][0]
    assert down.a == child_action(4, 1, 3) == 0
    assert up.a == parent_action(4, 1, 3) == 2
    assert (down.n, down.r) == (1, 1.0)
    assert (up.n, up.r) == (0, 0.0)


def test_low_comm_pending_elimination_takes_the_slot():
    state = create_agent_state("low-comm", 1, 3, neighbors=(0, 2), parent=0, children=(2,), depth=1)
    ctx = _ctx(((1,), (0, 2), (1,)))
    inbox = [Message(sender=0, receiver=1, sent_at=3, events=(elim(3, 0, 0),))]
    _, outbox, _, _ = low_comm_round(state, inbox, 4, 0.0, lambda a: 1.0, ctx)
    assert outbox[2][0] == elim(4, 1, 0)
    assert outbox[0][0].tag == RWD_MANY
    assert state["pending_elim"][0] == set()


def test_low_comm_root_only_talks_to_children():
    state = create_agent_state("low-comm", 0, 2, neighbors=(1,), parent=None, children=(1,), depth=0)
    _, outbox, _, _ = low_comm_round(state, [], 1, 0.0, lambda a: 1.0, _ctx(((1,), (0,)), A=2))
    assert set(outbox) == {1}


def _flood(policy, neighbors, T, diameter):
    """Drive every agent of a small graph for T rounds with deterministic draws."""
    m = len(neighbors)
    round_fn = ROUND_FUNCTIONS[policy]
    states = [create_agent_state(policy, v, 2, D=2) for v in range(m)]
    ctx = _ctx(neighbors, A=2, diameter=diameter)
    inboxes = [[] for _ in range(m)]
    history = []
    for t in range(1, T + 1):
        next_inboxes = [[] for _ in range(m)]
        row = []
        for v in range(m):
            u = ((7 * t + 3 * v) % 10) / 10
            _, outbox, a, _ = round_fn(states[v], inboxes[v], t, u,
                                       lambda act, t=t, v=v: float((t + v + act) % 2), ctx)
            row.append(a)
            for w, events in outbox.items():
                next_inboxes[w].append(Message(sender=v, receiver=w, sent_at=t, events=events))
        history.append(row)
        inboxes = next_inboxes
    return history, states


@pytest.mark.parametrize("policy", ["coop-se", "sus-act"])
def test_flooding_forgets_dedup_keys_older_than_the_diameter(policy):
    line = ((1,), (0, 2), (1,))
    kept_actions, kept = _flood(policy, line, 60, diameter=None)
    pruned_actions, pruned = _flood(policy, line, 60, diameter=2)
    assert pruned_actions == kept_actions
    for full, short in zip(kept, pruned):
        assert short["conf"]["n"].tolist() == full["conf"]["n"].tolist()
        assert min(k[1] for k in full["seen"]) == 1
        assert min(k[1] for k in short["seen"]) >= 60 - 2 * 3
        assert min(k[1] for k in short["sent"]) >= 60 - 2 * 3
        assert len(short["seen"]) < len(full["seen"])
