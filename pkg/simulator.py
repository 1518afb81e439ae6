"""
Simulator
=========
Synchronized rounds over all agents.

Round t:
    1. Every agent processes the messages sent to it at t - 1, runs its
       elimination step, plays, and fills its outboxes
    2. Outboxes become the round t + 1 inboxes

Randomness: agent v of seed s draws actions from
SeedSequence([master_seed, s, v, 0]) and rewards from
SeedSequence([master_seed, s, v, 1]), one draw per stream per round, so
adding agents never perturbs existing streams.

Two paths for Coop-SE: the explicit message simulation below and
run_fast_coop_se, which skips messages and lets u ingest every play
(w, k) at round k + max(dist(w, u), 1).
"""

import logging
from typing import List, Optional, Tuple

import numpy as np

from bandit import BanditInstance, ConfidenceParams, RegretLedger, make_instance, reward_from_draw, rewards_from_draws
from events import EventWidths, Message
from models import ConfigError, SimConfig
from policies import ROUND_FUNCTIONS, RoundContext, elim_mask
from state import create_agent_state
from topology import CommGraph, SpanningTree, build_spanning_tree, generate, load_edge_list
from trace import Metrics, RunTrace

logger = logging.getLogger(__name__)

ACTION_STREAM = 0
REWARD_STREAM = 1
INSTANCE_STREAM = 2**32 - 1         # agent slot no real agent uses
GRAPH_STREAM = 2**32 - 2


# ═══════════════════════════════════════════════════════════════════════
# SETUP
# ═══════════════════════════════════════════════════════════════════════

def agent_draws(master_seed: int, seed: int, m: int, T: int, stream: int) -> np.ndarray:
    """(T, m) uniform draws; column v is agent v's stream, one draw per round."""
    cols = [np.random.default_rng(np.random.SeedSequence([master_seed, seed, v, stream])).random(T)
            for v in range(m)]
    return np.stack(cols, axis=1) if cols else np.zeros((T, 0))


def build_graph(config: SimConfig) -> CommGraph:
    """The run's communication graph; random families depend on master_seed only."""
    spec = config.topology
    if spec.edge_file is not None:
        graph = load_edge_list(spec.edge_file)
        if graph.m != spec.m:
            logger.warning("⚠️ edge list has m=%d, overriding configured m=%d", graph.m, spec.m)
        return graph
    rng = np.random.default_rng(np.random.SeedSequence([config.master_seed, GRAPH_STREAM]))
    return generate(spec.name, spec.m, rng=rng, p=spec.p, rows=spec.rows, cols=spec.cols)


def resolve_instance(config: SimConfig, seed: int) -> BanditInstance:
    """Bandit instance of one seed; with shuffle_optimal the best mean moves to a drawn index."""
    means = config.instance.resolved_means()
    if config.instance.shuffle_optimal:
        rng = np.random.default_rng(np.random.SeedSequence([config.master_seed, seed, INSTANCE_STREAM]))
        best = int(np.argmax(means))
        j = int(rng.integers(len(means)))
        means[best], means[j] = means[j], means[best]
    return make_instance(means, config.instance.kind)


def visibility_delay(policy: str, g: CommGraph, tree: Optional[SpanningTree], A: int, D: int) -> np.ndarray:
    """
    Rounds until agent u can count a play of agent w, as an (m, m) matrix
    indexed [u, w]; inf where the play is never seen.
    """
    m = g.m
    if policy == "coop-se":
        delay = np.maximum(g.dist, 1).astype(float)
    elif policy == "restricted":
        delay = np.maximum(tree.tree_dist, 1).astype(float)
    elif policy == "low-comm":
        delay = (tree.tree_dist + 2 * A).astype(float)
        np.fill_diagonal(delay, 1.0)
    elif policy == "sus-act":
        delay = np.full((m, m), float(D))
    else:
        delay = np.full((m, m), np.inf)
        np.fill_diagonal(delay, 1.0)
    return delay


def _suspension(g: CommGraph, config: SimConfig) -> int:
    D = max(g.diameter, 1)
    if config.policy == "sus-act" and D > config.T:
        raise ConfigError(f"sus-act needs diameter <= T, got D={D}, T={config.T}")
    return D


def run_iota(config: SimConfig, m: int) -> float:
    """Confidence log factor of a run; single-se agents only ever count their own plays."""
    agents = 1 if config.policy == "single-se" else m
    return ConfidenceParams(m=agents, T=config.T, A=config.A).iota


# ═══════════════════════════════════════════════════════════════════════
# EXPLICIT PATH
# ═══════════════════════════════════════════════════════════════════════

def run(config: SimConfig, seed: Optional[int] = None,
        graph: Optional[CommGraph] = None) -> Tuple[Metrics, Optional[RunTrace]]:
    """
    Execute T synchronized rounds for one seed (default: the first seed).

    Returns:
        (Metrics, RunTrace or None when capture_trace is off)
    """
    seed = config.seeds[0] if seed is None else seed
    if config.fast_path:
        return _run_fast(config, seed, graph)

    g = graph if graph is not None else build_graph(config)
    m, A, T = g.m, config.A, config.T
    D = _suspension(g, config)
    instance = resolve_instance(config, seed)
    policy = config.policy

    tree = None
    if policy in ("restricted", "low-comm"):
        tree = build_spanning_tree(g, config.topology.root)
        neighbors = tuple(tree.neighbors(v) for v in range(m))
    elif policy == "single-se":
        neighbors = tuple(() for _ in range(m))
    else:
        neighbors = g.adjacency

    ctx = RoundContext(A=A, iota=run_iota(config, m), neighbors=neighbors,
                       selection=config.selection, track_units=config.track_provenance,
                       diameter=D)
    states = [
        create_agent_state(
            policy, v, A,
            neighbors=neighbors[v],
            parent=tree.parent[v] if tree else None,
            children=tree.children(v) if tree else (),
            depth=tree.depth[v] if tree else 0,
            D=D,
            track_units=config.track_provenance,
        )
        for v in range(m)
    ]
    round_fn = ROUND_FUNCTIONS[policy]
    widths = EventWidths.for_run(m, T, A)

    action_u = agent_draws(config.master_seed, seed, m, T, ACTION_STREAM)
    reward_u = agent_draws(config.master_seed, seed, m, T, REWARD_STREAM)
    ledger = RegretLedger.for_agents(instance, m, keep_history=True)
    trace = RunTrace(policy, m, A, T, config.trace_window) if config.capture_trace else None
    if trace is not None:
        trace.delay = visibility_delay(policy, g, tree, A, D)

    logger.debug("🚀 %s on %s: m=%d A=%d T=%d seed=%d", policy, g.name, m, A, T, seed)
    actions_hist = np.zeros((T, m), dtype=np.int64)
    bits_hist = np.zeros((T, m), dtype=np.int64)
    max_bits = 0
    max_events = 0
    inboxes: List[List[Message]] = [[] for _ in range(m)]

    for t in range(1, T + 1):
        next_inboxes: List[List[Message]] = [[] for _ in range(m)]
        actions = np.zeros(m, dtype=np.int64)
        rewards = np.zeros(m)
        round_max_bits = np.zeros(m, dtype=np.int64)
        round_max_events = np.zeros(m, dtype=np.int64)

        for v in range(m):
            ur = reward_u[t - 1, v]
            _, outbox, a, r = round_fn(states[v], inboxes[v], t, action_u[t - 1, v],
                                       lambda act, ur=ur: reward_from_draw(instance, act, ur), ctx)
            actions[v] = a
            rewards[v] = r
            for w, events in outbox.items():
                b = widths.message_bits(events)
                next_inboxes[w].append(Message(sender=v, receiver=w, sent_at=t, events=events, bits=b))
                bits_hist[t - 1, v] += b
                round_max_bits[v] = max(round_max_bits[v], b)
                round_max_events[v] = max(round_max_events[v], len(events))

        ledger.record(actions)
        actions_hist[t - 1] = actions
        max_bits = max(max_bits, int(round_max_bits.max(initial=0)))
        max_events = max(max_events, int(round_max_events.max(initial=0)))
        if trace is not None:
            trace.record(t, actions, rewards,
                         np.stack([st["active"] for st in states]),
                         np.stack([st["conf"]["n"] for st in states]),
                         np.stack([st["conf"]["R"] for st in states]),
                         bits_hist[t - 1], round_max_bits, round_max_events)
        inboxes = next_inboxes

    refusals = sum(st["refusals"] for st in states)
    if refusals:
        logger.warning("⚠️ %d eliminations refused to keep an active set nonempty (seed %d)", refusals, seed)
    if trace is not None:
        trace.finalize(states)

    metrics = Metrics(
        policy=policy, topology=g.name, m=m, A=A, T=T, seed=seed,
        actions=actions_hist, regret_curve=ledger.curve(), msg_bits=bits_hist,
        max_message_bits=max_bits, max_message_events=max_events,
        empty_active_refusals=int(refusals),
    )
    return metrics, trace


# ═══════════════════════════════════════════════════════════════════════
# FAST PATH
# ═══════════════════════════════════════════════════════════════════════

def run_fast_coop_se(config: SimConfig, seed: Optional[int] = None,
                     graph: Optional[CommGraph] = None) -> Metrics:
    """
    Coop-SE without message objects.

    Agent u ingests the plays and eliminations of w from round
    t - max(dist(w, u), 1), which is exactly what flooding delivers, so
    action sequences match run() for the same seed. Reward sums are
    bit-identical for Bernoulli (and dyadic deterministic) instances.
    """
    if config.policy != "coop-se":
        raise ConfigError(f"the fast path only applies to coop-se, not '{config.policy}'")
    seed = config.seeds[0] if seed is None else seed
    metrics, _ = _run_fast(config, seed, graph)
    return metrics


def _run_fast(config: SimConfig, seed: int,
              graph: Optional[CommGraph] = None) -> Tuple[Metrics, Optional[RunTrace]]:
    g = graph if graph is not None else build_graph(config)
    m, A, T = g.m, config.A, config.T
    instance = resolve_instance(config, seed)
    iota_value = run_iota(config, m)

    delay = np.maximum(g.dist, 1)
    shells = [(int(d), (delay == d).astype(np.float64)) for d in np.unique(delay)]

    action_u = agent_draws(config.master_seed, seed, m, T, ACTION_STREAM)
    reward_u = agent_draws(config.master_seed, seed, m, T, REWARD_STREAM)
    ledger = RegretLedger.for_agents(instance, m, keep_history=True)
    trace = RunTrace("coop-se", m, A, T, config.trace_window) if config.capture_trace else None
    if trace is not None:
        trace.delay = visibility_delay("coop-se", g, None, A, 1)

    # ring buffers: slot k % L holds round k, L covers the largest delay
    L = int(delay.max()) + 1
    plays = np.zeros((L, m, A))                     # one-hot of each agent's action
    paid = np.zeros((L, m, A))                      # one-hot scaled by the reward
    elims = np.zeros((L, m, A))
    active = np.ones((m, A), dtype=bool)
    n = np.zeros((m, A), dtype=np.int64)
    R = np.zeros((m, A))
    last = np.full(m, -1)
    refusals = np.zeros(m, dtype=np.int64)
    eliminated_at = np.full((m, A), T + 1, dtype=np.int64)
    rows = np.arange(m)
    col = np.arange(A)
    actions_hist = np.zeros((T, m), dtype=np.int64)

    for t in range(1, T + 1):
        incoming = np.zeros((m, A))
        n_in = np.zeros((m, A))
        r_in = np.zeros((m, A))
        for d, shell in shells:
            k = t - d
            if k < 1:
                continue
            incoming += shell @ elims[k % L]
            n_in += shell @ plays[k % L]
            r_in += shell @ paid[k % L]

        # incoming eliminations as one batch, never emptying a set
        hit = incoming > 0
        remaining = active & ~hit
        emptied = ~remaining.any(axis=1) & (active & hit).any(axis=1)
        if emptied.any():
            keep = np.argmax(active[emptied], axis=1)
            remaining[np.flatnonzero(emptied), keep] = True
            refusals += emptied
        newly = active & ~remaining
        eliminated_at[newly & (eliminated_at > t)] = t
        active = remaining

        n += np.where(active, np.rint(n_in).astype(np.int64), 0)
        R += np.where(active, r_in, 0.0)

        E = elim_mask(active, n, R, iota_value)
        active = active & ~E
        eliminated_at[E & (eliminated_at > t)] = t
        slot = t % L
        elims[slot] = E

        counts = active.sum(axis=1)
        if config.selection == "round-robin":
            later = active & (col[None, :] > last[:, None])
            actions = np.where(later.any(axis=1), np.argmax(later, axis=1), np.argmax(active, axis=1))
        else:
            pick = np.minimum(np.floor(action_u[t - 1] * counts).astype(np.int64), counts - 1)
            actions = np.argmax(np.cumsum(active, axis=1) > pick[:, None], axis=1)
        rewards = rewards_from_draws(instance, actions, reward_u[t - 1])
        last = actions

        plays[slot] = 0.0
        paid[slot] = 0.0
        plays[slot, rows, actions] = 1.0
        paid[slot, rows, actions] = rewards
        ledger.record(actions)
        actions_hist[t - 1] = actions
        if trace is not None:
            zeros = np.zeros(m, dtype=np.int64)
            trace.record(t, actions, rewards, active, n, R, zeros, zeros, zeros)

    if refusals.any():
        logger.warning("⚠️ %d eliminations refused to keep an active set nonempty (seed %d)",
                       int(refusals.sum()), seed)
    if trace is not None:
        trace.refusals = refusals
        trace.eliminated_at = [
            {int(a): int(eliminated_at[v, a]) for a in range(A) if eliminated_at[v, a] <= T}
            for v in range(m)
        ]

    metrics = Metrics(
        policy="coop-se", topology=g.name, m=m, A=A, T=T, seed=seed,
        actions=actions_hist, regret_curve=ledger.curve(), msg_bits=np.zeros((T, m), dtype=np.int64),
        empty_active_refusals=int(refusals.sum()), messages_modeled=False,
    )
    return metrics, trace


def run_seeds(config: SimConfig) -> List[Tuple[Metrics, Optional[RunTrace]]]:
    """run() for every seed of the config, in seed order."""
    return [run(config, seed) for seed in config.seeds]
