"""
Checkers
========
Trace-level verification of the structural guarantees.

Deterministic checks (must report zero):
    lockstep, get-info count identity, fast-path oracle, tree equivalence,
    low-comm delay, message bounds, stage structure, min-neighbourhood

Statistical checks (counts judged against thresholds):
    synchronization, sample bound, good events

Checkers never raise on a violation; they return counts.
"""

import logging
import math
from typing import Dict, Optional

import numpy as np

from bandit import BanditInstance
from events import EventWidths
from models import SimConfig
from policies import confidence_bounds
from simulator import build_graph, run
from topology import CommGraph, SpanningTree, build_spanning_tree, check_min_neighborhood, neighborhood_size
from trace import Metrics, RunTrace, harmonic_bound, stages, sum_inverse_sizes

logger = logging.getLogger(__name__)

__all__ = [
    "check_lockstep",
    "check_get_info",
    "check_fast_path",
    "check_equivalence_restricted",
    "check_delay_lowcomm",
    "check_message_bounds",
    "check_stage_structure",
    "check_min_neighborhood",
    "check_sync",
    "check_sample_bound",
    "check_good_events",
    "trace_verdicts",
]


def _usable(trace: Optional[RunTrace], name: str) -> bool:
    if trace is None:
        logger.warning("⚠️ %s: no trace captured, skipped", name)
        return False
    if not trace.complete:
        logger.warning("⚠️ %s: trace keeps only the last %d rounds, skipped", name, trace.window)
        return False
    return True


def _cumulative(x: np.ndarray) -> np.ndarray:
    """Prefix sums over rounds with a zero row in front: out[k] = sum of rounds 1..k."""
    out = np.zeros((x.shape[0] + 1,) + x.shape[1:])
    np.cumsum(x, axis=0, out=out[1:])
    return out


def _visible(cum: np.ndarray, delay: np.ndarray) -> np.ndarray:
    """
    out[t-1, u, a] = sum over w of cum[t - delay[u, w], w, a] (0 when the
    index drops below 1 or the delay is infinite).
    """
    T1, m, A = cum.shape
    T = T1 - 1
    t = np.arange(1, T + 1)[:, None]
    out = np.zeros((T, m, A))
    for w in range(m):
        d = delay[:, w]
        finite = np.isfinite(d)
        if not finite.any():
            continue
        idx = np.clip(t - np.where(finite, d, T + 1)[None, :].astype(np.int64), 0, T)
        out += np.where(finite[None, :, None], cum[idx, w, :], 0.0)
    return out


def _one_hot(actions: np.ndarray, A: int) -> np.ndarray:
    T, m = actions.shape
    out = np.zeros((T, m, A))
    out[np.arange(T)[:, None], np.arange(m)[None, :], actions] = 1.0
    return out


# ═══════════════════════════════════════════════════════════════════════
# DETERMINISTIC
# ═══════════════════════════════════════════════════════════════════════

def check_lockstep(trace: RunTrace) -> int:
    """(round, agent) pairs where an agent's action, counters or active set differ from agent 0's."""
    if not _usable(trace, "lockstep"):
        return 0
    same = (
        (trace.actions == trace.actions[:, :1])
        & (trace.n == trace.n[:, :1, :]).all(axis=2)
        & (trace.R == trace.R[:, :1, :]).all(axis=2)
        & (trace.active == trace.active[:, :1, :]).all(axis=2)
    )
    return int((~same).sum())


def check_get_info(trace: RunTrace, g: CommGraph) -> int:
    """
    Coop-SE count identity: for every active a,
    n_t^u(a) = #plays of a by w at rounds k <= t - max(dist(w, u), 1).
    """
    if not _usable(trace, "get-info"):
        return 0
    plays = _cumulative(_one_hot(trace.actions, trace.A))
    expected = _visible(plays, np.maximum(g.dist, 1).astype(float))
    wrong = trace.active & (trace.n != np.rint(expected).astype(np.int64))
    return int(wrong.sum())


def check_fast_path(config: SimConfig) -> int:
    """(seed, round, agent) triples where the fast path and explicit flooding choose differently."""
    explicit = config.model_copy(update={"policy": "coop-se", "fast_path": False, "capture_trace": False})
    fast = explicit.model_copy(update={"fast_path": True})
    g = build_graph(explicit)
    mismatches = 0
    for seed in config.seeds:
        a, _ = run(explicit, seed, graph=g)
        b, _ = run(fast, seed, graph=g)
        mismatches += int((a.actions != b.actions).sum())
    return mismatches


def check_equivalence_restricted(config: SimConfig) -> bool:
    """
    Run Coop-SE on the spanning-tree edges and Coop-SE-Restricted with the
    same streams; True iff actions and active sets agree at every
    (round, agent) for every seed.
    """
    g = build_graph(config)
    tree = build_spanning_tree(g, config.topology.root)
    tree_graph = tree.as_graph()
    base = config.model_copy(update={"capture_trace": True, "fast_path": False,
                                     "track_provenance": False, "trace_window": 0})
    coop = base.model_copy(update={"policy": "coop-se"})
    restricted = base.model_copy(update={"policy": "restricted"})
    for seed in config.seeds:
        _, t1 = run(coop, seed, graph=tree_graph)
        _, t2 = run(restricted, seed, graph=g)
        if not (np.array_equal(t1.actions, t2.actions) and np.array_equal(t1.active, t2.active)):
            logger.info("❌ restricted/coop-se diverge at seed %d", seed)
            return False
    return True


def check_delay_lowcomm(trace: RunTrace, tree: SpanningTree, A: int) -> int:
    """
    Low-Comm timing on a provenance-tracked trace.

    Every play of w at round k must enter u's counters by
    k + treeDist(w, u) + 2A, and along an ancestor/descendant chain it
    arrives exactly treeDist rounds after w first sent it that way. Plays
    of an action that some agent on the path had eliminated by the
    deadline are exempt.
    """
    if not _usable(trace, "low-comm delay"):
        return 0
    T, m = trace.T, trace.m
    elim_round = trace.elimination_round()
    actions = trace.actions
    paths = {(w, u): tree.path(w, u) for w in range(m) for u in range(m) if w != u}
    ancestors = [set(tree.ancestors(v)) for v in range(m)]

    violations = 0
    for k in range(1, T + 1):
        for w in range(m):
            a = int(actions[k - 1, w])
            for u in range(m):
                if u == w:
                    continue
                dist = int(tree.tree_dist[w, u])
                deadline = k + dist + 2 * A
                if any(elim_round[x, a] <= min(deadline, T) for x in paths[(w, u)]):
                    continue
                arrived = trace.arrivals.get((k, w, u))
                if deadline <= T and (arrived is None or arrived > deadline):
                    violations += 1
                    continue
                if arrived is None:
                    continue
                if u in ancestors[w]:
                    sent = trace.first_up.get((k, w))
                elif w in ancestors[u]:
                    sent = trace.first_down.get((k, w))
                else:
                    continue
                if sent is not None and arrived != sent + dist:
                    violations += 1
    return violations


def check_message_bounds(metrics: Metrics, config: SimConfig, trace: Optional[RunTrace] = None) -> int:
    """
    Messages over the size budget: A RwdMany widths for Restricted, one
    event for Low-Comm. Other policies are reported only (always 0).
    """
    widths = EventWidths.for_run(metrics.m, metrics.T, metrics.A)
    if config.policy == "restricted":
        budget, max_events = widths.restricted_budget, None
    elif config.policy == "low-comm":
        budget, max_events = widths.single_event_budget, 1
    else:
        return 0
    if trace is not None and trace.complete:
        over = trace.msg_max_bits > budget
        if max_events is not None:
            over |= trace.msg_max_events > max_events
        return int(over.sum())
    over = metrics.max_message_bits > budget
    if max_events is not None:
        over = over or metrics.max_message_events > max_events
    return int(over)


def check_stage_structure(trace: RunTrace) -> int:
    """
    Per agent: stages partition the recorded rounds, stage j holds
    A - j + 1 actions and the sum of 1 / A_j stays within ln A + 1.
    """
    if not _usable(trace, "stage structure"):
        return 0
    violations = 0
    bound = harmonic_bound(trace.A)
    sizes = trace.active.sum(axis=2)
    for v in range(trace.m):
        st = stages(trace, v)
        expected_start = 1
        for s in st:
            if s.start != expected_start or s.A_j != trace.A - s.j + 1:
                violations += 1
            if s.length and sizes[s.start - 1: s.start - 1 + s.length, v].tolist() != [s.A_j] * s.length:
                violations += 1
            expected_start = s.start + s.length
        if expected_start != trace.T + 1:
            violations += 1
        if sum_inverse_sizes(st) > bound + 1e-12:
            violations += 1
    return violations


# ═══════════════════════════════════════════════════════════════════════
# STATISTICAL
# ═══════════════════════════════════════════════════════════════════════

def check_sync(trace: RunTrace, g: CommGraph, ref_agent: int = 0) -> int:
    """
    For each stage j of ref_agent longer than 16 rounds, every agent within
    tau_j / 4 must hold ref_agent's stage-j active set throughout
    [t_j + ceil(tau_j / 4), t_j + floor(tau_j / 2)].
    """
    if not _usable(trace, "sync"):
        return 0
    violations = 0
    for s in stages(trace, ref_agent):
        tau = s.length
        if tau <= 16:
            continue
        near = np.flatnonzero(g.dist[ref_agent] <= tau / 4)
        lo = s.start + math.ceil(tau / 4)
        hi = s.start + tau // 2
        target = np.zeros(trace.A, dtype=bool)
        target[list(s.active)] = True
        block = trace.active[lo - 1:hi, near, :]
        violations += int((block != target).any(axis=2).sum())
    return violations


def check_sample_bound(trace: RunTrace, g: CommGraph, ref_agent: int, iota: float) -> int:
    """
    At the last round of each stage i, every action still active at
    ref_agent has at least
    sum over j <= i with tau_j > 16 of tau_j / (16 A_j) |N_{<= tau_j/4}| - 2 iota
    observations.
    """
    if not _usable(trace, "sample bound"):
        return 0
    violations = 0
    acc = 0.0
    for s in stages(trace, ref_agent):
        if s.length > 16:
            acc += s.length / (16 * s.A_j) * neighborhood_size(g, ref_agent, s.length / 4)
        if s.length == 0:
            continue
        end = s.start + s.length - 1
        active = trace.active[end - 1, ref_agent]
        counts = trace.n[end - 1, ref_agent]
        violations += int((counts[active] < acc - 2 * iota).sum())
    return violations


def check_good_events(trace: RunTrace, instance: BanditInstance, iota: float) -> Dict[str, int]:
    """
    Good-event tallies over (round, agent, action):

    g1: the true mean falls outside [LCB, UCB]
    g2: an active action has fewer than half its expected visible samples minus 2 iota
    g3: own plays exceed twice their expectation plus 12 iota

    Expectations use p = 1 / |active| over each agent's recorded active sets
    and the trace's visibility delays.
    """
    if not _usable(trace, "good events"):
        return {"g1": 0, "g2": 0, "g3": 0, "violated": 0}
    mu = np.asarray(instance.means)[None, None, :]
    _, _, ucb, lcb = confidence_bounds(trace.n, trace.R, iota)
    g1 = int(((mu < lcb) | (mu > ucb)).sum())

    active = trace.active
    p = active / np.maximum(active.sum(axis=2, keepdims=True), 1)
    cum_p = _cumulative(p)
    expected = _visible(cum_p, trace.delay)
    g2 = int((active & (trace.n < 0.5 * expected - 2 * iota)).sum())

    own = _cumulative(_one_hot(trace.actions, trace.A))
    b = own[:-1]                                      # own plays before round t
    g3 = int((b > 2 * cum_p[:-1] + 12 * iota).sum())
    return {"g1": g1, "g2": g2, "g3": g3, "violated": int(g1 + g2 + g3 > 0)}


# ═══════════════════════════════════════════════════════════════════════
# PER-RUN VERDICTS
# ═══════════════════════════════════════════════════════════════════════

def trace_verdicts(metrics: Metrics, trace: RunTrace, config: SimConfig, g: CommGraph) -> Dict[str, int]:
    """
    Run the deterministic checks that need nothing but this run's trace
    and record them in `metrics.verdicts`.

    Every policy gets stage structure and message bounds; Sus-Act adds
    lockstep, Coop-SE the get-info identity and a provenance-tracked
    Low-Comm run the delay check.
    """
    verdicts = {
        "stage_structure": check_stage_structure(trace),
        "message_bounds": check_message_bounds(metrics, config, trace),
    }
    if config.policy == "sus-act":
        verdicts["lockstep"] = check_lockstep(trace)
    elif config.policy == "coop-se":
        verdicts["get_info"] = check_get_info(trace, g)
    elif config.policy == "low-comm" and config.track_provenance:
        tree = build_spanning_tree(g, config.topology.root)
        verdicts["delay_lowcomm"] = check_delay_lowcomm(trace, tree, config.A)
    metrics.verdicts.update(verdicts)
    if any(verdicts.values()):
        logger.warning("⚠️ seed %d: %s", metrics.seed,
                       ", ".join(f"{k}={v}" for k, v in verdicts.items() if v))
    return verdicts
