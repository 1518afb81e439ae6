"""
Run Recording
=============
RunTrace keeps per-round per-agent snapshots (actions, active sets,
counters, message sizes) for the checkers; Metrics keeps what every run
reports. Stage decomposition turns one agent's active-set history into
the intervals between its eliminations.
"""

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

logger = logging.getLogger(__name__)


# ═══════════════════════════════════════════════════════════════════════
# METRICS
# ═══════════════════════════════════════════════════════════════════════

@dataclass
class Metrics:
    """Per-run results. Regret curves are cumulative pseudo-regret, shape (T, m)."""
    policy: str
    topology: str
    m: int
    A: int
    T: int
    seed: int
    actions: np.ndarray
    regret_curve: np.ndarray
    msg_bits: np.ndarray                 # bits sent per (round, agent)
    max_message_bits: int = 0
    max_message_events: int = 0
    empty_active_refusals: int = 0
    messages_modeled: bool = True
    verdicts: Dict[str, int] = field(default_factory=dict)

    @property
    def final_regret(self) -> np.ndarray:
        if self.regret_curve.size == 0:
            return np.zeros(self.m)
        return self.regret_curve[-1]

    @property
    def max_regret(self) -> float:
        return float(self.final_regret.max())

    @property
    def mean_regret(self) -> float:
        return float(self.final_regret.mean())

    @property
    def middle_regret(self) -> float:
        return float(self.final_regret[self.m // 2])

    @property
    def mean_bits_per_round(self) -> float:
        if self.msg_bits.size == 0:
            return 0.0
        return float(self.msg_bits.sum(axis=1).mean())

    def summary(self) -> Dict[str, Any]:
        """JSON-safe digest of the run."""
        return {
            "policy": self.policy,
            "topology": self.topology,
            "m": self.m,
            "A": self.A,
            "T": self.T,
            "seed": self.seed,
            "final_regret": [float(x) for x in self.final_regret],
            "max_regret": self.max_regret,
            "mean_regret": self.mean_regret,
            "middle_regret": self.middle_regret,
            "max_message_bits": int(self.max_message_bits),
            "max_message_events": int(self.max_message_events),
            "mean_bits_per_round": self.mean_bits_per_round,
            "empty_active_refusals": int(self.empty_active_refusals),
            "messages_modeled": self.messages_modeled,
            "verdicts": {k: int(v) for k, v in self.verdicts.items()},
        }


# ═══════════════════════════════════════════════════════════════════════
# TRACE
# ═══════════════════════════════════════════════════════════════════════

@dataclass
class Stage:
    """Stage j of one agent: rounds [start, start + length) with A_j active actions."""
    j: int
    start: int
    length: int
    A_j: int
    active: Optional[tuple] = None       # None for zero-length stages


class RunTrace:
    """
    Per-round snapshots of every agent.

    Snapshots are taken after an agent has processed its inbox and run its
    elimination step, i.e. the active set it chose from and the counters
    it eliminated with. With `window` > 0 only the last `window` rounds
    are kept.
    """

    def __init__(self, policy: str, m: int, A: int, T: int, window: int = 0):
        self.policy = policy
        self.m = m
        self.A = A
        self.T = T
        self.window = window
        self._rows = deque(maxlen=window or None)
        self._cache: Dict[str, np.ndarray] = {}
        self.delay = np.full((m, m), np.inf)     # visibility delay, set by the simulator
        self.refusals = np.zeros(m, dtype=np.int64)
        self.eliminated_at: List[Dict[int, int]] = [dict() for _ in range(m)]
        self.arrivals: Dict[tuple, int] = {}     # (k, w, u) -> round
        self.first_up: Dict[tuple, int] = {}     # (k, w) -> round
        self.first_down: Dict[tuple, int] = {}

    # ── recording ──────────────────────────────────────────────────────
    def record(self, t: int, actions, rewards, active, n, R, bits, max_bits, max_events) -> None:
        self._rows.append((t, np.array(actions), np.array(rewards), np.array(active, dtype=bool),
                           np.array(n), np.array(R), np.array(bits), np.array(max_bits),
                           np.array(max_events)))
        self._cache.clear()

    def finalize(self, states: List[dict]) -> "RunTrace":
        """Pull per-agent bookkeeping out of the final agent states."""
        for v, st in enumerate(states):
            self.refusals[v] = st.get("refusals", 0)
            self.eliminated_at[v] = dict(st.get("eliminated_at", {}))
            for (k, w), t in st.get("arrivals", {}).items():
                self.arrivals[(k, w, v)] = t
            self.first_up.update(st.get("first_up", {}))
            self.first_down.update(st.get("first_down", {}))
        return self

    # ── access ─────────────────────────────────────────────────────────
    @property
    def complete(self) -> bool:
        return len(self._rows) == self.T and (not self._rows or self._rows[0][0] == 1)

    @property
    def first_round(self) -> int:
        return self._rows[0][0] if self._rows else 1

    def _stack(self, name: str, i: int) -> np.ndarray:
        if name not in self._cache:
            self._cache[name] = np.stack([row[i] for row in self._rows]) if self._rows else np.zeros((0, self.m))
        return self._cache[name]

    @property
    def rounds(self) -> np.ndarray:
        return np.array([row[0] for row in self._rows], dtype=np.int64)

    @property
    def actions(self) -> np.ndarray:
        return self._stack("actions", 1)

    @property
    def rewards(self) -> np.ndarray:
        return self._stack("rewards", 2)

    @property
    def active(self) -> np.ndarray:
        return self._stack("active", 3)

    @property
    def n(self) -> np.ndarray:
        return self._stack("n", 4)

    @property
    def R(self) -> np.ndarray:
        return self._stack("R", 5)

    @property
    def msg_bits(self) -> np.ndarray:
        return self._stack("msg_bits", 6)

    @property
    def msg_max_bits(self) -> np.ndarray:
        return self._stack("msg_max_bits", 7)

    @property
    def msg_max_events(self) -> np.ndarray:
        return self._stack("msg_max_events", 8)

    def elimination_round(self) -> np.ndarray:
        """(m, A) first round each action left each agent's active set; T + 1 if never."""
        out = np.full((self.m, self.A), self.T + 1, dtype=np.int64)
        for v, record in enumerate(self.eliminated_at):
            for a, t in record.items():
                out[v, a] = t
        return out


# ═══════════════════════════════════════════════════════════════════════
# STAGES
# ═══════════════════════════════════════════════════════════════════════

def stages(trace: RunTrace, v: int) -> List[Stage]:
    """
    Stage decomposition of agent v.

    A new stage starts at every round where v's active set shrinks; when
    k actions leave at once, k - 1 zero-length stages are recorded so that
    stage j always has A_j = A - j + 1 actions.
    """
    active = trace.active[:, v, :] if trace.rounds.size else np.zeros((0, trace.A), dtype=bool)
    sizes = active.sum(axis=1)
    A = trace.A
    out: List[Stage] = []
    prev = A
    for i, t in enumerate(int(x) for x in trace.rounds):
        size = int(sizes[i])
        if i > 0 and size >= prev:
            continue
        zero_length = (A - size) if i == 0 else (prev - size - 1)
        if out:
            out[-1].length = t - out[-1].start
        for _ in range(zero_length):
            out.append(Stage(j=len(out) + 1, start=t, length=0, A_j=A - len(out)))
        out.append(Stage(j=len(out) + 1, start=t, length=0, A_j=A - len(out),
                         active=tuple(int(a) for a in np.flatnonzero(active[i]))))
        prev = size
    if out:
        out[-1].length = int(trace.rounds[-1]) + 1 - out[-1].start
    return out


def sum_inverse_sizes(stage_list: List[Stage]) -> float:
    return sum(1.0 / s.A_j for s in stage_list)


def harmonic_bound(A: int) -> float:
    return math.log(A) + 1.0
