"""
Protocol Events
===============
Reward, elimination and aggregated-reward events, the messages that
carry them between agents, and the canonical bit-size accounting used
to check the bounded-communication guarantees.

The encoding is an accounting model only: events move between agents as
Python values and their sizes are tallied separately.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, NamedTuple, Set, Tuple

RWD = "rwd"
ELIM = "elim"
RWD_MANY = "rwd_many"

TAGS = (RWD, ELIM, RWD_MANY)


class Event(NamedTuple):
    """
    One protocol unit.

    `r` is the reward (Rwd) or reward sum (RwdMany); `n` the sample count
    of a RwdMany. `units` lists the (round, agent) plays folded into a
    RwdMany when provenance tracking is on; it never counts toward bits.
    """
    tag: str
    t: int
    id: int
    a: int
    r: float = 0.0
    n: int = 0
    units: tuple = ()

    @property
    def key(self) -> Tuple[str, int, int, int]:
        """Identity for deduplication; the reward value is not part of it."""
        return (self.tag, self.t, self.id, self.a)


def rwd(t: int, id: int, a: int, r: float) -> Event:
    return Event(RWD, t, id, a, r)


def elim(t: int, id: int, a: int) -> Event:
    return Event(ELIM, t, id, a)


def rwd_many(t: int, id: int, a: int, r: float, n: int, units: tuple = ()) -> Event:
    if n < 0:
        raise ValueError(f"RwdMany sample count must be >= 0, got {n}")
    return Event(RWD_MANY, t, id, a, r, n, units)


@dataclass
class Message:
    """A set of events sent from `sender` to `receiver` at round `sent_at`."""
    sender: int
    receiver: int
    sent_at: int
    events: tuple = ()
    bits: int = 0

    def __len__(self) -> int:
        return len(self.events)


# ═══════════════════════════════════════════════════════════════════════
# BIT ACCOUNTING
# ═══════════════════════════════════════════════════════════════════════

def _clog2(x: int) -> int:
    return math.ceil(math.log2(x)) if x > 1 else 0


@dataclass(frozen=True)
class EventWidths:
    """Field widths in bits for a run with m agents, horizon T and A actions."""
    m: int
    T: int
    A: int
    widths: Dict[str, int] = field(default_factory=dict, compare=False)

    @classmethod
    def for_run(cls, m: int, T: int, A: int) -> "EventWidths":
        header = 2 + _clog2(T + 1) + _clog2(m) + _clog2(A)
        count = _clog2(m * T + 1)
        return cls(m=m, T=T, A=A, widths={
            ELIM: header,
            RWD: header + 1,
            RWD_MANY: header + 2 * count,
        })

    def of(self, e: Event) -> int:
        return self.widths[e.tag]

    def message_bits(self, events: Iterable[Event]) -> int:
        return sum(self.widths[e.tag] for e in events)

    @property
    def restricted_budget(self) -> int:
        """Largest message a tree-restricted agent may send: one RwdMany per action."""
        return self.A * self.widths[RWD_MANY]

    @property
    def single_event_budget(self) -> int:
        return max(self.widths.values())


def encode_size_bits(e: Event, m: int, T: int, A: int) -> int:
    """
    Canonical size of one event.

    tag 2 bits, t ceil(log2(T+1)), id ceil(log2 m), a ceil(log2 A); Rwd
    adds one reward bit, RwdMany adds n and r at ceil(log2(mT+1)) each.
    """
    return EventWidths.for_run(m, T, A).of(e)


def dedupe(events: Iterable[Event], seen: Set[tuple]) -> Tuple[List[Event], Set[tuple]]:
    """Keep the events whose identity key is not in `seen`; `seen` is updated in place."""
    fresh = []
    for e in events:
        k = e.key
        if k in seen:
            continue
        seen.add(k)
        fresh.append(e)
    return fresh, seen


def prune_keys(keys: Set[tuple], before: int) -> int:
    """Drop identity keys of events created before round `before`; returns how many went."""
    stale = [k for k in keys if k[1] < before]
    keys.difference_update(stale)
    return len(stale)
