"""
Elimination Step
================
Confidence intervals, the successive-elimination rule, action selection
and the guarded removal of actions shared by every policy.

All functions work on boolean action masks. The interval arithmetic is
vectorized so it also applies row-wise to (m, A) arrays, which keeps the
explicit and the fast simulation paths numerically identical.
"""

import logging
import math
from typing import Iterable, Tuple, Union

import numpy as np

from state import AgentState, ConfidenceState

logger = logging.getLogger(__name__)


class EmptyActiveSetError(RuntimeError):
    """An agent was asked to choose from an empty active set."""


def confidence_bounds(n: np.ndarray, R: np.ndarray, iota: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Empirical means, widths and bounds.

    Returns:
        (mu_hat, lam, ucb, lcb) with mu_hat = R / (n v 1) and
        lam = sqrt(2 iota / (n v 1))
    """
    denom = np.maximum(n, 1).astype(np.float64)
    mu_hat = R / denom
    lam = np.sqrt(2.0 * iota / denom)
    return mu_hat, lam, mu_hat + lam, mu_hat - lam


def elim_mask(active: np.ndarray, n: np.ndarray, R: np.ndarray, iota: float) -> np.ndarray:
    """
    Actions to eliminate: active a with UCB(a) strictly below some active LCB.

    Works on one agent (shape (A,)) or on all agents at once (shape (m, A)).
    The action holding the largest LCB always survives, so the result
    never covers the whole active set.
    """
    _, _, ucb, lcb = confidence_bounds(n, R, iota)
    best_lcb = np.where(active, lcb, -np.inf).max(axis=-1, keepdims=True)
    return active & (ucb < best_lcb)


def elim_step(active: np.ndarray, conf: ConfidenceState, iota: float) -> np.ndarray:
    """Elimination rule on one agent's state; returns the eliminated mask."""
    if not active.any():
        raise EmptyActiveSetError("elim_step needs a nonempty active set")
    return elim_mask(active, conf["n"], conf["R"], iota)


def _indices(active: Union[np.ndarray, Iterable[int]]) -> np.ndarray:
    arr = np.asarray(active) if not isinstance(active, (set, frozenset)) else np.array(sorted(active))
    if arr.dtype == bool:
        return np.flatnonzero(arr)
    return np.sort(arr.astype(np.int64))


def select_action(active: Union[np.ndarray, Iterable[int]], u: float) -> int:
    """
    Uniform choice from the active set with one draw u in [0, 1).

    Picks index floor(u * |active|) of the ascending active actions.
    """
    idx = _indices(active)
    if idx.size == 0:
        raise EmptyActiveSetError("cannot select from an empty active set")
    return int(idx[min(int(math.floor(u * idx.size)), idx.size - 1)])


def round_robin_action(active: Union[np.ndarray, Iterable[int]], last: int) -> int:
    """Next active action after `last` in ascending cyclic order."""
    idx = _indices(active)
    if idx.size == 0:
        raise EmptyActiveSetError("cannot select from an empty active set")
    later = idx[idx > last]
    return int(later[0]) if later.size else int(idx[0])


def choose(state: AgentState, u: float, selection: str) -> int:
    if selection == "round-robin":
        return round_robin_action(state["active"], state["last_action"])
    return select_action(state["active"], u)


def remove_actions(state: AgentState, mask: np.ndarray, t: int) -> int:
    """
    Drop `mask` from the agent's active set.

    An incoming batch that would empty the set is refused for the
    lowest-index action that was active before the batch; the refusal is
    counted on the state and returned.
    """
    active = state["active"]
    removed = active & mask
    if not removed.any():
        return 0
    remaining = active & ~mask
    refused = 0
    if not remaining.any():
        keep = int(np.flatnonzero(active)[0])
        removed[keep] = False
        remaining[keep] = True
        refused = 1
        state["refusals"] += 1
        logger.debug("⚠️ agent %d refused eliminating its last action %d at t=%d",
                     state["id"], keep, t)
    for a in np.flatnonzero(removed):
        state["eliminated_at"].setdefault(int(a), t)
    state["active"] = remaining
    return refused


def mask_of(actions: Iterable[int], A: int) -> np.ndarray:
    mask = np.zeros(A, dtype=bool)
    for a in actions:
        mask[a] = True
    return mask
