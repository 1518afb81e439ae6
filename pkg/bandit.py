"""
Bandit Core
===========
Stochastic bandit instances, reward sampling, the confidence-width
constant and per-agent pseudo-regret accounting.

Rewards are Bernoulli or deterministic, so aggregated reward sums are
integers for Bernoulli instances and the bit accounting in events.py
stays exact.
"""

import math
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

BERNOULLI = "bernoulli"
DETERMINISTIC = "deterministic"


@dataclass(frozen=True)
class BanditInstance:
    """Action means plus the derived optimal mean and gaps."""
    means: tuple
    kind: str = BERNOULLI

    @property
    def num_actions(self) -> int:
        return len(self.means)

    @property
    def optimal_mean(self) -> float:
        return max(self.means)

    @property
    def optimal_action(self) -> int:
        return int(np.argmax(self.means))

    @property
    def gaps(self) -> np.ndarray:
        return self.optimal_mean - np.asarray(self.means, dtype=float)

    @property
    def max_gap(self) -> float:
        return float(self.gaps.max())


@dataclass(frozen=True)
class ConfidenceParams:
    """Inputs of the log factor used by every confidence interval."""
    m: int
    T: int
    A: int

    @property
    def iota(self) -> float:
        return iota(self.m, self.T, self.A)


@dataclass
class RegretLedger:
    """
    Cumulative pseudo-regret per agent.

    Increments are the true gap of the played action, never the sampled
    reward, so the ledger is nondecreasing by construction.
    """
    gaps: np.ndarray
    totals: np.ndarray
    history: List[np.ndarray] = field(default_factory=list)
    keep_history: bool = False

    @classmethod
    def for_agents(cls, instance: BanditInstance, m: int, keep_history: bool = False) -> "RegretLedger":
        return cls(gaps=instance.gaps, totals=np.zeros(m), keep_history=keep_history)

    def record(self, actions: Sequence[int]) -> np.ndarray:
        """Add the gaps of one round of actions (one entry per agent)."""
        increment = self.gaps[np.asarray(actions, dtype=int)]
        self.totals = self.totals + increment
        if self.keep_history:
            self.history.append(self.totals.copy())
        return increment

    def curve(self) -> np.ndarray:
        """Cumulative regret per round, shape (rounds, m)."""
        if not self.history:
            return np.zeros((0, len(self.totals)))
        return np.vstack(self.history)


def make_instance(means: Sequence[float], kind: str = BERNOULLI) -> BanditInstance:
    """
    Build a validated bandit instance.

    Raises:
        ValueError: fewer than 2 actions, a mean outside [0, 1], or an
            unknown reward kind.
    """
    means = tuple(float(x) for x in means)
    if len(means) < 2:
        raise ValueError(f"A bandit instance needs at least 2 actions, got {len(means)}")
    bad = [x for x in means if not 0.0 <= x <= 1.0]
    if bad:
        raise ValueError(f"Action means must lie in [0, 1], got {bad}")
    kind = kind.lower()
    if kind not in (BERNOULLI, DETERMINISTIC):
        raise ValueError(f"Unknown reward kind '{kind}'")
    return BanditInstance(means=means, kind=kind)


def gap_means(A: int, gap: float) -> List[float]:
    """
    Uniform-gap shorthand: one optimal action at 0.5 + gap/2 and A - 1
    actions at 0.5 - gap/2.
    """
    if not 0.0 <= gap <= 1.0:
        raise ValueError(f"gap must lie in [0, 1], got {gap}")
    return [0.5 + gap / 2] + [0.5 - gap / 2] * (A - 1)


def sample_reward(instance: BanditInstance, action: int, rng: np.random.Generator) -> float:
    """
    Draw one reward for `action`.

    Exactly one uniform draw is consumed per call for both kinds, so the
    reward stream of an agent advances by one per round whatever it plays.
    """
    if not 0 <= action < instance.num_actions:
        raise ValueError(f"Action {action} out of range for A={instance.num_actions}")
    return reward_from_draw(instance, action, rng.random())


def reward_from_draw(instance: BanditInstance, action: int, u: float) -> float:
    """Reward of `action` given the uniform draw u already taken from the reward stream."""
    mean = instance.means[action]
    if instance.kind == DETERMINISTIC:
        return mean
    return 1.0 if u < mean else 0.0


def rewards_from_draws(instance: BanditInstance, actions: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Vectorized reward_from_draw over one round of agents."""
    means = np.asarray(instance.means, dtype=np.float64)[actions]
    if instance.kind == DETERMINISTIC:
        return means
    return (u < means).astype(np.float64)


def iota(m: int, T: int, A: int) -> float:
    """Natural log of 3·m·T·A."""
    if m < 1 or T < 1 or A < 1:
        raise ValueError(f"iota needs m, T, A >= 1, got m={m}, T={T}, A={A}")
    return math.log(3 * m * T * A)
