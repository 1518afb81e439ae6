"""
Experiments Configuration
=========================
Named experiment presets, one per acceptance experiment, plus the
lower-bound instance builder. The CLI resolves `--preset NAME` here and
lets explicit flags override the preset's fields.
"""

import math
from typing import List, Tuple

from models import ExperimentSpec, InstanceSpec, SimConfig, TopologySpec

# ═══════════════════════════════════════════════════════════════════════
# PRESETS
# ═══════════════════════════════════════════════════════════════════════

EXPERIMENTS = {
    "lockstep": ExperimentSpec(
        name="verify",
        description="Sus-Act on a 20-cycle: every agent plays the same action every round",
        config=SimConfig(
            policy="sus-act",
            instance=InstanceSpec(A=5, gap=0.2),
            topology=TopologySpec(name="cycle", m=20),
            T=2000,
            seeds=list(range(10)),
        ),
    ),
    "equivalence": ExperimentSpec(
        name="verify",
        description="Restricted equals Coop-SE run on the spanning-tree edges",
        config=SimConfig(
            policy="restricted",
            instance=InstanceSpec(A=4, gap=0.2),
            topology=TopologySpec(name="line", m=5),
            T=500,
            seeds=list(range(10)),
        ),
        topologies=["line", "star"],
    ),
    "lowcomm-delay": ExperimentSpec(
        name="verify",
        description="Low-Comm reward units reach every agent within treeDist + 2A rounds",
        config=SimConfig(
            policy="low-comm",
            instance=InstanceSpec(A=3, gap=0.2),
            topology=TopologySpec(name="random-tree", m=10),
            T=300,
            seeds=list(range(10)),
            track_provenance=True,
        ),
    ),
    "fast-oracle": ExperimentSpec(
        name="verify",
        description="Fast path and explicit flooding choose identical actions",
        config=SimConfig(
            policy="coop-se",
            instance=InstanceSpec(A=3, gap=0.3),
            topology=TopologySpec(name="cycle", m=8),
            T=50,
            seeds=list(range(20)),
        ),
        topologies=["line", "cycle", "star", "complete", "random-connected", "random-tree"],
    ),
    "regret-sweep": ExperimentSpec(
        name="regret-sweep",
        description="Coop-SE regret on the complete graph as m grows",
        config=SimConfig(
            policy="coop-se",
            instance=InstanceSpec(A=10, gap=0.2),
            topology=TopologySpec(name="complete", m=1),
            T=20000,
            seeds=list(range(30)),
            fast_path=True,
        ),
        m_values=[1, 4, 16, 64],
    ),
    "diameter-compare": ExperimentSpec(
        name="diameter-compare",
        description="Line against complete graph at m=64",
        config=SimConfig(
            policy="coop-se",
            instance=InstanceSpec(A=10, gap=0.2),
            topology=TopologySpec(name="complete", m=64),
            T=20000,
            seeds=list(range(30)),
            fast_path=True,
        ),
        topologies=["line", "complete"],
    ),
    "good-events": ExperimentSpec(
        name="verify",
        description="Confidence intervals and sample counts on a 4-clique",
        config=SimConfig(
            policy="coop-se",
            instance=InstanceSpec(A=3, gap=0.3),
            topology=TopologySpec(name="complete", m=4),
            T=1000,
            seeds=list(range(100)),
        ),
    ),
    "sync": ExperimentSpec(
        name="verify",
        description="Implicit synchronization and sample bound on a 32-line",
        config=SimConfig(
            policy="coop-se",
            instance=InstanceSpec(A=5, gap=0.3),
            topology=TopologySpec(name="line", m=32),
            T=10000,
            seeds=list(range(20)),
            fast_path=True,
        ),
    ),
}


def get_experiment(name: str) -> ExperimentSpec:
    """Get a preset by name. Raises KeyError for unknown names."""
    if name == "lower-bound":
        template, _ = lower_bound_instance(441)
        return ExperimentSpec(name="lower-bound", config=template,
                              description="Line with m = T and one rewarding action out of A")
    if name not in EXPERIMENTS:
        raise KeyError(f"Unknown experiment '{name}', available: {get_experiment_list()}")
    return EXPERIMENTS[name]


def get_experiment_list() -> List[str]:
    return sorted(list(EXPERIMENTS.keys()) + ["lower-bound"])


# ═══════════════════════════════════════════════════════════════════════
# LOWER BOUND
# ═══════════════════════════════════════════════════════════════════════

LOWER_BOUND_T = 60
LOWER_BOUND_SEEDS = 200


def lower_bound_floor(A: int) -> float:
    return 0.99 * (math.sqrt(A) / 20 - 1)


def lower_bound_instance(A: int, T: int = LOWER_BOUND_T,
                         seeds: int = LOWER_BOUND_SEEDS) -> Tuple[SimConfig, float]:
    """
    Hard instance for the diameter-free regret floor.

    A line of m = T agents, deterministic rewards with one action paying 1
    and the rest 0, and the paying action moved to a uniformly drawn index
    per seed. The middle agent cannot learn which action pays before
    roughly sqrt(A)/20 rounds, which forces expected regret of at least
    0.99 * (sqrt(A)/20 - 1).

    Raises:
        ValueError: sqrt(A) <= 20
    """
    if A < 2 or math.sqrt(A) <= 20:
        raise ValueError(f"the lower-bound instance needs sqrt(A) > 20, got A={A}")
    config = SimConfig(
        policy="coop-se",
        instance=InstanceSpec(means=[1.0] + [0.0] * (A - 1), kind="deterministic", shuffle_optimal=True),
        topology=TopologySpec(name="line", m=T),
        T=T,
        seeds=list(range(seeds)),
        fast_path=True,
    )
    return config, lower_bound_floor(A)
