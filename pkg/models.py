"""
Configuration Models
====================
Pydantic models for validated run configuration. These define the
structure of everything the simulator, the sweep layer and the CLI
exchange: the bandit instance, the communication graph, the policy and
the experiment wrapped around them.
"""

import math
from pathlib import Path
from typing import List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from bandit import BanditInstance, gap_means, make_instance
from config import DEFAULT_A, DEFAULT_T, MASTER_SEED, POLICIES, TOPOLOGIES


class ConfigError(ValueError):
    """Invalid combination of otherwise valid options."""


PolicyName = Literal["coop-se", "sus-act", "restricted", "low-comm", "single-se"]
SelectionRule = Literal["uniform", "round-robin"]


# ═══════════════════════════════════════════════════════════════════════
# INSTANCE & TOPOLOGY
# ═══════════════════════════════════════════════════════════════════════

class InstanceSpec(BaseModel):
    """Bandit instance: explicit means, or A actions at a uniform gap."""
    means: Optional[List[float]] = Field(None, description="One mean per action")
    gap: Optional[float] = Field(None, ge=0.0, le=1.0, description="Uniform-gap shorthand")
    A: int = Field(DEFAULT_A, ge=2, description="Action count when means are not given")
    kind: Literal["bernoulli", "deterministic"] = "bernoulli"
    shuffle_optimal: bool = Field(
        False,
        description="Move the optimal mean to an index drawn per seed",
    )

    @field_validator("means")
    @classmethod
    def _check_means(cls, v):
        if v is None:
            return v
        if len(v) < 2:
            raise ValueError(f"need at least 2 means, got {len(v)}")
        bad = [x for x in v if not 0.0 <= x <= 1.0]
        if bad:
            raise ValueError(f"means must lie in [0, 1], got {bad}")
        return v

    @model_validator(mode="after")
    def _sync_action_count(self):
        if self.means is not None:
            self.A = len(self.means)
        elif self.gap is None:
            self.gap = 0.2
        return self

    def resolved_means(self) -> List[float]:
        return list(self.means) if self.means is not None else gap_means(self.A, self.gap)

    def build(self) -> BanditInstance:
        return make_instance(self.resolved_means(), self.kind)


class TopologySpec(BaseModel):
    """Communication graph family (or edge-list file) and tree root."""
    name: str = "complete"
    m: int = Field(1, ge=1)
    p: Optional[float] = Field(None, gt=0.0, le=1.0)
    rows: Optional[int] = Field(None, ge=1)
    cols: Optional[int] = Field(None, ge=1)
    edge_file: Optional[Path] = None
    root: int = Field(0, ge=0)

    @field_validator("name")
    @classmethod
    def _check_name(cls, v):
        if v not in TOPOLOGIES:
            raise ValueError(f"unknown topology '{v}', available: {TOPOLOGIES}")
        return v

    @model_validator(mode="after")
    def _check_root(self):
        if self.edge_file is None and self.root >= self.m:
            raise ValueError(f"root {self.root} out of range for m={self.m}")
        return self

    def known_diameter(self) -> Optional[int]:
        """Diameter of the deterministic families; None when it depends on a draw."""
        m = self.m
        if self.edge_file is not None:
            return None
        if self.name in ("line", "path"):
            return m - 1
        if self.name == "cycle":
            return m // 2
        if self.name == "star":
            return min(m - 1, 2)
        if self.name == "complete":
            return 1 if m > 1 else 0
        if self.name == "grid":
            if self.rows and self.cols:
                return self.rows + self.cols - 2
            side = math.isqrt(m)
            return 2 * side - 2 if side * side == m else None
        return None


# ═══════════════════════════════════════════════════════════════════════
# RUN CONFIGURATION
# ═══════════════════════════════════════════════════════════════════════

class SimConfig(BaseModel):
    """Everything a run needs; identical configs with identical seeds give identical results."""
    instance: InstanceSpec = Field(default_factory=InstanceSpec)
    topology: TopologySpec = Field(default_factory=TopologySpec)
    policy: PolicyName = "coop-se"
    T: int = Field(DEFAULT_T, ge=1)
    seeds: List[int] = Field(default_factory=lambda: [0])
    master_seed: int = Field(MASTER_SEED, ge=0)
    fast_path: bool = False
    capture_trace: bool = False
    track_provenance: bool = False
    selection: SelectionRule = "uniform"
    trace_window: int = Field(0, ge=0, description="0 keeps every round")

    @field_validator("seeds")
    @classmethod
    def _check_seeds(cls, v):
        if any(s < 0 for s in v):
            raise ValueError(f"seeds must be >= 0, got {v}")
        return v

    @model_validator(mode="after")
    def _check_combination(self):
        if self.fast_path and self.policy != "coop-se":
            raise ConfigError(f"the fast path only applies to coop-se, not '{self.policy}'")
        if self.track_provenance and self.policy != "low-comm":
            raise ConfigError("provenance tracking only applies to low-comm")
        if self.selection != "uniform" and self.policy not in ("coop-se", "single-se"):
            raise ConfigError(f"selection rule '{self.selection}' only applies to coop-se/single-se")
        if self.policy == "sus-act":
            D = self.topology.known_diameter()
            if D is not None and max(D, 1) > self.T:
                raise ConfigError(f"sus-act needs diameter <= T, got D={D}, T={self.T}")
        return self

    @property
    def m(self) -> int:
        return self.topology.m

    @property
    def A(self) -> int:
        return self.instance.A

    def with_seeds(self, seeds: List[int]) -> "SimConfig":
        return self.model_copy(update={"seeds": list(seeds)})


class ExperimentSpec(BaseModel):
    """A named experiment: a base config, optional sweep axis and an output directory."""
    name: Literal["regret-sweep", "diameter-compare", "lower-bound", "verify", "single-run"]
    config: SimConfig
    m_values: List[int] = Field(default_factory=list)
    topologies: List[str] = Field(default_factory=list)
    policies: List[str] = Field(default_factory=list)
    out: Optional[Path] = None
    description: str = ""

    @field_validator("topologies")
    @classmethod
    def _check_topologies(cls, v):
        unknown = [x for x in v if x not in TOPOLOGIES]
        if unknown:
            raise ValueError(f"unknown topologies {unknown}")
        return v

    @field_validator("policies")
    @classmethod
    def _check_policies(cls, v):
        unknown = [x for x in v if x not in POLICIES]
        if unknown:
            raise ValueError(f"unknown policies {unknown}")
        return v

    def expand(self) -> List[SimConfig]:
        """One SimConfig per (policy, topology, m) cell of the sweep grid."""
        policies = self.policies or [self.config.policy]
        topologies = self.topologies or [self.config.topology.name]
        m_values = self.m_values or [self.config.m]
        cells = []
        for policy in policies:
            for name in topologies:
                for m in m_values:
                    topo = self.config.topology.model_copy(update={"name": name, "m": m})
                    update = {"policy": policy, "topology": topo}
                    if policy != "coop-se":
                        update["fast_path"] = False
                    cells.append(SimConfig.model_validate({**self.config.model_dump(), **update,
                                                           "topology": topo.model_dump()}))
        return cells
