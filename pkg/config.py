"""
Configuration for the Cooperative Bandit Simulator
==================================================
Handles environment variables, defaults and constants shared by the
simulator, the checkers and the command-line front end.
"""

import os
from pathlib import Path

from dotenv import load_dotenv

# Load environment variables
ENV_PATH = Path(__file__).parent / ".env"
load_dotenv(ENV_PATH)

# ═══════════════════════════════════════════════════════════════════════
# RUN DEFAULTS
# ═══════════════════════════════════════════════════════════════════════

MASTER_SEED = int(os.getenv("MASTER_SEED", "0"))
JOBS = int(os.getenv("JOBS", "1"))                  # Parallel runs in a sweep
DEFAULT_T = int(os.getenv("DEFAULT_T", "1000"))
DEFAULT_A = int(os.getenv("DEFAULT_A", "5"))
DEFAULT_SEEDS = int(os.getenv("DEFAULT_SEEDS", "1"))

# 0 keeps every round of a captured trace
TRACE_WINDOW = int(os.getenv("TRACE_WINDOW", "0"))

# ═══════════════════════════════════════════════════════════════════════
# OUTPUT & LOGGING
# ═══════════════════════════════════════════════════════════════════════

OUTPUT_DIR = Path(os.getenv("OUTPUT_DIR", "results"))
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()
LOG_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"

# ═══════════════════════════════════════════════════════════════════════
# NAMES
# ═══════════════════════════════════════════════════════════════════════

POLICIES = ["coop-se", "sus-act", "restricted", "low-comm", "single-se"]
TOPOLOGIES = ["line", "path", "cycle", "star", "grid", "complete", "random-connected", "random-tree"]
REWARD_KINDS = ["bernoulli", "deterministic"]

# Policies whose messages travel on the shared spanning tree
TREE_POLICIES = ["restricted", "low-comm"]

# Exit codes of the command-line front end
EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_CHECK_FAILED = 2


# ═══════════════════════════════════════════════════════════════════════
# VALIDATION
# ═══════════════════════════════════════════════════════════════════════

def validate_config():
    """Validate the environment-driven defaults."""
    if JOBS < 1:
        raise ValueError(f"JOBS must be >= 1, got {JOBS}")
    if TRACE_WINDOW < 0:
        raise ValueError(f"TRACE_WINDOW must be >= 0, got {TRACE_WINDOW}")
    if DEFAULT_T < 1 or DEFAULT_A < 2:
        raise ValueError(f"DEFAULT_T must be >= 1 and DEFAULT_A >= 2, got T={DEFAULT_T}, A={DEFAULT_A}")
    if LOG_LEVEL not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
        raise ValueError(f"Unknown LOG_LEVEL '{LOG_LEVEL}'")
    return True


def get_output_dir(out: str = None) -> Path:
    """
    Resolve the artifact directory and make sure it exists.

    Args:
        out: Optional override (the --out flag). Falls back to OUTPUT_DIR.
    """
    path = Path(out) if out else OUTPUT_DIR
    path.mkdir(parents=True, exist_ok=True)
    return path
