"""
Sweep & Artifacts
=================
Runs many configurations over their seed lists, aggregates regret into
one row per configuration and writes the CSV/JSON artifacts.

Runs are independent, so cells may execute in a process pool; each row
only depends on its own cell, which keeps the table identical whatever
the degree of parallelism.
"""

import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from checkers import trace_verdicts
from models import SimConfig
from simulator import build_graph, run
from trace import Metrics

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = [
    "policy", "topology", "m", "A", "T", "seed_count",
    "mean_max_regret", "stderr", "mean_regret", "stderr_mean_regret", "mean_middle_regret",
    "max_msg_bits", "checker_violations", "error",
]
RUN_COLUMNS = ["round", "agent", "action", "regret_cum", "msg_bits_total"]


def _stderr(values: List[float]) -> float:
    if len(values) < 2:
        return 0.0
    return float(np.std(values, ddof=1) / math.sqrt(len(values)))


def aggregate(config: SimConfig, results: List[Metrics]) -> Dict[str, Any]:
    """One sweep row from the per-seed metrics of a configuration."""
    max_regret = [mt.max_regret for mt in results]
    mean_regret = [mt.mean_regret for mt in results]
    middle = [mt.middle_regret for mt in results]
    return {
        "policy": config.policy,
        "topology": config.topology.name,
        "m": results[0].m if results else config.m,
        "A": config.A,
        "T": config.T,
        "seed_count": len(results),
        "mean_max_regret": float(np.mean(max_regret)) if results else float("nan"),
        "stderr": _stderr(max_regret),
        "mean_regret": float(np.mean(mean_regret)) if results else float("nan"),
        "stderr_mean_regret": _stderr(mean_regret),
        "mean_middle_regret": float(np.mean(middle)) if results else float("nan"),
        "max_msg_bits": max((mt.max_message_bits for mt in results), default=0),
        "checker_violations": sum(mt.empty_active_refusals + sum(mt.verdicts.values()) for mt in results),
        "error": "",
    }


def run_cell(config: SimConfig) -> Dict[str, Any]:
    """
    Run every seed of one configuration; a failure becomes the row's error.

    With capture_trace on, each run's trace is checked and the verdicts
    feed the row's checker_violations.
    """
    try:
        g = build_graph(config)
        results = []
        for seed in config.seeds:
            metrics, trace = run(config, seed, graph=g)
            if trace is not None:
                trace_verdicts(metrics, trace, config, g)
            results.append(metrics)
        row = aggregate(config, results)
        logger.info("✅ %s %s m=%d: mean max regret %.2f over %d seeds",
                    config.policy, config.topology.name, config.m, row["mean_max_regret"], len(results))
        return row
    except Exception as e:
        logger.error("❌ %s %s m=%d failed: %s", config.policy, config.topology.name, config.m, e)
        row = aggregate(config, [])
        row["seed_count"] = len(config.seeds)
        row["error"] = f"{type(e).__name__}: {e}"
        return row


def sweep(configs: List[SimConfig], parallelism: int = 1) -> pd.DataFrame:
    """
    Aggregated table, one row per configuration with at least one seed.

    Args:
        configs: configurations to run
        parallelism: worker processes; 1 runs in-process
    """
    cells = [c for c in configs if c.seeds]
    if not cells:
        return pd.DataFrame(columns=SWEEP_COLUMNS)

    print("\n" + "=" * 60)
    print(f"📊 SWEEP: {len(cells)} configurations, {sum(len(c.seeds) for c in cells)} runs")
    print("=" * 60)

    if parallelism > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            rows = list(pool.map(run_cell, cells))
    else:
        rows = [run_cell(c) for c in cells]
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)


# ═══════════════════════════════════════════════════════════════════════
# ARTIFACTS
# ═══════════════════════════════════════════════════════════════════════

def run_frame(metrics: Metrics) -> pd.DataFrame:
    """Per-run table: one row per (round, agent)."""
    T, m = metrics.actions.shape
    return pd.DataFrame({
        "round": np.repeat(np.arange(1, T + 1), m),
        "agent": np.tile(np.arange(m), T),
        "action": metrics.actions.reshape(-1),
        "regret_cum": metrics.regret_curve.reshape(-1),
        "msg_bits_total": metrics.msg_bits.reshape(-1),
    }, columns=RUN_COLUMNS)


def write_run(metrics: Metrics, out: Path, tag: Optional[str] = None) -> Path:
    """Write <tag>.csv, <tag>.json and <tag>_summary.json; returns the CSV path."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    tag = tag or f"run_{metrics.policy}_{metrics.topology}_m{metrics.m}_seed{metrics.seed}"
    frame = run_frame(metrics)
    csv_path = out / f"{tag}.csv"
    frame.to_csv(csv_path, index=False)
    frame.to_json(out / f"{tag}.json", orient="records")
    write_json(metrics.summary(), out / f"{tag}_summary.json")
    return csv_path


def write_sweep(table: pd.DataFrame, out: Path, tag: str = "sweep") -> Path:
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{tag}.csv"
    table.to_csv(csv_path, index=False)
    table.to_json(out / f"{tag}.json", orient="records")
    return csv_path


def write_json(payload: Dict[str, Any], path: Path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True))
    return path
